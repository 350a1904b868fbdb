use std::collections::HashSet;
use std::path::Path;

use relpub_core::archive::{self, ArchiveAdapter, DepositOutcome};
use relpub_core::datacite::DataCiteRecord;
use relpub_core::metadata::{AssetSet, ProjectMetadata};
use relpub_core::gitlab::{self, AssetLink, ReleaseOutcome, ReleaseRecord, UploadOutcome};
use relpub_core::http::HttpClient;

use super::bag::{bag_name, build_release_bag};
use super::common::{
    bag_settings, load_assets, load_inputs, output_dir, package_name, release_context, render, tag, with_datacite,
    write_datacite,
};
use super::remote::{archive_adapter, archive_settings, derived_release_url, gitlab_settings, require_gitlab_token};
use super::steps::{StepStatus, Steps};
use crate::args::{Job, ReleaseArgs};
use crate::config::{first, Config};
use crate::error::CliError;
use crate::output::{run, Outcome};

pub const RELEASE_STEPS: &[&str] = &[
    "datacite",
    "upload-packages",
    "gitlab-release",
    "bag",
    "archive-dataset",
    "archive-upload",
    "archive-submit",
];

pub fn run_release(args: &ReleaseArgs, cfg: &Config) -> Outcome {
    run("release", |out| {
        let mut steps = Steps::new(RELEASE_STEPS);
        let result = pipeline(args, cfg, &mut steps, out);
        steps.finish(out);
        result
    })
}

fn pipeline(args: &ReleaseArgs, cfg: &Config, steps: &mut Steps, out: &mut Outcome) -> Result<(), CliError> {
    let skip: HashSet<Job> = args.skip.iter().copied().collect();
    let dry = args.dry_run;
    out.field("dry_run", dry);

    let gitlab = if skip.contains(&Job::Gitlab) {
        None
    } else {
        Some(gitlab_settings(&args.gitlab, cfg)?)
    };
    let archive = if skip.contains(&Job::Archive) {
        None
    } else {
        Some(archive_settings(&args.archive, cfg)?)
    };
    if !dry {
        if let Some(g) = &gitlab {
            require_gitlab_token(g)?;
        }
    }
    let client = HttpClient::default();
    let adapter = match (&archive, dry) {
        (Some(settings), false) => Some(archive_adapter(settings, client.clone())?),
        _ => None,
    };

    let tag = tag(&args.context)?;
    out.field("tag", &tag);
    let derived_url = gitlab.as_ref().and_then(|g| derived_release_url(&g.target, &tag));

    let inputs = load_inputs(&args.inputs, cfg)?;
    let ctx = release_context(&args.context, cfg, derived_url)?;
    let out_dir = output_dir(args.assets.output_dir.as_ref(), cfg);
    let assets = load_assets(&args.assets, cfg)?;

    let (rendered, datacite_path) = steps.run("datacite", || {
        let rendered = render(&inputs, &ctx)?;
        let path = write_datacite(&out_dir, &rendered.xml)?;
        let detail = format!("wrote {}", path.display());
        Ok(((rendered, path), StepStatus::Done, detail))
    })?;
    let uploads = with_datacite(&assets, &datacite_path)?;
    let n = uploads.len();
    let package = first([args.gitlab.package_name.clone(), cfg.file.package_name.clone()])
        .unwrap_or_else(|| package_name(None, cfg, &inputs.meta));

    match &gitlab {
        None => {
            steps.record("upload-packages", StepStatus::Skipped, "skipped by --skip gitlab");
            steps.record("gitlab-release", StepStatus::Skipped, "skipped by --skip gitlab");
        }
        Some(g) if dry => {
            steps.record(
                "upload-packages",
                StepStatus::Planned,
                format!("would upload {n} file(s) to {}", g.target.package_url(&package, &tag, "")),
            );
            steps.record(
                "gitlab-release",
                StepStatus::Planned,
                format!("would create release {tag} with {n} asset link(s)"),
            );
        }
        Some(g) => {
            let links = steps.run("upload-packages", || {
                let mut links = Vec::new();
                let mut uploaded = 0;
                for asset in &uploads {
                    let (url, outcome) =
                        gitlab::upload_package(&client, &g.target, &package, &tag, &asset.path, args.gitlab.overwrite)?;
                    if outcome == UploadOutcome::Uploaded {
                        uploaded += 1;
                    }
                    links.push(AssetLink {
                        name: asset.file_name(),
                        url,
                        link_type: gitlab::link_type_for(asset.role).to_string(),
                    });
                }
                let status = if uploaded == 0 {
                    StepStatus::Unchanged
                } else {
                    StepStatus::Done
                };
                let detail = format!("{uploaded} uploaded, {} already present", n - uploaded);
                Ok((links, status, detail))
            })?;
            let changelog = first([args.gitlab.changelog.clone(), cfg.path(&cfg.file.changelog)]);
            steps.run("gitlab-release", || {
                let description = gitlab::release_description(&tag, changelog.as_deref())
                    .map_err(|e| CliError::io(format!("cannot read changelog: {e}")))?;
                let record = ReleaseRecord {
                    tag_name: tag.clone(),
                    name: format!("{} {tag}", inputs.meta.title),
                    description,
                    asset_links: links,
                };
                let (echo, outcome) = gitlab::create_release(&client, &g.target, &record)?;
                let status = match outcome {
                    ReleaseOutcome::Created => StepStatus::Done,
                    ReleaseOutcome::Unchanged => StepStatus::Unchanged,
                };
                let detail = format!("release {} with {} link(s)", echo.tag_name, echo.asset_links.len());
                Ok(((), status, detail))
            })?;
        }
    }

    if skip.contains(&Job::Bag) {
        steps.record("bag", StepStatus::Skipped, "skipped by --skip bag");
    } else {
        let built = steps.run("bag", || {
            let (info, algorithms) = bag_settings(&args.bag, cfg, &inputs.meta, &ctx)?;
            let built = build_release_bag(
                &assets,
                &rendered.xml,
                &info,
                &algorithms,
                &out_dir,
                &bag_name(&package, &tag),
                true,
            )?;
            let detail = format!(
                "{} (Payload-Oxum {})",
                built.tar.as_ref().unwrap_or(&built.dir).display(),
                built.payload_oxum
            );
            Ok((built, StepStatus::Done, detail))
        })?;
        out.field("bag", &built.dir);
        out.field("bag_tar", &built.tar);
    }

    let Some(archive_cfg) = &archive else {
        for step in ["archive-dataset", "archive-upload", "archive-submit"] {
            steps.record(step, StepStatus::Skipped, "skipped by --skip archive");
        }
        return Ok(());
    };
    let Some(adapter) = adapter else {
        steps.record(
            "archive-dataset",
            StepStatus::Planned,
            format!("would create or resume the dataset for {tag} at {}", archive_cfg.base_url),
        );
        steps.record("archive-upload", StepStatus::Planned, format!("would upload {n} file(s)"));
        steps.record("archive-submit", StepStatus::Planned, "would submit for curator review");
        return Ok(());
    };
    run_archive_steps(
        steps,
        adapter.as_ref(),
        &archive_cfg.state_file,
        &tag,
        &rendered.record,
        &inputs.meta,
        &uploads,
        out,
    )
}

/// Creates or resumes the dataset, uploads, and submits for review.
#[allow(clippy::too_many_arguments)]
pub fn run_archive_steps(
    steps: &mut Steps,
    adapter: &dyn ArchiveAdapter,
    state_file: &Path,
    tag: &str,
    record: &DataCiteRecord,
    meta: &ProjectMetadata,
    uploads: &AssetSet,
    out: &mut Outcome,
) -> Result<(), CliError> {

    let prepared = steps.run("archive-dataset", || {
        let doc = archive::map_metadata(record, meta)?;
        let prepared = archive::prepare_deposit(adapter, state_file, tag, &doc)?;
        let id = &prepared.dataset.dataset_id;
        let (status, detail) = match prepared.outcome {
            DepositOutcome::Submitted => (StepStatus::Done, format!("created dataset {id}")),
            DepositOutcome::Resumed => (StepStatus::Done, format!("resumed draft {id}")),
            DepositOutcome::AlreadySubmitted => (
                StepStatus::Unchanged,
                format!("dataset {id} is already {}", prepared.dataset.state),
            ),
        };
        Ok((prepared, status, detail))
    })?;
    let id = prepared.dataset.dataset_id.clone();
    out.field("dataset_id", &id);

    if !prepared.needs_upload() {
        steps.record("archive-upload", StepStatus::Unchanged, format!("dataset {id} already submitted"));
        steps.record("archive-submit", StepStatus::Unchanged, format!("dataset {id} already submitted"));
        out.field("dataset_state", prepared.dataset.state);
        return Ok(());
    }
    steps.run("archive-upload", || {
        let dataset = archive::upload_assets(adapter, &id, uploads)?;
        let detail = format!("{} file(s) in dataset {id}", dataset.uploaded_files.len());
        Ok(((), StepStatus::Done, detail))
    })?;
    let dataset = steps.run("archive-submit", || {
        let dataset = archive::submit_for_review(adapter, &id)?;
        let detail = format!("dataset {id} is {}", dataset.state);
        Ok((dataset, StepStatus::Done, detail))
    })?;
    out.field("dataset_state", dataset.state);
    drop(prepared);
    Ok(())
}
