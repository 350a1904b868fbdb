use std::time::Duration;

use relpub_core::archive;
use relpub_core::http::HttpClient;

use super::common::{load_assets, load_inputs, output_dir, release_context, render, tag, with_datacite, write_datacite};
use super::release::run_archive_steps;
use super::remote::{archive_adapter, archive_settings};
use super::steps::{StepStatus, Steps};
use crate::args::DepositArgs;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{run, Outcome};

pub const DEPOSIT_STEPS: &[&str] = &["datacite", "archive-dataset", "archive-upload", "archive-submit", "doi"];

pub fn run_deposit(args: &DepositArgs, cfg: &Config) -> Outcome {
    run("deposit", |out| {
        let mut steps = Steps::new(DEPOSIT_STEPS);
        let result = deposit(args, cfg, &mut steps, out);
        steps.finish(out);
        result
    })
}

fn deposit(args: &DepositArgs, cfg: &Config, steps: &mut Steps, out: &mut Outcome) -> Result<(), CliError> {
    let settings = archive_settings(&args.archive, cfg)?;
    let adapter = if args.dry_run {
        None
    } else {
        Some(archive_adapter(&settings, HttpClient::default())?)
    };
    let tag = tag(&args.context)?;
    out.field("tag", &tag);
    out.field("dry_run", args.dry_run);
    let inputs = load_inputs(&args.inputs, cfg)?;
    let ctx = release_context(&args.context, cfg, None)?;
    let assets = load_assets(&args.assets, cfg)?;
    let out_dir = output_dir(args.assets.output_dir.as_ref(), cfg);

    let (rendered, path) = steps.run("datacite", || {
        let rendered = render(&inputs, &ctx)?;
        let path = write_datacite(&out_dir, &rendered.xml)?;
        let detail = format!("wrote {}", path.display());
        Ok(((rendered, path), StepStatus::Done, detail))
    })?;
    let uploads = with_datacite(&assets, &path)?;

    let Some(adapter) = adapter else {
        steps.record(
            "archive-dataset",
            StepStatus::Planned,
            format!("would create or resume the dataset for {tag} at {}", settings.base_url),
        );
        steps.record("archive-upload", StepStatus::Planned, format!("would upload {} file(s)", uploads.len()));
        steps.record("archive-submit", StepStatus::Planned, "would submit for curator review");
        return Ok(());
    };
    run_archive_steps(
        steps,
        adapter.as_ref(),
        &settings.state_file,
        &tag,
        &rendered.record,
        &inputs.meta,
        &uploads,
        out,
    )?;

    if let Some(seconds) = args.wait_for_doi {
        let state = archive::StateFile::load(&settings.state_file)?;
        let id = state.dataset_for(&tag).unwrap_or_default().to_string();
        let doi = steps.run("doi", || {
            let doi = archive::poll_doi(
                adapter.as_ref(),
                &id,
                Duration::from_secs(seconds),
                Duration::from_secs(5).min(Duration::from_secs(seconds.max(1))),
            )?;
            let detail = match &doi {
                Some(d) => format!("published as {d}"),
                None => format!("not published after {seconds}s, still awaiting curator review"),
            };
            Ok((doi, StepStatus::Done, detail))
        })?;
        out.field("doi", doi);
    }
    Ok(())
}
