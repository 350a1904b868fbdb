use std::path::{Path, PathBuf};

use chrono::{NaiveDate, Utc};
use relpub_core::bagpack::BagInfo;
use relpub_core::checksum::Algorithm;
use relpub_core::datacite::{build_record, render_xml, DataCiteRecord, DATACITE_FILE_NAME};
use relpub_core::gitlab::sanitize_package_name;
use relpub_core::metadata::{
    load_contributors, load_project_metadata, Asset, AssetRole, AssetSet, ContributorsFile,
    ProjectMetadata, ReleaseContext,
};
use relpub_core::ValidationReport;

use crate::args::{AssetArgs, BagOptions, ContextArgs, InputArgs};
use crate::config::{ci, first, Config};
use crate::error::CliError;

pub struct Inputs {
    pub meta: ProjectMetadata,
    pub contributors: ContributorsFile,
    pub warnings: ValidationReport,
}

pub fn input_paths(args: &InputArgs, cfg: &Config) -> (PathBuf, PathBuf) {
    let meta = first([
        args.metadata.clone(),
        cfg.path(&cfg.file.metadata),
        Some("METADATA.yml".into()),
    ]);
    let contribs = first([
        args.contributors.clone(),
        cfg.path(&cfg.file.contributors),
        Some("CONTRIBUTORS.yml".into()),
    ]);
    (meta.unwrap(), contribs.unwrap())
}

/// Loads both metadata files and logs their warnings.
pub fn load_inputs(args: &InputArgs, cfg: &Config) -> Result<Inputs, CliError> {
    let inputs = read_inputs(args, cfg)?;
    for w in inputs.warnings.warnings() {
        log::warn!("{}: {}", w.path, w.message);
    }
    Ok(inputs)
}

/// Like [`load_inputs`], leaving the warnings for the caller to report.
pub fn read_inputs(args: &InputArgs, cfg: &Config) -> Result<Inputs, CliError> {
    let (meta_path, contribs_path) = input_paths(args, cfg);
    let meta = load_project_metadata(&meta_path)?;
    let contributors = load_contributors(&contribs_path)?;
    let mut warnings = meta.warnings;
    warnings.extend(contributors.warnings);
    Ok(Inputs {
        meta: meta.value,
        contributors: contributors.value,
        warnings,
    })
}

pub fn today() -> NaiveDate {
    Utc::now().date_naive()
}

pub fn tag(args: &ContextArgs) -> Result<String, CliError> {
    first([args.tag.clone(), ci("CI_COMMIT_TAG")])
        .ok_or_else(|| CliError::config("no release tag: pass --tag or set RELPUB_TAG or CI_COMMIT_TAG"))
}

fn ci_commit_date() -> Option<NaiveDate> {
    let stamp = ci("CI_COMMIT_TIMESTAMP")?;
    stamp.get(..10)?.parse().ok()
}

/// Builds the release context. `derived_release_url` is used when no URL
/// is configured anywhere else.
pub fn release_context(
    args: &ContextArgs,
    cfg: &Config,
    derived_release_url: Option<String>,
) -> Result<ReleaseContext, CliError> {
    let tag = tag(args)?;
    let issued = args.issued.unwrap_or_else(today);
    let created = first([args.created, ci_commit_date()]).unwrap_or(issued);
    let url = first([
        args.release_url.clone(),
        cfg.file.release_page_url.as_ref().map(|u| u.replace("{tag}", &tag)),
        ci("CI_PROJECT_URL").map(|p| format!("{}/-/releases/{tag}", p.trim_end_matches('/'))),
        derived_release_url,
    ]);
    let mut ctx = ReleaseContext::new(tag, created, issued)?;
    if let Some(url) = url {
        ctx = ctx.with_release_page(url);
    }
    if let Some(doi) = &args.doi {
        ctx = ctx.with_doi(doi);
    }
    if let Some(doi) = &args.previous_doi {
        ctx = ctx.with_previous_doi(doi);
    }
    if let Some(doi) = &args.concept_doi {
        ctx = ctx.with_concept_doi(doi);
    }
    Ok(ctx)
}

pub struct Rendered {
    pub record: DataCiteRecord,
    pub xml: Vec<u8>,
}

pub fn render(inputs: &Inputs, ctx: &ReleaseContext) -> Result<Rendered, CliError> {
    let record = build_record(&inputs.meta, &inputs.contributors, ctx)?;
    let xml = render_xml(&record);
    Ok(Rendered { record, xml })
}

pub fn output_dir(explicit: Option<&PathBuf>, cfg: &Config) -> PathBuf {
    first([explicit.cloned(), cfg.path(&cfg.file.output_dir)]).unwrap_or_else(|| "release".into())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", parent.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Writes `datacite.xml` into `dir` and returns its path.
pub fn write_datacite(dir: &Path, xml: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(DATACITE_FILE_NAME);
    write_file(&path, xml)?;
    Ok(path)
}

pub fn assets_path(args: &AssetArgs, cfg: &Config) -> PathBuf {
    first([args.assets.clone(), cfg.path(&cfg.file.assets)]).unwrap_or_else(|| "ASSETS.yml".into())
}

/// Resolves `ASSETS.yml`; asset paths are relative to the manifest.
pub fn load_assets(args: &AssetArgs, cfg: &Config) -> Result<AssetSet, CliError> {
    let manifest = assets_path(args, cfg);
    let base = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(relpub_core::metadata::resolve_assets(&manifest, &base)?)
}

/// Release assets plus the rendered record, the set uploaded everywhere.
pub fn with_datacite(assets: &AssetSet, datacite: &Path) -> Result<AssetSet, CliError> {
    let mut all = assets.clone();
    if all.iter().any(|a| a.file_name() == DATACITE_FILE_NAME) {
        return Err(CliError::new(
            crate::error::Exit::Findings,
            format!("an asset is already named {DATACITE_FILE_NAME}"),
        ));
    }
    let record = Asset::from_file(AssetRole::Other, datacite, "application/xml")
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", datacite.display())))?;
    all.push(record);
    Ok(all)
}

pub fn package_name(explicit: Option<&String>, cfg: &Config, meta: &ProjectMetadata) -> String {
    first([explicit.cloned(), cfg.file.package_name.clone()])
        .unwrap_or_else(|| sanitize_package_name(&meta.title))
}

pub fn bag_settings(
    args: &BagOptions,
    cfg: &Config,
    meta: &ProjectMetadata,
    ctx: &ReleaseContext,
) -> Result<(BagInfo, Vec<Algorithm>), CliError> {
    let org = first([
        args.source_organization.clone(),
        cfg.file.bag.source_organization.clone(),
        Some(meta.publisher.clone()).filter(|p| !p.trim().is_empty()),
    ])
    .ok_or_else(|| CliError::config("no Source-Organization: pass --source-organization"))?;
    let email = first([args.contact_email.clone(), cfg.file.bag.contact_email.clone()]).ok_or_else(|| {
        CliError::config("no Contact-Email: pass --contact-email, set RELPUB_CONTACT_EMAIL or bag.contact_email")
    })?;
    let date = args.bagging_date.unwrap_or(ctx.issued_date);
    let info = BagInfo::standard(date, org, email, Some(format!("{} {}", meta.title, ctx.version_tag)));
    let algorithms = cfg
        .file
        .bag
        .algorithms
        .clone()
        .unwrap_or_else(|| Algorithm::ALL.to_vec());
    Ok((info, algorithms))
}
