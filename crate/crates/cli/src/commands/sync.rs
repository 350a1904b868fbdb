use std::path::PathBuf;

use relpub_core::sync::{sync_site, SyncError};

use crate::args::SyncArgs;
use crate::config::{first, Config};
use crate::error::{CliError, Exit};
use crate::output::{run, Outcome};

pub fn run_sync(args: &SyncArgs, cfg: &Config) -> Outcome {
    run("sync", |out| {
        let site = first([args.site.clone(), cfg.path(&cfg.file.sync.site)])
            .ok_or_else(|| CliError::config("no site directory: pass --site or set RELPUB_SITE"))?;
        let repo = first([args.repo.clone(), cfg.path(&cfg.file.sync.repo)]).unwrap_or_else(|| PathBuf::from("."));
        let pipeline = first([args.pipeline.clone(), cfg.file.sync.pipeline.clone()])
            .ok_or_else(|| CliError::config("no pipeline name: pass --pipeline or set RELPUB_PIPELINE"))?;

        let summary = sync_site(&site, &pipeline, &repo, args.dry_run)?;
        let verb = if args.dry_run { "would update" } else { "updated" };
        for path in &summary.updated {
            out.line(format!("{verb} {}", path.display()));
        }
        for err in &summary.errors {
            out.line(format!("error: {err}"));
        }
        out.line(format!(
            "{} page(s) {verb}, {} unchanged, {} error(s)",
            summary.updated.len(),
            summary.unchanged.len(),
            summary.errors.len()
        ));
        out.field("dry_run", args.dry_run);
        out.field("updated", &summary.updated);
        out.field("unchanged", &summary.unchanged);
        out.field(
            "errors",
            summary.errors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        );
        if let Some(first_err) = summary.errors.first() {
            let exit = if summary.errors.iter().any(|e| !matches!(e, SyncError::Parse { .. })) {
                Exit::Io
            } else {
                Exit::Findings
            };
            out.fail(CliError::new(
                exit,
                format!("{} page(s) could not be synced; first: {first_err}", summary.errors.len()),
            ));
        }
        Ok(())
    })
}
