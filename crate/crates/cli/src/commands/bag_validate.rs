use std::fs::File;
use std::path::{Path, PathBuf};

use relpub_core::bagpack::{validate_bag_with, BagProfile};

use crate::args::BagValidateArgs;
use crate::error::{CliError, Exit};
use crate::output::{run, Outcome};

/// Unpacks a serialized bag and returns the directory holding its root.
fn unpack(tar_path: &Path, into: &Path) -> Result<PathBuf, CliError> {
    let file = File::open(tar_path).map_err(|e| CliError::io(format!("cannot open {}: {e}", tar_path.display())))?;
    tar::Archive::new(file)
        .unpack(into)
        .map_err(|e| CliError::io(format!("cannot unpack {}: {e}", tar_path.display())))?;
    let mut roots: Vec<PathBuf> = std::fs::read_dir(into)
        .map_err(|e| CliError::io(e.to_string()))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    match roots.len() {
        1 => Ok(roots.pop().unwrap()),
        _ if into.join("bagit.txt").is_file() => Ok(into.to_path_buf()),
        n => Err(CliError::new(
            Exit::Findings,
            format!("{} holds {n} top-level directories, expected one bag", tar_path.display()),
        )),
    }
}

pub fn run_bag_validate(args: &BagValidateArgs) -> Outcome {
    run("bag-validate", |out| {
        let scratch;
        let root = if args.path.is_file() {
            scratch = tempfile::tempdir().map_err(|e| CliError::io(e.to_string()))?;
            unpack(&args.path, scratch.path())?
        } else if args.path.is_dir() {
            args.path.clone()
        } else {
            return Err(CliError::io(format!("{} does not exist", args.path.display())));
        };
        let report = validate_bag_with(
            &root,
            BagProfile {
                bagpack: !args.bagit_only,
            },
        );
        for finding in &report.findings {
            out.line(finding.to_string());
        }
        let errors = report.errors().count();
        out.line(format!(
            "{}: {errors} error(s), {} warning(s)",
            args.path.display(),
            report.warnings().count()
        ));
        out.field("path", &args.path);
        out.field("findings", &report.findings);
        if !report.is_empty() {
            out.fail(CliError::new(
                Exit::Findings,
                format!("bag has {} finding(s)", report.len()),
            ));
        }
        Ok(())
    })
}
