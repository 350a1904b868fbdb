use relpub_core::datacite::{build_record, check_mandatory};
use relpub_core::metadata::{validate_metadata, ReleaseContext};
use relpub_core::ValidationReport;

use super::common::{read_inputs, today};
use crate::args::ValidateArgs;
use crate::config::{ci, Config};
use crate::error::{CliError, Exit};
use crate::output::{run, Outcome};

/// Tag used for the mandatory-property check when no release is at hand.
const PROVISIONAL_TAG: &str = "unreleased";

pub fn run_validate(args: &ValidateArgs, cfg: &Config) -> Outcome {
    run("validate", |out| {
        let inputs = read_inputs(&args.inputs, cfg)?;
        let mut report = ValidationReport::new();
        report.extend(inputs.warnings.clone());
        report.extend(validate_metadata(&inputs.meta, &inputs.contributors));

        if !report.has_errors() {
            let tag = ci("CI_COMMIT_TAG").unwrap_or_else(|| PROVISIONAL_TAG.into());
            let ctx = ReleaseContext::new(tag, today(), today())?;
            let record = build_record(&inputs.meta, &inputs.contributors, &ctx)?;
            report.extend(check_mandatory(&record, false));
        }

        let errors = report.errors().count();
        let warnings = report.warnings().count();
        for finding in &report.findings {
            out.line(finding.to_string());
        }
        out.line(format!("{errors} error(s), {warnings} warning(s)"));
        out.field("errors", errors);
        out.field("warnings", warnings);
        out.field("findings", &report.findings);
        if errors > 0 {
            out.fail(CliError::new(Exit::Findings, format!("metadata has {errors} error(s)")));
        }
        Ok(())
    })
}
