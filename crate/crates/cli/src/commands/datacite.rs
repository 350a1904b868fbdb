use std::io::Write;

use super::common::{load_inputs, output_dir, release_context, render, write_datacite, write_file};
use crate::args::DataciteArgs;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{run, Outcome};

pub fn run_datacite(args: &DataciteArgs, cfg: &Config) -> Outcome {
    run("datacite", |out| {
        let inputs = load_inputs(&args.inputs, cfg)?;
        let ctx = release_context(&args.context, cfg, None)?;
        let rendered = render(&inputs, &ctx)?;
        match args.out.as_deref() {
            Some(p) if p.as_os_str() == "-" => {
                std::io::stdout()
                    .write_all(&rendered.xml)
                    .map_err(|e| CliError::io(format!("cannot write to stdout: {e}")))?;
            }
            Some(p) => {
                write_file(p, &rendered.xml)?;
                out.line(format!("wrote {}", p.display()));
                out.field("path", p);
            }
            None => {
                let path = write_datacite(&output_dir(args.output_dir.as_ref(), cfg), &rendered.xml)?;
                out.line(format!("wrote {}", path.display()));
                out.field("path", path);
            }
        }
        out.field("tag", &ctx.version_tag);
        Ok(())
    })
}
