use std::path::{Path, PathBuf};

use relpub_core::bagpack::{build_bag, serialize_bag, BagInfo};
use relpub_core::checksum::Algorithm;
use relpub_core::metadata::AssetSet;

use super::common::{bag_settings, load_assets, load_inputs, output_dir, package_name, release_context, render};
use crate::args::BagArgs;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{run, Outcome};

pub struct BuiltBag {
    pub dir: PathBuf,
    pub tar: Option<PathBuf>,
    pub payload_oxum: String,
}

/// Builds the bag for a release from scratch in `out_dir/<name>`, replacing
/// an earlier build, and optionally serializes it next to it.
pub fn build_release_bag(
    assets: &AssetSet,
    xml: &[u8],
    info: &BagInfo,
    algorithms: &[Algorithm],
    out_dir: &Path,
    name: &str,
    tar: bool,
) -> Result<BuiltBag, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;
    let dir = out_dir.join(name);
    let staging = out_dir.join(format!(".{name}.partial"));
    let remove = |p: &Path| {
        if p.exists() {
            std::fs::remove_dir_all(p).map_err(|e| CliError::io(format!("cannot remove {}: {e}", p.display())))
        } else {
            Ok(())
        }
    };
    remove(&staging)?;
    let bag = build_bag(assets, xml, info, algorithms, &staging)?;
    remove(&dir)?;
    std::fs::rename(&staging, &dir)
        .map_err(|e| CliError::io(format!("cannot move bag into {}: {e}", dir.display())))?;

    let tar = if tar {
        Some(serialize_bag(&dir, &out_dir.join(format!("{name}.tar")))?)
    } else {
        None
    };
    Ok(BuiltBag {
        dir,
        tar,
        payload_oxum: bag.payload_oxum(),
    })
}

pub fn bag_name(package: &str, tag: &str) -> String {
    format!("{package}-{tag}")
}

pub fn run_bag(args: &BagArgs, cfg: &Config) -> Outcome {
    run("bag", |out| {
        let inputs = load_inputs(&args.inputs, cfg)?;
        let ctx = release_context(&args.context, cfg, None)?;
        let rendered = render(&inputs, &ctx)?;
        let assets = load_assets(&args.assets, cfg)?;
        let (info, algorithms) = bag_settings(&args.bag, cfg, &inputs.meta, &ctx)?;
        let package = package_name(args.package_name.as_ref(), cfg, &inputs.meta);
        let built = build_release_bag(
            &assets,
            &rendered.xml,
            &info,
            &algorithms,
            &output_dir(args.assets.output_dir.as_ref(), cfg),
            &bag_name(&package, &ctx.version_tag),
            !args.no_tar,
        )?;
        out.line(format!("bag {} (Payload-Oxum {})", built.dir.display(), built.payload_oxum));
        if let Some(tar) = &built.tar {
            out.line(format!("tar {}", tar.display()));
        }
        out.field("bag", &built.dir);
        out.field("tar", &built.tar);
        out.field("payload_oxum", &built.payload_oxum);
        Ok(())
    })
}
