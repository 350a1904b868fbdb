//! `relpub`: release publishing from the command line.
//!
//! Exit codes: 0 success, 1 validation findings, 2 I/O or configuration,
//! 3 remote or authentication failure, 4 remote state conflict.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;

use args::{Cli, Command};
use config::Config;

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    // HTTP library internals stay quiet; they may print request headers.
    env_logger::Builder::new()
        .filter_level(level)
        .filter_module("ureq", LevelFilter::Warn)
        .filter_module("ureq_proto", LevelFilter::Warn)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);

    let outcome = match Config::load(cli.config.as_deref()) {
        Err(e) => {
            let mut o = output::Outcome::new("config");
            o.fail(e);
            o
        }
        Ok(cfg) => match &cli.command {
            Command::Validate(a) => commands::run_validate(a, &cfg),
            Command::Datacite(a) => commands::run_datacite(a, &cfg),
            Command::Bag(a) => commands::run_bag(a, &cfg),
            Command::BagValidate(a) => commands::run_bag_validate(a),
            Command::Deposit(a) => commands::run_deposit(a, &cfg),
            Command::Sync(a) => commands::run_sync(a, &cfg),
            Command::Release(a) => commands::run_release(a, &cfg),
        },
    };
    ExitCode::from(outcome.emit(cli.format))
}
