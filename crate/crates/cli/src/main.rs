//! `cgl`: command-line front end for the coincident graph learning simulator.
//!
//! Exit status: 0 on success, 1 when a run fails its own check (the agent
//! never settles on the target, or the oracle disagrees), 2 on bad usage,
//! configuration or I/O.

mod args;
mod commands;
mod error;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{execute, resolve, Status};
use crate::error::{CliError, CliResult};
use crate::manifest::{Destinations, RunManifest};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed(why)) => {
            eprintln!("cgl: {why}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cgl: error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<Status> {
    let (invocation, destinations, mut inputs) = match (cli.from_manifest, cli.command) {
        (Some(path), None) => {
            let recorded = RunManifest::read(&path)?;
            recorded.check_inputs()?;
            let mut invocation = recorded.invocation;
            if let Some(w) = cli.workers {
                invocation.set_workers(w);
            }
            let destinations = Destinations {
                out: cli.out.or(recorded.destinations.out),
                heatmap: cli.heatmap.or(recorded.destinations.heatmap),
            };
            (invocation, destinations, recorded.inputs)
        }
        (None, Some(command)) => {
            let r = resolve(command)?;
            (r.invocation, r.destinations, r.inputs)
        }
        _ => {
            return Err(CliError::Usage(
                "give a subcommand or --from-manifest PATH; see --help".into(),
            ))
        }
    };

    let done = execute(&invocation, &destinations)?;
    for digest in done.inputs {
        if !inputs.iter().any(|d| d.path == digest.path) {
            inputs.push(digest);
        }
    }
    let anchor = destinations.out.as_ref().or(destinations.heatmap.as_ref());
    if let Some(anchor) = anchor {
        let manifest = RunManifest::new(invocation, destinations.clone(), inputs, done.outputs);
        manifest.write(&RunManifest::path_for(anchor))?;
    }
    Ok(done.status)
}
