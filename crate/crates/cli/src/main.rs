//! `rqc`: command-line front end for lattice description, circuit export,
//! design evaluation, pattern search, entropy profiles and the HTTP API.
//!
//! Every command prints a JSON document `{"manifest": ..., "result": ...}`;
//! `--format table` prints a plain-text table instead. Exit status is 0 on
//! success, 2 for invalid input, 3 when a size cap is hit and 4 otherwise.

mod args;
mod commands;
mod error;
mod manifest;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command, Format};
use crate::commands::Outcome;
use crate::error::{CliError, CliResult};
use crate::manifest::{Clock, Document};

fn render(cli: &Cli, name: &str, clock: Clock, outcome: Outcome) -> CliResult<String> {
    let manifest = clock.finish(
        name,
        outcome.config,
        outcome.seed,
        outcome.threads,
        outcome.inputs,
        &outcome.result,
    );
    Ok(match cli.format {
        Format::Json => {
            let doc = Document {
                manifest: &manifest,
                result: &outcome.result,
            };
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
            text
        }
        Format::Table => format!(
            "{}\n# {} {} {}, result sha256 {}\n",
            outcome.table, manifest.tool, manifest.version, manifest.command, manifest.result_sha256
        ),
    })
}

fn run(cli: &Cli) -> CliResult<()> {
    let clock = Clock::start();
    let (name, outcome) = match &cli.command {
        Command::Lattice(a) => ("lattice", commands::lattice(a)?),
        Command::Circuit(a) => ("circuit", commands::circuit(a)?),
        Command::Evaluate(a) => ("evaluate", commands::evaluate(a)?),
        Command::Search(a) => ("search", commands::search_codes(a)?),
        Command::Entropy(a) => ("entropy", commands::entropy(a)?),
        Command::Serve(a) => return commands::serve(a),
    };
    let text = render(cli, name, clock, outcome)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth an error status
            let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
