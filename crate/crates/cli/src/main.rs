use std::process::ExitCode;

use clap::Parser;
use gkforge_cli::{configure_threads, render, run, RunConfig};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let config = RunConfig::parse();
    let outcome = match configure_threads().and_then(|()| run(&config)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&outcome.report);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if !outcome.passed {
        eprintln!("gkforge: at least one check failed; see the report");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
