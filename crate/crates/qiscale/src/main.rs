use std::process::ExitCode;

use clap::Parser;
use qiscale::config::effective_budget;
use qiscale::{execute, render, write_outputs, Cli, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = std::env::var("QISCALE_BUDGET_MB").ok();
    let budget = match effective_budget(cli.budget, cap.as_deref()) {
        Ok(b) => b,
        Err(msg) => return fail(&CliError::Usage(msg)),
    };
    let report = match execute(&cli, budget) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    print!("{}", render(&report.json));
    if let Some(dir) = &cli.out {
        if let Err(e) = write_outputs(dir, &report) {
            return fail(&e);
        }
    }
    match &report.failure {
        Some(e) => fail(e),
        None => ExitCode::SUCCESS,
    }
}
