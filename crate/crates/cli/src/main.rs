//! `thicksum` command-line front end.

mod args;
mod commands;
mod render;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use thicksum::io::{Report, RunConfig, Status};

use crate::args::Cli;
use crate::commands::{exit_code, failure_payload, Outcome};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let config = RunConfig {
        seed: cli.global.seed,
        tolerance: cli.global.tol,
        point_cap: cli.global.point_cap,
        sum_cap: cli.global.sum_cap,
        output: cli.global.output.as_ref().map(|p| p.display().to_string()),
    };

    let start = Instant::now();
    let result = config
        .validate()
        .and_then(|tol| commands::run(&cli.command, &config, tol));
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let (status, results, code) = match result {
        Ok(Outcome { status, results }) => {
            let code = if status == Status::Pass { 0 } else { 2 };
            (status, results, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            let status = if code == 2 {
                Status::Fail
            } else {
                Status::Error
            };
            (status, failure_payload(&e), code)
        }
    };
    let report = Report {
        command: argv[1..].to_vec(),
        config,
        status,
        results,
        wall_time_ms,
    };
    let json = report.to_json();
    if let Some(path) = &cli.global.output {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(65);
        }
    }
    if cli.global.text {
        print!(
            "{}",
            render::text(&report, cli.command.prints_json_with_text())
        );
    } else {
        println!("{json}");
    }
    ExitCode::from(code)
}
