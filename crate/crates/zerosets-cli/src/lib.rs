//! Batch experiment runner: one subcommand per experiment, plain-text
//! config files with flag overrides, JSON + CSV reports, and an exit-code
//! contract CI can gate on (0 pass, 1 threshold failure, 2 usage error).

mod commands;
mod config;

pub use commands::{run_command, CommandOutcome, Status};
pub use config::RunConfig;

use std::io::Write;

pub const SCHEMA_VERSION: u32 = zerosets::SCHEMA_VERSION;

/// Entry point for the binary; returns the process exit code.
pub fn run_cli(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        print!("{}", config::general_help());
        return if args.is_empty() { 2 } else { 0 };
    }
    let command = args[0].as_str();
    if args.iter().any(|a| a == "--help" || a == "-h") {
        match config::command_help(command) {
            Some(text) => {
                print!("{text}");
                return 0;
            }
            None => {
                eprintln!("unknown command: {command}");
                return 2;
            }
        }
    }
    let cfg = match RunConfig::from_args(command, &args[1..]) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };
    let outcome = match run_command(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = write_reports(&cfg, &outcome) {
        eprintln!("write error: {e}");
        return 2;
    }
    let label = match outcome.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Report => "REPORT",
    };
    println!(
        "{label} {} seed={} {} -> {}",
        cfg.command,
        cfg.seed,
        outcome.summary,
        cfg.outdir.display()
    );
    match outcome.status {
        Status::Fail => 1,
        _ => 0,
    }
}

fn write_reports(cfg: &RunConfig, outcome: &CommandOutcome) -> std::io::Result<()> {
    std::fs::create_dir_all(&cfg.outdir)?;
    let base = cfg.outdir.join(format!("{}-{}", cfg.command, cfg.seed));
    let envelope = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "version": zerosets::VERSION,
        "command": cfg.command,
        "config": cfg.echo(),
        "pass": match outcome.status {
            Status::Pass => serde_json::json!(true),
            Status::Fail => serde_json::json!(false),
            Status::Report => serde_json::Value::Null,
        },
        "report": outcome.json,
    });
    let mut jf = std::fs::File::create(base.with_extension("json"))?;
    writeln!(jf, "{}", serde_json::to_string_pretty(&envelope)?)?;
    let mut cf = std::fs::File::create(base.with_extension("csv"))?;
    cf.write_all(outcome.csv.as_bytes())?;
    Ok(())
}
