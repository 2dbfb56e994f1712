//! `corona-lab`: batch front end for the corona-lab toolkit.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a JSON error record on
//! standard error), 2 on usage errors and malformed configs.

mod cli;
mod commands;
mod config;
mod selftest;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::cli::Cli;
use crate::commands::Failed;
use crate::config::ConfigError;

fn error_record(err: &anyhow::Error) -> (serde_json::Value, u8) {
    for cause in err.chain() {
        if let Some(c) = cause.downcast_ref::<ConfigError>() {
            let rec = json!({
                "error": "config",
                "source": c.source,
                "pointer": c.pointer,
                "message": c.message,
            });
            return (rec, 2);
        }
        if let Some(e) = cause.downcast_ref::<corona_lab::Error>() {
            let mut rec = json!({ "error": e.kind(), "message": e.to_string() });
            match e {
                corona_lab::Error::Infeasible { best_residuals, .. } => {
                    rec["best_residuals"] = json!(best_residuals);
                }
                corona_lab::Error::Construction { rung, .. } => rec["rung"] = json!(rung),
                _ => {}
            }
            return (rec, 1);
        }
        if let Some(f) = cause.downcast_ref::<Failed>() {
            return (json!({ "error": f.kind, "message": f.message }), 1);
        }
    }
    (json!({ "error": "io", "message": format!("{err:#}") }), 1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (rec, code) = error_record(&err);
            eprintln!("{rec}");
            ExitCode::from(code)
        }
    }
}
