use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{Map, Value};

mod args;
mod commands;
mod figures;
mod oracle_check;
mod output;

use args::{Command, Format, RunConfig};
use output::Table;

const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn warn_pump(beyond: bool) {
    if beyond {
        eprintln!("warning: tau >= 1 is beyond the undepleted-pump validity bound; results are the formal solution");
    }
}

fn run(cfg: &RunConfig) -> Result<u8, String> {
    let (w1, w2) = (cfg.w1, cfg.w2);
    match &cfg.command {
        Command::Photons(p) => {
            let (params, table, meta) = commands::photons(p, w1, w2).map_err(|e| e.to_string())?;
            warn_pump(params.exceeds_undepleted_pump());
            emit_table(cfg, &table, meta)?;
        }
        Command::Entangle(p) => {
            let (params, table, meta) = commands::entangle(p, w1, w2).map_err(|e| e.to_string())?;
            warn_pump(params.exceeds_undepleted_pump());
            emit_table(cfg, &table, meta)?;
        }
        Command::Sweep(s) => {
            let (table, meta, beyond) = commands::sweep(s, w1, w2)?;
            warn_pump(beyond);
            emit_table(cfg, &table, meta)?;
        }
        Command::Figure(f) => {
            let (table, meta) = figures::run_figure(f, w1, w2)?;
            if cfg.format == Format::Csv {
                for note in meta["assumptions"].as_array().into_iter().flatten() {
                    eprintln!("note: {}", note.as_str().unwrap_or_default());
                }
            }
            emit_table(cfg, &table, meta)?;
        }
        Command::OracleCheck(o) => {
            let (doc, verdict) = oracle_check::run_oracle_check(o, w1, w2).map_err(|e| e.to_string())?;
            let doc = output::round_json(doc, cfg.precision);
            emit(cfg, &output::to_pretty(&doc))?;
            return Ok(verdict.exit_code());
        }
    }
    Ok(0)
}

fn emit_table(cfg: &RunConfig, table: &Table, meta: Map<String, Value>) -> Result<(), String> {
    let text = match cfg.format {
        Format::Csv => table.to_csv(cfg.precision),
        Format::Json => {
            let meta = match output::round_json(Value::Object(meta), cfg.precision) {
                Value::Object(m) => m,
                _ => unreachable!("rounding preserves objects"),
            };
            table.to_json(cfg.precision, meta)
        }
    };
    emit(cfg, &text)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), String> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("--out {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}
