//! Single-point evaluations and sweeps.

use pdc_core::{
    assemble_cm, full_report, mean_photon_numbers, mean_vector, photon_difference, squeezing_parameter, InitialState,
    ModelParams, Result,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{check_range, grid, PointArgs, StateSpec, SweepArgs, SweepVar};
use crate::output::Table;

pub const SWEEP_COLUMNS: [&str; 9] =
    ["n1", "n2", "difference", "nu1", "nu2", "entropy1", "entropy2", "nu_tilde_minus", "log_negativity"];

fn point_metadata(command: &str, params: &ModelParams, state: &InitialState) -> Map<String, Value> {
    let mut meta = Map::new();
    meta.insert("command".into(), json!(command));
    meta.insert("state".into(), json!(StateSpec(*state).to_string()));
    meta.insert("w1".into(), json!(params.w1()));
    meta.insert("w2".into(), json!(params.w2()));
    meta.insert("squeezing_parameter".into(), json!(squeezing_parameter(params)));
    meta
}

pub fn photons(args: &PointArgs, w1: f64, w2: f64) -> Result<(ModelParams, Table, Map<String, Value>)> {
    let params = ModelParams::new(args.y, args.tau, w1, w2)?;
    let (n1, n2) = mean_photon_numbers(&params, &args.state.0)?;
    let mut table = Table::new(["tau", "y", "n1", "n2", "difference"].map(String::from).to_vec());
    table.push(vec![args.tau, args.y, n1, n2, photon_difference(&params, &args.state.0)?]);
    Ok((params, table, point_metadata("photons", &params, &args.state.0)))
}

pub fn entangle(args: &PointArgs, w1: f64, w2: f64) -> Result<(ModelParams, Table, Map<String, Value>)> {
    let params = ModelParams::new(args.y, args.tau, w1, w2)?;
    let state = args.state.0;
    let report = full_report(&params, &state)?;
    let mut table = Table::new(
        ["tau", "y", "nu1", "nu2", "entropy1", "entropy2", "nu_tilde_minus", "log_negativity"]
            .map(String::from)
            .to_vec(),
    );
    table.push(vec![
        args.tau,
        args.y,
        report.nu1,
        report.nu2,
        report.entropy1,
        report.entropy2,
        report.nu_tilde_minus,
        report.log_negativity,
    ]);
    let mut meta = point_metadata("entangle", &params, &state);
    let cm = assemble_cm(&params, &state)?;
    meta.insert("covariance_matrix".into(), json!(cm.matrix()));
    meta.insert("mean_vector".into(), json!(mean_vector(&params, &state)?));
    Ok((params, table, meta))
}

fn sweep_row(params: &ModelParams, state: &InitialState) -> Result<Vec<f64>> {
    let (n1, n2) = mean_photon_numbers(params, state)?;
    let r = full_report(params, state)?;
    Ok(vec![n1, n2, n1 - n2, r.nu1, r.nu2, r.entropy1, r.entropy2, r.nu_tilde_minus, r.log_negativity])
}

/// Returns the table, its metadata and whether any point passes the
/// undepleted-pump bound.
pub fn sweep(args: &SweepArgs, w1: f64, w2: f64) -> Result<(Table, Map<String, Value>, bool), String> {
    check_range(args.var, args.from, args.to)?;
    let (name, fixed_name, fixed) = match args.var {
        SweepVar::Tau => {
            if args.tau.is_some() {
                return Err("--tau cannot be fixed while sweeping tau".into());
            }
            ("tau", "y", args.y.ok_or("--y is required when sweeping tau")?)
        }
        SweepVar::Y => {
            if args.y.is_some() {
                return Err("--y cannot be fixed while sweeping y".into());
            }
            ("y", "tau", args.tau.ok_or("--tau is required when sweeping y")?)
        }
    };
    let points = grid(args.from, args.to, args.steps);
    let state = args.state.0;
    let rows: Vec<(Vec<f64>, bool)> = points
        .par_iter()
        .map(|&at| {
            let (y, tau) = match args.var {
                SweepVar::Tau => (fixed, at),
                SweepVar::Y => (at, fixed),
            };
            let params = ModelParams::new(y, tau, w1, w2)?;
            let mut row = vec![at];
            row.extend(sweep_row(&params, &state)?);
            Ok((row, params.exceeds_undepleted_pump()))
        })
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;

    let mut columns = vec![name.to_string()];
    columns.extend(SWEEP_COLUMNS.map(String::from));
    let mut table = Table::new(columns);
    let mut beyond = false;
    for (row, flag) in rows {
        beyond |= flag;
        table.push(row);
    }
    let mut meta = Map::new();
    meta.insert("command".into(), json!("sweep"));
    meta.insert("var".into(), json!(name));
    meta.insert(fixed_name.into(), json!(fixed));
    meta.insert("state".into(), json!(StateSpec(state).to_string()));
    meta.insert("w1".into(), json!(w1));
    meta.insert("w2".into(), json!(w2));
    Ok((table, meta, beyond))
}
