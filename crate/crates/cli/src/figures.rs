//! Figure presets: the curves of the photon-number, entropy and
//! log-negativity figures, as columns on a grid.

use pdc_core::{full_report, mean_photon_numbers, InitialState, ModelParams, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{grid, FigureArgs, Preset, StateSpec};
use crate::output::Table;

const MISMATCHED: f64 = 0.9;
const TAU_PHOTONS_ENTROPY: f64 = 0.9;
const TAU_THERMAL_NEGATIVITY: f64 = 0.7;
const THERMAL_DEFAULT: (f64, f64) = (1.0, 2.0);

#[derive(Debug, Clone, Copy)]
enum Axis {
    Tau,
    Y,
}

#[derive(Debug, Clone, Copy)]
enum Quantity {
    Photons1,
    Entropy1,
    LogNegativity,
}

#[derive(Debug, Clone, Copy)]
struct Curve {
    quantity: Quantity,
    state: InitialState,
    /// Fixed mismatch for tau axes, fixed time for y axes.
    fixed: f64,
}

struct Layout {
    axis: Axis,
    range: (f64, f64),
    curves: Vec<(String, Curve)>,
    assumptions: Vec<&'static str>,
}

fn curve(quantity: Quantity, state: InitialState, fixed: f64) -> Curve {
    Curve { quantity, state, fixed }
}

fn layout(preset: Preset, tau_override: Option<f64>, thermal: InitialState, thermal_given: bool) -> Layout {
    use Quantity::*;
    let vac = InitialState::Vacuum;
    let tau = |default: f64| tau_override.unwrap_or(default);
    let mut assumptions = Vec::new();
    let (axis, range, curves) = match preset {
        Preset::Fig1a => (
            Axis::Tau,
            (0.0, 1.0),
            vec![("n1_y0".into(), curve(Photons1, vac, 0.0)), ("n1_y0.9".into(), curve(Photons1, vac, MISMATCHED))],
        ),
        Preset::Fig1b => (Axis::Y, (0.0, 0.95), vec![("n1".into(), curve(Photons1, vac, tau(TAU_PHOTONS_ENTROPY)))]),
        Preset::Fig2a => (
            Axis::Tau,
            (0.0, 1.0),
            vec![
                ("entropy_y0".into(), curve(Entropy1, vac, 0.0)),
                ("entropy_y0.9".into(), curve(Entropy1, vac, MISMATCHED)),
            ],
        ),
        Preset::Fig2b => {
            (Axis::Y, (0.0, 0.95), vec![("entropy".into(), curve(Entropy1, vac, tau(TAU_PHOTONS_ENTROPY)))])
        }
        Preset::Fig3a => {
            if !thermal_given {
                assumptions.push("thermal occupations (1,2) are assumed for the thermal curves");
            }
            (
                Axis::Tau,
                (0.0, 1.0),
                vec![
                    ("log_negativity_vacuum_y0".into(), curve(LogNegativity, vac, 0.0)),
                    ("log_negativity_vacuum_y0.9".into(), curve(LogNegativity, vac, MISMATCHED)),
                    ("log_negativity_thermal_y0".into(), curve(LogNegativity, thermal, 0.0)),
                    ("log_negativity_thermal_y0.9".into(), curve(LogNegativity, thermal, MISMATCHED)),
                ],
            )
        }
        Preset::Fig3b => {
            if !thermal_given {
                assumptions.push("thermal occupations (1,2) are assumed");
            }
            (
                Axis::Y,
                (0.0, 0.9),
                vec![("log_negativity".into(), curve(LogNegativity, thermal, tau(TAU_THERMAL_NEGATIVITY)))],
            )
        }
        Preset::Fig3c => (
            Axis::Tau,
            (0.0, 1.0),
            vec![
                ("entropy1_y0".into(), curve(Entropy1, thermal, 0.0)),
                ("entropy1_y0.9".into(), curve(Entropy1, thermal, MISMATCHED)),
                ("log_negativity_y0.9".into(), curve(LogNegativity, thermal, MISMATCHED)),
            ],
        ),
    };
    Layout { axis, range, curves, assumptions }
}

fn evaluate(c: &Curve, axis: Axis, at: f64, w1: f64, w2: f64) -> Result<f64> {
    let (y, tau) = match axis {
        Axis::Tau => (c.fixed, at),
        Axis::Y => (at, c.fixed),
    };
    let params = ModelParams::new(y, tau, w1, w2)?;
    Ok(match c.quantity {
        Quantity::Photons1 => mean_photon_numbers(&params, &c.state)?.0,
        Quantity::Entropy1 => full_report(&params, &c.state)?.entropy1,
        Quantity::LogNegativity => full_report(&params, &c.state)?.log_negativity,
    })
}

pub fn preset_name(preset: Preset) -> &'static str {
    match preset {
        Preset::Fig1a => "fig1a",
        Preset::Fig1b => "fig1b",
        Preset::Fig2a => "fig2a",
        Preset::Fig2b => "fig2b",
        Preset::Fig3a => "fig3a",
        Preset::Fig3b => "fig3b",
        Preset::Fig3c => "fig3c",
    }
}

/// Builds the dataset of a preset plus its JSON metadata.
pub fn run_figure(args: &FigureArgs, w1: f64, w2: f64) -> Result<(Table, Map<String, Value>), String> {
    let thermal = match args.state {
        None => InitialState::Thermal { n10: THERMAL_DEFAULT.0, n20: THERMAL_DEFAULT.1 },
        Some(StateSpec(s @ InitialState::Thermal { .. })) => s,
        Some(other) => return Err(format!("--state for figure presets must be thermal:N1,N2, got {other}")),
    };
    let layout = layout(args.preset, args.tau, thermal, args.state.is_some());
    let from = args.from.unwrap_or(layout.range.0);
    let to = args.to.unwrap_or(layout.range.1);
    let var = match layout.axis {
        Axis::Tau => crate::args::SweepVar::Tau,
        Axis::Y => crate::args::SweepVar::Y,
    };
    crate::args::check_range(var, from, to)?;
    let points = grid(from, to, args.steps);

    let axis_name = match layout.axis {
        Axis::Tau => "tau",
        Axis::Y => "y",
    };
    let mut columns = vec![axis_name.to_string()];
    columns.extend(layout.curves.iter().map(|(name, _)| name.clone()));
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&at| {
            let mut row = vec![at];
            for (_, c) in &layout.curves {
                row.push(evaluate(c, layout.axis, at, w1, w2)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    let mut table = Table::new(columns);
    rows.into_iter().for_each(|r| table.push(r));

    let mut meta = Map::new();
    meta.insert("command".into(), json!("figure"));
    meta.insert("preset".into(), json!(preset_name(args.preset)));
    meta.insert("axis".into(), json!(axis_name));
    meta.insert("range".into(), json!([from, to]));
    meta.insert("w1".into(), json!(w1));
    meta.insert("w2".into(), json!(w2));
    let curves: Vec<Value> = layout
        .curves
        .iter()
        .map(|(name, c)| {
            let fixed_key = match layout.axis {
                Axis::Tau => "y",
                Axis::Y => "tau",
            };
            json!({ "column": name, "state": StateSpec(c.state).to_string(), fixed_key: c.fixed })
        })
        .collect();
    meta.insert("curves".into(), Value::Array(curves));
    meta.insert("assumptions".into(), json!(layout.assumptions));
    Ok((table, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(preset: Preset) -> FigureArgs {
        FigureArgs { preset, steps: 11, tau: None, from: None, to: None, state: None }
    }

    #[test]
    fn fig1a_matches_closed_form() {
        let (table, meta) = run_figure(&args(Preset::Fig1a), 10.0, 10.0).unwrap();
        assert_eq!(table.columns, ["tau", "n1_y0", "n1_y0.9"]);
        let row = &table.rows[9];
        assert!((row[0] - 0.9).abs() < 1e-15);
        // sinh^2(0.9), mpmath
        assert!((row[1] - 1.053_736_588_158_633_2).abs() < 1e-12);
        assert!(meta["assumptions"].as_array().unwrap().is_empty());
    }

    #[test]
    fn thermal_assumption_is_flagged() {
        let (_, meta) = run_figure(&args(Preset::Fig3b), 10.0, 10.0).unwrap();
        assert_eq!(meta["assumptions"].as_array().unwrap().len(), 1);
        let mut given = args(Preset::Fig3b);
        given.state = Some("thermal:1,2".parse().unwrap());
        let (_, meta) = run_figure(&given, 10.0, 10.0).unwrap();
        assert!(meta["assumptions"].as_array().unwrap().is_empty());
        given.state = Some("vacuum".parse().unwrap());
        assert!(run_figure(&given, 10.0, 10.0).is_err());
    }

    #[test]
    fn fig3a_shapes() {
        let (table, _) = run_figure(&args(Preset::Fig3a), 10.0, 10.0).unwrap();
        let vac = table.column("log_negativity_vacuum_y0.9").unwrap();
        assert_eq!(vac[0], 0.0);
        assert!(vac[1..].iter().all(|&v| v > 0.0));
        let th = table.column("log_negativity_thermal_y0").unwrap();
        assert_eq!(th[1], 0.0);
        assert!(*th.last().unwrap() > 0.0);
    }

    #[test]
    fn tau_override_moves_fixed_time() {
        let mut a = args(Preset::Fig2b);
        a.tau = Some(0.5);
        let (table, meta) = run_figure(&a, 10.0, 10.0).unwrap();
        let expected = full_report(&ModelParams::with_default_frequencies(0.0, 0.5).unwrap(), &InitialState::Vacuum)
            .unwrap()
            .entropy1;
        assert_eq!(table.rows[0][1], expected);
        assert_eq!(meta["curves"][0]["tau"], json!(0.5));
    }
}
