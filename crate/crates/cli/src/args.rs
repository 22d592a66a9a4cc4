//! Command-line grammar.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pdc_core::dynamics::{DEFAULT_FREQUENCY, Y_MAX};
use pdc_core::fock::DEFAULT_NMAX;
use pdc_core::InitialState;

#[derive(Debug, Parser)]
#[command(
    name = "pdc",
    version,
    about = "Photon statistics and entanglement of a phase-mismatched two-mode parametric interaction"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Mode-1 frequency in units of the coupling g.
    #[arg(long, global = true, default_value_t = DEFAULT_FREQUENCY, value_parser = parse_frequency)]
    pub w1: f64,

    /// Mode-2 frequency in units of the coupling g.
    #[arg(long, global = true, default_value_t = DEFAULT_FREQUENCY, value_parser = parse_frequency)]
    pub w2: f64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits of every emitted number.
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean photon numbers and their conserved difference at one point.
    Photons(PointArgs),
    /// Covariance matrix and entanglement measures at one point.
    Entangle(PointArgs),
    /// Every point quantity along a grid in tau or y.
    Sweep(SweepArgs),
    /// Curves of one of the figure presets.
    Figure(FigureArgs),
    /// Compare the closed form against the truncated Fock-space simulation.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Dimensionless interaction time g t.
    #[arg(long, value_parser = parse_tau)]
    pub tau: f64,

    /// Dimensionless mismatch delta / g.
    #[arg(long, value_parser = parse_y)]
    pub y: f64,

    /// Input state: vacuum | coherent:RE,IM | thermal:N1,N2
    #[arg(long, default_value = "vacuum")]
    pub state: StateSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Tau,
    Y,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub var: SweepVar,

    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,

    #[arg(long, value_parser = parse_steps)]
    pub steps: usize,

    /// Fixed interaction time (required when sweeping y).
    #[arg(long, value_parser = parse_tau)]
    pub tau: Option<f64>,

    /// Fixed mismatch (required when sweeping tau).
    #[arg(long, value_parser = parse_y)]
    pub y: Option<f64>,

    #[arg(long, default_value = "vacuum")]
    pub state: StateSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub preset: Preset,

    /// Grid points.
    #[arg(long, default_value_t = 101, value_parser = parse_steps)]
    pub steps: usize,

    /// Fixed interaction time for presets plotted against y.
    #[arg(long, value_parser = parse_tau)]
    pub tau: Option<f64>,

    /// Grid start.
    #[arg(long)]
    pub from: Option<f64>,

    /// Grid end.
    #[arg(long)]
    pub to: Option<f64>,

    /// Thermal occupations for the thermal curves (thermal:N1,N2).
    #[arg(long)]
    pub state: Option<StateSpec>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_tau)]
    pub tau: f64,

    #[arg(long, value_parser = parse_y)]
    pub y: f64,

    #[arg(long, default_value = "vacuum")]
    pub state: StateSpec,

    /// Per-mode Fock cutoff.
    #[arg(long, default_value_t = DEFAULT_NMAX, value_parser = parse_nmax)]
    pub nmax: usize,

    /// Tolerance overrides, e.g. photons=1e-6,cm=1e-6,entropy=1e-4,log_negativity=1e-3,tail=1e-8
    #[arg(long, default_value = "")]
    pub tol: Tolerances,
}

/// Input-state grammar: `vacuum` | `coherent:RE,IM` | `thermal:N1,N2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec(pub InitialState);

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let pair = |body: &str, what: &str| -> Result<(f64, f64), String> {
            let (a, b) = body
                .split_once(',')
                .ok_or_else(|| format!("{what} needs two comma-separated numbers"))?;
            let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{what}: '{v}': {e}"));
            Ok((parse(a)?, parse(b)?))
        };
        let state = match s.split_once(':') {
            None if s == "vacuum" => InitialState::Vacuum,
            Some(("coherent", body)) => {
                let (re, im) = pair(body, "coherent")?;
                InitialState::coherent(Complex64::new(re, im)).map_err(|e| e.to_string())?
            }
            Some(("thermal", body)) => {
                let (n1, n2) = pair(body, "thermal")?;
                InitialState::thermal(n1, n2).map_err(|e| e.to_string())?
            }
            _ => return Err(format!("unknown state '{s}'; expected vacuum | coherent:RE,IM | thermal:N1,N2")),
        };
        Ok(Self(state))
    }
}

impl std::fmt::Display for StateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            InitialState::Vacuum => write!(f, "vacuum"),
            InitialState::Coherent { alpha } => write!(f, "coherent:{},{}", alpha.re, alpha.im),
            InitialState::Thermal { n10, n20 } => write!(f, "thermal:{n10},{n20}"),
        }
    }
}

/// Pass/fail thresholds of `oracle-check`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub photons: f64,
    pub cm: f64,
    pub entropy: f64,
    pub log_negativity: f64,
    /// Largest acceptable edge population of the truncated space.
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { photons: 1e-6, cm: 1e-6, entropy: 1e-4, log_negativity: 1e-3, tail: 1e-8 }
    }
}

impl FromStr for Tolerances {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tol = Self::default();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got '{item}'"))?;
            let value: f64 = value.parse().map_err(|e| format!("{key}: {e}"))?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(format!("{key} must be positive"));
            }
            let slot = match key {
                "photons" => &mut tol.photons,
                "cm" => &mut tol.cm,
                "entropy" => &mut tol.entropy,
                "log_negativity" => &mut tol.log_negativity,
                "tail" => &mut tol.tail,
                other => return Err(format!("unknown tolerance '{other}'")),
            };
            *slot = value;
        }
        Ok(tol)
    }
}

fn parse_float(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("not a number: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

pub fn parse_y(s: &str) -> Result<f64, String> {
    let y = parse_float(s)?;
    if !(0.0..1.0).contains(&y) {
        return Err("y must lie in [0,1)".into());
    }
    if y > Y_MAX {
        return Err(format!("y must not exceed {Y_MAX} (singular at y = 1)"));
    }
    Ok(y)
}

pub fn parse_tau(s: &str) -> Result<f64, String> {
    let tau = parse_float(s)?;
    if tau < 0.0 {
        return Err("tau must be nonnegative".into());
    }
    Ok(tau)
}

fn parse_frequency(s: &str) -> Result<f64, String> {
    let w = parse_float(s)?;
    if w <= 0.0 {
        return Err("frequency must be positive".into());
    }
    Ok(w)
}

fn parse_steps(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err("steps must be at least 2".into());
    }
    Ok(n)
}

fn parse_nmax(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    pdc_core::fock::FockSpec::new(n).map(|spec| spec.nmax()).map_err(|e| e.to_string())
}

/// Checks a sweep range against the domain of the swept variable.
pub fn check_range(var: SweepVar, from: f64, to: f64) -> Result<(), String> {
    for (flag, v) in [("--from", from), ("--to", to)] {
        let ok = match var {
            SweepVar::Tau => v.is_finite() && v >= 0.0,
            SweepVar::Y => (0.0..=Y_MAX).contains(&v),
        };
        if !ok {
            let domain = match var {
                SweepVar::Tau => "tau >= 0".to_string(),
                SweepVar::Y => format!("y in [0, {Y_MAX}]"),
            };
            return Err(format!("{flag} {v} is outside {domain}"));
        }
    }
    Ok(())
}

/// `steps` evenly spaced points from `from` to `to`, endpoints exact.
pub fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                to
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, clap::Error> {
        RunConfig::try_parse_from(std::iter::once("pdc").chain(args.iter().copied()))
    }

    #[test]
    fn photons_point() {
        let cfg = parse(&["photons", "--tau", "0.9", "--y", "0", "--state", "vacuum"]).unwrap();
        let Command::Photons(p) = cfg.command else { panic!("wrong subcommand") };
        assert_eq!((p.tau, p.y, p.state.0), (0.9, 0.0, InitialState::Vacuum));
        assert_eq!((cfg.w1, cfg.w2, cfg.precision, cfg.format), (10.0, 10.0, 9, Format::Csv));
    }

    #[test]
    fn y_domain_edge() {
        let err = parse(&["photons", "--tau", "0.9", "--y", "1.0"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("y must lie in [0,1)") && msg.contains("--y"), "{msg}");
        assert!(parse(&["photons", "--tau", "0.9", "--y", "0.9999999"]).is_err());
    }

    #[test]
    fn sweep_for_mismatch_figures() {
        let cfg = parse(&[
            "sweep", "--var", "y", "--from", "0", "--to", "0.95", "--steps", "20", "--tau", "0.9", "--state", "vacuum",
        ])
        .unwrap();
        let Command::Sweep(s) = cfg.command else { panic!("wrong subcommand") };
        assert_eq!((s.var, s.from, s.to, s.steps, s.tau, s.y), (SweepVar::Y, 0.0, 0.95, 20, Some(0.9), None));
        assert!(parse(&["sweep", "--var", "y", "--from", "0", "--to", "1", "--steps", "1"]).is_err());
    }

    #[test]
    fn state_grammar() {
        assert_eq!("vacuum".parse::<StateSpec>().unwrap().0, InitialState::Vacuum);
        assert_eq!(
            "coherent:0,3".parse::<StateSpec>().unwrap().0,
            InitialState::Coherent { alpha: Complex64::new(0.0, 3.0) }
        );
        assert_eq!("thermal:1,2".parse::<StateSpec>().unwrap().0, InitialState::Thermal { n10: 1.0, n20: 2.0 });
        assert!("thermal:-1,2".parse::<StateSpec>().is_err());
        assert!("thermal:1".parse::<StateSpec>().is_err());
        assert!("squeezed".parse::<StateSpec>().is_err());
        let err = parse(&["entangle", "--tau", "1", "--y", "0", "--state", "coherent:x,1"]).unwrap_err();
        assert!(err.to_string().contains("--state"));
    }

    #[test]
    fn tolerance_overrides() {
        let t: Tolerances = "cm=1e-5, tail=1e-6".parse().unwrap();
        assert_eq!((t.cm, t.tail, t.photons), (1e-5, 1e-6, 1e-6));
        assert_eq!("".parse::<Tolerances>().unwrap(), Tolerances::default());
        assert!("speed=1".parse::<Tolerances>().is_err());
        assert!("cm=-1".parse::<Tolerances>().is_err());
    }

    #[test]
    fn malformed_flags_exit_with_usage_code() {
        for args in [
            &["figure", "fig9"][..],
            &["photons", "--tau", "abc", "--y", "0"],
            &["oracle-check", "--tau", "1", "--y", "0", "--nmax", "1"],
            &["photons", "--tau", "1", "--y", "0", "--precision", "0"],
        ] {
            assert_eq!(parse(args).unwrap_err().exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn ranges_and_grids() {
        assert!(check_range(SweepVar::Y, 0.0, 0.95).is_ok());
        assert!(check_range(SweepVar::Y, 0.0, 1.0).unwrap_err().contains("--to"));
        assert!(check_range(SweepVar::Tau, -0.1, 1.0).unwrap_err().contains("--from"));
        let g = grid(0.0, 0.9, 10);
        assert_eq!(g.len(), 10);
        assert_eq!((g[0], g[9]), (0.0, 0.9));
        assert!((g[1] - 0.1).abs() < 1e-15);
    }
}
