//! Closed form vs truncated Fock-space simulation at one point.

use pdc_core::fock::{self, FockSpec};
use pdc_core::{assemble_cm, full_report, mean_photon_numbers, mean_vector, Error, ModelParams};
use serde_json::{json, Value};

use crate::args::{OracleArgs, StateSpec, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    TruncationInadequate,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Pass => 0,
            Self::Fail => 1,
            Self::TruncationInadequate => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::TruncationInadequate => "truncation_inadequate",
        }
    }
}

struct Check {
    name: &'static str,
    analytic: Value,
    oracle: Value,
    diff: f64,
    tol: f64,
}

impl Check {
    fn scalar(name: &'static str, analytic: f64, oracle: f64, tol: f64) -> Self {
        Self { name, analytic: json!(analytic), oracle: json!(oracle), diff: (analytic - oracle).abs(), tol }
    }

    fn pass(&self) -> bool {
        self.diff < self.tol
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "analytic": self.analytic,
            "oracle": self.oracle,
            "abs_diff": self.diff,
            "tolerance": self.tol,
            "pass": self.pass(),
        })
    }
}

/// Runs the comparison; the report is always produced, the verdict sets the
/// exit code.
pub fn run_oracle_check(args: &OracleArgs, w1: f64, w2: f64) -> Result<(Value, Verdict), Error> {
    let params = ModelParams::new(args.y, args.tau, w1, w2)?;
    let state = args.state.0;
    let tol: Tolerances = args.tol;
    let spec = FockSpec::new(args.nmax)?;

    let mut doc = json!({
        "schema_version": crate::output::SCHEMA_VERSION,
        "command": "oracle-check",
        "tau": args.tau,
        "y": args.y,
        "w1": w1,
        "w2": w2,
        "state": StateSpec(state).to_string(),
        "nmax": args.nmax,
        "tail_threshold": tol.tail,
    });

    let rho = match fock::simulate(&params, &state, &spec) {
        Ok(rho) => rho,
        Err(e @ Error::TruncationLoss { cut, .. }) => {
            doc["status"] = json!(Verdict::TruncationInadequate.label());
            doc["cut_mass"] = json!(cut);
            doc["error"] = json!(e.to_string());
            return Ok((doc, Verdict::TruncationInadequate));
        }
        Err(e) => return Err(e),
    };
    let moments = fock::measure(&rho, &params)?;

    let (n1, n2) = mean_photon_numbers(&params, &state)?;
    let cm = assemble_cm(&params, &state)?;
    let mean = mean_vector(&params, &state)?;
    let report = full_report(&params, &state)?;
    let (s1, s2) = (fock::direct_entropy(&rho, 1)?, fock::direct_entropy(&rho, 2)?);
    let en = fock::direct_log_negativity(&rho)?;

    let mean_diff = mean.iter().zip(&moments.mean).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let checks = [
        Check::scalar("n1", n1, moments.n1, tol.photons),
        Check::scalar("n2", n2, moments.n2, tol.photons),
        Check {
            name: "mean_vector",
            analytic: json!(mean),
            oracle: json!(moments.mean),
            diff: mean_diff,
            tol: tol.cm,
        },
        Check {
            name: "covariance_matrix",
            analytic: json!(cm.matrix()),
            oracle: json!(moments.cm.matrix()),
            diff: cm.max_abs_diff(&moments.cm),
            tol: tol.cm,
        },
        Check::scalar("entropy1", report.entropy1, s1, tol.entropy),
        Check::scalar("entropy2", report.entropy2, s2, tol.entropy),
        Check::scalar("log_negativity", report.log_negativity, en, tol.log_negativity),
    ];

    let truncation_ok = moments.tail <= tol.tail;
    let verdict = if !truncation_ok {
        Verdict::TruncationInadequate
    } else if checks.iter().all(Check::pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    doc["tail_mass"] = json!(moments.tail);
    doc["cut_mass"] = json!(rho.cut_mass());
    doc["checks"] = Value::Array(checks.iter().map(Check::to_json).collect());
    doc["status"] = json!(verdict.label());
    Ok((doc, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(tau: f64, y: f64, state: &str, nmax: usize) -> OracleArgs {
        OracleArgs { tau, y, state: state.parse().unwrap(), nmax, tol: Tolerances::default() }
    }

    #[test]
    fn squeezed_vacuum_passes() {
        let (doc, verdict) = run_oracle_check(&args(0.9, 0.0, "vacuum", 40), 10.0, 10.0).unwrap();
        assert_eq!(verdict, Verdict::Pass, "{doc:#}");
        let en = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "log_negativity").unwrap();
        assert!(en["abs_diff"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn under_truncation_is_reported() {
        let (doc, verdict) = run_oracle_check(&args(0.9, 0.0, "vacuum", 4), 10.0, 10.0).unwrap();
        assert_eq!(verdict, Verdict::TruncationInadequate);
        assert_eq!(verdict.exit_code(), 3);
        assert!(doc["tail_mass"].as_f64().unwrap() > 1e-8);
    }

    #[test]
    fn initial_truncation_loss_is_reported() {
        let (doc, verdict) = run_oracle_check(&args(0.2, 0.0, "thermal:5,5", 10), 10.0, 10.0).unwrap();
        assert_eq!(verdict, Verdict::TruncationInadequate);
        assert!(doc["error"].as_str().unwrap().contains("discards"));
    }
}
