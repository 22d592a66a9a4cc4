//! Two-mode Gaussian covariance matrices and their entanglement measures.
//!
//! Quadratures are `x = (a + a^dag)/sqrt 2` and `p = (a - a^dag)/(i sqrt 2)`,
//! so the vacuum has variance 1/2 and a covariance matrix is physical when
//! its symplectic eigenvalues are at least 1/2. Matrices are stored in the
//! ordering `(x1, p1, x2, p2)`: the upper-right 2x2 block holds the
//! correlations between the modes.

use faer::{c64, Mat};
use num_complex::Complex64;

use crate::dynamics::{amplified_occupations, bogoliubov_coefficients, InitialState, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues};

pub const X1: usize = 0;
pub const P1: usize = 1;
pub const X2: usize = 2;
pub const P2: usize = 3;

/// Width of the band below 1/2 treated as rounding noise rather than
/// unphysical or entangled.
pub const NU_TOLERANCE: f64 = 1e-9;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A real symmetric 4x4 second-moment matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix4 {
    m: [[f64; 4]; 4],
}

impl CovarianceMatrix4 {
    /// Wraps `m`, rejecting asymmetry above 1e-12.
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        let mut asym = 0.0_f64;
        for i in 0..4 {
            for j in 0..i {
                asym = asym.max((m[i][j] - m[j][i]).abs());
            }
        }
        if asym > SYMMETRY_TOLERANCE || m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { m })
    }

    /// The vacuum matrix, `identity / 2`.
    pub fn vacuum() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 0.5;
        }
        Self { m }
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    /// Reduced single-mode matrix of mode 1 or 2.
    pub fn block(&self, mode: usize) -> [[f64; 2]; 2] {
        let o = 2 * (mode - 1);
        [[self.m[o][o], self.m[o][o + 1]], [self.m[o + 1][o], self.m[o + 1][o + 1]]]
    }

    /// Inter-mode correlation block (rows mode 1, columns mode 2).
    pub fn gamma(&self) -> [[f64; 2]; 2] {
        [[self.m[X1][X2], self.m[X1][P2]], [self.m[P1][X2], self.m[P1][P2]]]
    }

    pub fn det(&self) -> f64 {
        det4(self.m)
    }

    /// Symplectic eigenvalues `(nu_minus, nu_plus)` of the full matrix, the
    /// moduli of the eigenvalues of `i sigma^{1/2} Omega sigma^{1/2}`.
    /// `nu_minus` is 0 if the matrix is not positive definite.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let delta = det2(self.block(1)) + det2(self.block(2)) + 2.0 * det2(self.gamma());
        let fallback = symplectic_pair(delta, self.det());
        let sigma = Mat::from_fn(4, 4, |i, j| c64::new(self.m[i][j], 0.0));
        let Ok((lambda, q)) = hermitian_eigen(sigma.as_ref()) else {
            return fallback;
        };
        if lambda[0] <= 0.0 {
            return (0.0, fallback.1);
        }
        let root = Mat::from_fn(4, 4, |i, j| {
            (0..4).map(|k| q[(i, k)] * lambda[k].sqrt() * q[(j, k)].conj()).sum::<c64>()
        });
        // i * Omega, Omega = diag([[0, 1], [-1, 0]], [[0, 1], [-1, 0]])
        let i_omega = Mat::from_fn(4, 4, |r, c| match (r % 2, c % 2) {
            (0, 1) if r / 2 == c / 2 => c64::new(0.0, 1.0),
            (1, 0) if r / 2 == c / 2 => c64::new(0.0, -1.0),
            _ => c64::new(0.0, 0.0),
        });
        let h = &root * &i_omega * &root;
        match hermitian_eigenvalues(h.as_ref()) {
            // ascending: -nu_plus, -nu_minus, nu_minus, nu_plus
            Ok(v) => (0.5 * (v[2] - v[1]), 0.5 * (v[3] - v[0])),
            Err(_) => fallback,
        }
    }

    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues().0 >= 0.5 - NU_TOLERANCE
    }

    /// Largest elementwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn det2(b: [[f64; 2]; 2]) -> f64 {
    b[0][0] * b[1][1] - b[0][1] * b[1][0]
}

fn det4(mut a: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Roots `sqrt((delta -+ sqrt(delta^2 - 4 det)) / 2)`. The smaller one is
/// taken as `det / larger^2` to avoid cancellation.
fn symplectic_pair(delta: f64, det: f64) -> (f64, f64) {
    let disc = (delta * delta - 4.0 * det).max(0.0);
    let hi2 = 0.5 * (delta + disc.sqrt());
    let lo2 = if hi2 > 0.0 { det / hi2 } else { 0.0 };
    (lo2.max(0.0).sqrt(), hi2.max(0.0).sqrt())
}

/// Entanglement summary of a two-mode Gaussian state. Entropies are in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub nu1: f64,
    pub nu2: f64,
    pub entropy1: f64,
    pub entropy2: f64,
    pub nu_tilde_minus: f64,
    pub log_negativity: f64,
}

impl EntanglementReport {
    pub fn from_cm(cm: &CovarianceMatrix4) -> Result<Self> {
        let (nu1, nu2) = reduced_symplectic_eigenvalues(cm)?;
        let nu_tilde_minus = ppt_min_symplectic(cm)?;
        Ok(Self {
            nu1,
            nu2,
            entropy1: entropy_f(nu1)?,
            entropy2: entropy_f(nu2)?,
            nu_tilde_minus,
            log_negativity: log_negativity_from_nu(nu_tilde_minus),
        })
    }
}

/// Covariance matrix of the evolved state, from the exact second moments of
/// the Bogoliubov-transformed operators.
pub fn assemble_cm(params: &ModelParams, init: &InitialState) -> Result<CovarianceMatrix4> {
    init.validate()?;
    let (n10, n20) = init.central_occupations();
    let (n1, n2) = amplified_occupations(params, n10, n20);
    let c = pair_correlator(params, n10 + n20 + 1.0);

    let mut m = [[0.0; 4]; 4];
    m[X1][X1] = n1 + 0.5;
    m[P1][P1] = n1 + 0.5;
    m[X2][X2] = n2 + 0.5;
    m[P2][P2] = n2 + 0.5;
    m[X1][X2] = c.re;
    m[X1][P2] = c.im;
    m[P1][X2] = c.im;
    m[P1][P2] = -c.re;
    for i in 0..4 {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    Ok(CovarianceMatrix4 { m })
}

/// `<a1 a2>` for uncorrelated inputs with `n10 + n20 + 1 = total`.
fn pair_correlator(params: &ModelParams, total: f64) -> Complex64 {
    let k = bogoliubov_coefficients(params);
    Complex64::from_polar(total, -(k.phi1 + k.phi2)) * k.u * k.v
}

/// Result of comparing the printed appendix entries with [`assemble_cm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixCrosscheck {
    /// Matrix built literally from the appendix expressions.
    pub literal: CovarianceMatrix4,
    /// Matrix from [`assemble_cm`].
    pub derived: CovarianceMatrix4,
    pub max_abs_discrepancy: f64,
    /// `literal - derived` on the correlation block
    /// `[[x1x2, x1p2], [p1x2, p1p2]]`.
    pub gamma_discrepancy: [[f64; 2]; 2],
    /// `sigma_13^2 + sigma_14^2` of the literal entries.
    pub literal_correlation_sq: f64,
    /// `|<a1 a2>|^2` of the derived route.
    pub derived_correlation_sq: f64,
}

/// Transcribes the appendix covariance entries for a thermal input as
/// printed: `sigma_13` with phase `2 w' tau`, `sigma_14` with phase
/// `2 w' x tau`, `sigma_23 = sigma_14`, `sigma_24 = sigma_13`, where `w'` is
/// read as `w_bar + y`. Nothing is corrected.
pub fn appendix_cm_crosscheck(params: &ModelParams, n10: f64, n20: f64) -> Result<AppendixCrosscheck> {
    let init = InitialState::thermal(n10, n20)?;
    let derived = assemble_cm(params, &init)?;

    let x = params.x();
    let y = params.y();
    let tau = params.tau();
    let (c, s) = (params.r().cosh(), params.r().sinh());
    let w_prime = params.w_bar() + y;
    let total = n10 + n20 + 1.0;
    let (n1, n2) = amplified_occupations(params, n10, n20);

    let sigma13 = total
        * ((2.0 * w_prime * tau).sin() / x * c * s - (2.0 * w_prime * tau).cos() * y / (x * x) * s * s);
    let sigma14 = total
        * ((2.0 * w_prime * x * tau).cos() / x * c * s
            + (2.0 * w_prime * x * tau).sin() * y / (x * x) * s * s);

    let mut m = [[0.0; 4]; 4];
    m[X1][X1] = n1 + 0.5;
    m[P1][P1] = n1 + 0.5;
    m[X2][X2] = n2 + 0.5;
    m[P2][P2] = n2 + 0.5;
    m[X1][X2] = sigma13;
    m[X1][P2] = sigma14;
    m[P1][X2] = sigma14;
    m[P1][P2] = sigma13;
    for i in 0..4 {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    let literal = CovarianceMatrix4 { m };

    let (gl, gd) = (literal.gamma(), derived.gamma());
    let gamma_discrepancy = [
        [gl[0][0] - gd[0][0], gl[0][1] - gd[0][1]],
        [gl[1][0] - gd[1][0], gl[1][1] - gd[1][1]],
    ];
    Ok(AppendixCrosscheck {
        literal,
        derived,
        max_abs_discrepancy: literal.max_abs_diff(&derived),
        gamma_discrepancy,
        literal_correlation_sq: sigma13 * sigma13 + sigma14 * sigma14,
        derived_correlation_sq: pair_correlator(params, total).norm_sqr(),
    })
}

/// `nu_j = sqrt(det sigma_j)` for the two reduced single-mode matrices.
pub fn reduced_symplectic_eigenvalues(cm: &CovarianceMatrix4) -> Result<(f64, f64)> {
    let nu = |mode: usize| {
        let det = det2(cm.block(mode));
        if det < 0.25 - NU_TOLERANCE {
            Err(Error::UnphysicalBlock { mode, det })
        } else {
            Ok(det.max(0.25).sqrt())
        }
    };
    Ok((nu(1)?, nu(2)?))
}

/// Von Neumann entropy (nats) of a single-mode Gaussian state with
/// symplectic eigenvalue `x`:
/// `f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 0.5 - NU_TOLERANCE) || !x.is_finite() {
        return Err(Error::EntropyDomain(x));
    }
    if x <= 0.5 {
        return Ok(0.0);
    }
    let (plus, minus) = (x + 0.5, x - 0.5);
    Ok(plus * plus.ln() - minus * minus.ln())
}

pub fn entanglement_entropy(cm: &CovarianceMatrix4) -> Result<(f64, f64)> {
    let (nu1, nu2) = reduced_symplectic_eigenvalues(cm)?;
    Ok((entropy_f(nu1)?, entropy_f(nu2)?))
}

/// Smallest symplectic eigenvalue of the partially transposed matrix,
/// `sqrt((D - sqrt(D^2 - 4 det)) / 2)` with
/// `D = det sigma_1 + det sigma_2 - 2 det gamma`.
pub fn ppt_min_symplectic(cm: &CovarianceMatrix4) -> Result<f64> {
    let delta = det2(cm.block(1)) + det2(cm.block(2)) - 2.0 * det2(cm.gamma());
    let det = cm.det();
    let disc = delta * delta - 4.0 * det;
    if disc < -NU_TOLERANCE {
        return Err(Error::NegativeDiscriminant(disc));
    }
    Ok(symplectic_pair(delta, det).0)
}

fn log_negativity_from_nu(nu_tilde_minus: f64) -> f64 {
    if nu_tilde_minus >= 0.5 - NU_TOLERANCE {
        0.0
    } else {
        -(2.0 * nu_tilde_minus).ln()
    }
}

/// `max(0, -ln(2 nu~_-))`, in nats.
pub fn log_negativity(cm: &CovarianceMatrix4) -> Result<f64> {
    Ok(log_negativity_from_nu(ppt_min_symplectic(cm)?))
}

pub fn full_report(params: &ModelParams, init: &InitialState) -> Result<EntanglementReport> {
    EntanglementReport::from_cm(&assemble_cm(params, init)?)
}
