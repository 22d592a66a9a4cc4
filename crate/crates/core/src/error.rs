use thiserror::Error;

/// Errors raised by the closed-form model, the Gaussian toolkit and the Fock oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mismatch y = {0} is outside [0, 1); y >= 1 is the oscillatory regime and is not modelled")]
    MismatchOutOfRange(f64),

    #[error("mismatch y = {0} is too close to the x = sqrt(1 - y^2) = 0 singularity (limit {limit})", limit = crate::dynamics::Y_MAX)]
    NearSingularity(f64),

    #[error("interaction time tau = {0} must be finite and nonnegative")]
    InvalidTime(f64),

    #[error("mode frequency {name} = {value} must be finite and positive (units of g)")]
    InvalidFrequency { name: &'static str, value: f64 },

    #[error("initial occupation {name} = {value} must be finite and nonnegative")]
    InvalidOccupation { name: &'static str, value: f64 },

    #[error("coherent amplitude must be finite, got {0}")]
    InvalidAmplitude(num_complex::Complex64),

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance block {mode} has determinant {det} < 1/4: unphysical")]
    UnphysicalBlock { mode: usize, det: f64 },

    #[error("symplectic eigenvalue argument {0} is below 1/2")]
    EntropyDomain(f64),

    #[error("partial-transpose discriminant {0:e} is negative: unphysical covariance matrix")]
    NegativeDiscriminant(f64),

    #[error("Fock cutoff nmax = {nmax} is invalid (need nmax >= 2 and nmax^2 <= {cap})")]
    CutoffOutOfRange { nmax: usize, cap: usize },

    #[error("truncating the initial state at nmax = {nmax} discards mass {cut:e} (limit {limit:e})")]
    TruncationLoss { nmax: usize, cut: f64, limit: f64 },

    #[error("dense block of dimension {dim} exceeds the eigensolver limit {limit}")]
    BlockTooLarge { dim: usize, limit: usize },

    #[error("Hermitian eigendecomposition failed on a block of dimension {0}")]
    Eigendecomposition(usize),

    #[error("propagator unitarity residual {0:e} exceeds tolerance")]
    NonUnitary(f64),

    #[error("operator cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
