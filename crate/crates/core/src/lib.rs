//! Nondegenerate two-mode parametric interaction with a phase mismatch.
//!
//! Three layers:
//!
//! - [`dynamics`]: the exact generalized Bogoliubov solution, photon numbers,
//!   the squeezing parameter and the photon-difference invariant;
//! - [`gaussian`]: the two-mode covariance matrix and the entanglement
//!   measures that follow from it (reduced symplectic eigenvalues, Von
//!   Neumann entropies, PPT eigenvalue, logarithmic negativity);
//! - [`fock`]: a brute-force truncated Fock-space simulation used as an
//!   independent oracle for everything above.
//!
//! All quantities are dimensionless: times are `tau = g t`, the mismatch is
//! `y = delta / g`, and mode frequencies are given in units of `g`.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod gaussian;
mod linalg;

pub use dynamics::{
    bogoliubov_coefficients, mean_photon_numbers, mean_vector, photon_difference,
    squeezing_parameter, BogoliubovCoeffs, InitialState, ModelParams,
};
pub use error::{Error, Result};
pub use gaussian::{
    appendix_cm_crosscheck, assemble_cm, entanglement_entropy, entropy_f, full_report,
    log_negativity, ppt_min_symplectic, reduced_symplectic_eigenvalues, AppendixCrosscheck,
    CovarianceMatrix4, EntanglementReport,
};
