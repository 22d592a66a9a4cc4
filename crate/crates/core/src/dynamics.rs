//! Closed-form dynamics of the mismatched two-mode parametric interaction.
//!
//! In units of the coupling `g` the evolved mode operators are a generalized
//! Bogoliubov transformation of the initial ones:
//!
//! ```text
//! a1(tau)  = e^{-i phi1} [ u a1(0) + v a2(0)^dag ]
//! a2(tau)^dag = e^{+i phi2} [ v* a1(0) + u* a2(0)^dag ]
//! ```
//!
//! with `u = C + i (y/x) S`, `v = i S / x`, `C = cosh(x tau)`, `S = sinh(x tau)`,
//! `x = sqrt(1 - y^2)` and `phi_j = tau (w_j + y)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest accepted mismatch. Beyond this `1/x` amplifies rounding noise.
pub const Y_MAX: f64 = 0.999_999;

/// Mode frequency (in units of `g`) used when none is given.
pub const DEFAULT_FREQUENCY: f64 = 10.0;

/// Interaction time beyond which the undepleted-pump approximation is
/// questionable. Exceeding it is reported, never rejected.
pub const UNDEPLETED_PUMP_LIMIT: f64 = 1.0;

/// Dimensionless model inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    y: f64,
    tau: f64,
    w1: f64,
    w2: f64,
}

impl ModelParams {
    pub fn new(y: f64, tau: f64, w1: f64, w2: f64) -> Result<Self> {
        if !y.is_finite() || y < 0.0 || y >= 1.0 {
            return Err(Error::MismatchOutOfRange(y));
        }
        if y > Y_MAX {
            return Err(Error::NearSingularity(y));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidTime(tau));
        }
        for (name, value) in [("w1", w1), ("w2", w2)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidFrequency { name, value });
            }
        }
        Ok(Self { y, tau, w1, w2 })
    }

    /// Parameters with both mode frequencies set to [`DEFAULT_FREQUENCY`].
    pub fn with_default_frequencies(y: f64, tau: f64) -> Result<Self> {
        Self::new(y, tau, DEFAULT_FREQUENCY, DEFAULT_FREQUENCY)
    }

    /// Same model at another interaction time.
    pub fn at_time(&self, tau: f64) -> Result<Self> {
        Self::new(self.y, tau, self.w1, self.w2)
    }

    /// Same model with another mismatch.
    pub fn with_mismatch(&self, y: f64) -> Result<Self> {
        Self::new(y, self.tau, self.w1, self.w2)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    /// `x = sqrt(1 - y^2)`, evaluated as `sqrt((1 - y)(1 + y))`.
    pub fn x(&self) -> f64 {
        ((1.0 - self.y) * (1.0 + self.y)).sqrt()
    }

    /// Squeezing parameter `r = tau x`.
    pub fn r(&self) -> f64 {
        self.tau * self.x()
    }

    /// Half the pump frequency, `(w1 + w2) / 2`.
    pub fn w_bar(&self) -> f64 {
        0.5 * (self.w1 + self.w2)
    }

    /// Effective oscillation frequency of mode 1, `w1 + y`.
    pub fn wprime1(&self) -> f64 {
        self.w1 + self.y
    }

    /// Effective oscillation frequency of mode 2, `w2 + y`.
    pub fn wprime2(&self) -> f64 {
        self.w2 + self.y
    }

    /// Rotation angle `(w_bar + y) tau` of the frame in which the
    /// equations of motion are autonomous.
    pub fn frame_angle(&self) -> f64 {
        (self.w_bar() + self.y) * self.tau
    }

    /// True once `tau` passes the undepleted-pump validity bound.
    pub fn exceeds_undepleted_pump(&self) -> bool {
        self.tau >= UNDEPLETED_PUMP_LIMIT
    }
}

/// Input state of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// `|0>_1 |0>_2`, spontaneous downconversion.
    Vacuum,
    /// `|alpha>_1 |0>_2`, amplifier with an injected signal.
    Coherent { alpha: Complex64 },
    /// Product of thermal states with mean occupations `n10`, `n20`.
    Thermal { n10: f64, n20: f64 },
}

impl InitialState {
    pub fn coherent(alpha: Complex64) -> Result<Self> {
        let state = Self::Coherent { alpha };
        state.validate()?;
        Ok(state)
    }

    pub fn thermal(n10: f64, n20: f64) -> Result<Self> {
        let state = Self::Thermal { n10, n20 };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Vacuum => Ok(()),
            Self::Coherent { alpha } => {
                if alpha.re.is_finite() && alpha.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidAmplitude(alpha))
                }
            }
            Self::Thermal { n10, n20 } => {
                for (name, value) in [("n10", n10), ("n20", n20)] {
                    if !value.is_finite() || value < 0.0 {
                        return Err(Error::InvalidOccupation { name, value });
                    }
                }
                Ok(())
            }
        }
    }

    /// Initial mean photon numbers `(n10, n20)`.
    pub fn mean_occupations(&self) -> (f64, f64) {
        match *self {
            Self::Vacuum => (0.0, 0.0),
            Self::Coherent { alpha } => (alpha.norm_sqr(), 0.0),
            Self::Thermal { n10, n20 } => (n10, n20),
        }
    }

    /// Occupations that carry variance. A coherent state is a displaced
    /// vacuum, so its displacement contributes nothing here.
    pub fn central_occupations(&self) -> (f64, f64) {
        match *self {
            Self::Vacuum | Self::Coherent { .. } => (0.0, 0.0),
            Self::Thermal { n10, n20 } => (n10, n20),
        }
    }
}

/// Coefficients of the generalized Bogoliubov transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoeffs {
    /// Coefficient of `a1(0)` in `a1(tau)`, before the phase `e^{-i phi1}`.
    pub u: Complex64,
    /// Coefficient of `a2(0)^dag` in `a1(tau)`, before the phase `e^{-i phi1}`.
    pub v: Complex64,
    pub phi1: f64,
    pub phi2: f64,
}

impl BogoliubovCoeffs {
    /// `|u|^2 - |v|^2`, equal to one when the commutator is preserved.
    pub fn commutator(&self) -> f64 {
        self.u.norm_sqr() - self.v.norm_sqr()
    }

    /// Coefficients of `(a1(0), a2(0)^dag)` in `a1(tau)`.
    pub fn mode1_row(&self) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, -self.phi1);
        (phase * self.u, phase * self.v)
    }

    /// Coefficients of `(a1(0)^dag, a2(0))` in `a2(tau)`.
    pub fn mode2_row(&self) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, -self.phi2);
        (phase * self.v, phase * self.u)
    }
}

pub fn bogoliubov_coefficients(params: &ModelParams) -> BogoliubovCoeffs {
    let x = params.x();
    let r = params.r();
    let (c, s) = (r.cosh(), r.sinh());
    BogoliubovCoeffs {
        u: Complex64::new(c, params.y() * s / x),
        v: Complex64::new(0.0, s / x),
        phi1: params.tau() * params.wprime1(),
        phi2: params.tau() * params.wprime2(),
    }
}

pub fn squeezing_parameter(params: &ModelParams) -> f64 {
    params.r()
}

/// Evolved mean photon numbers for the given initial occupations:
/// `n_j = [(C^2 - y^2) n_j0 + S^2 (n_k0 + 1)] / (1 - y^2)`.
pub(crate) fn amplified_occupations(params: &ModelParams, n10: f64, n20: f64) -> (f64, f64) {
    let x = params.x();
    let x2 = x * x;
    let r = params.r();
    let (c, s) = (r.cosh(), r.sinh());
    let y2 = params.y() * params.y();
    // (C^2 - y^2) / x^2 = 1 + S^2 / x^2 keeps small-r accuracy
    let gain_direct = 1.0 + s * s / x2;
    let gain_cross = s * s / x2;
    debug_assert!(((c * c - y2) / x2 - gain_direct).abs() <= 1e-9 * gain_direct);
    (
        gain_direct * n10 + gain_cross * (n20 + 1.0),
        gain_direct * n20 + gain_cross * (n10 + 1.0),
    )
}

pub fn mean_photon_numbers(params: &ModelParams, init: &InitialState) -> Result<(f64, f64)> {
    init.validate()?;
    let (n10, n20) = init.mean_occupations();
    Ok(amplified_occupations(params, n10, n20))
}

/// `n1 - n2`, conserved by the interaction.
pub fn photon_difference(params: &ModelParams, init: &InitialState) -> Result<f64> {
    let (n1, n2) = mean_photon_numbers(params, init)?;
    Ok(n1 - n2)
}

/// First moments in the ordering `(x1, p1, x2, p2)`, with `x = (a + a^dag)/sqrt 2`.
pub fn mean_vector(params: &ModelParams, init: &InitialState) -> Result<[f64; 4]> {
    init.validate()?;
    let alpha = match *init {
        InitialState::Coherent { alpha } => alpha,
        InitialState::Vacuum | InitialState::Thermal { .. } => return Ok([0.0; 4]),
    };
    let coeffs = bogoliubov_coefficients(params);
    let (a1_from_a1, _) = coeffs.mode1_row();
    let (a2_from_a1dag, _) = coeffs.mode2_row();
    let a1 = a1_from_a1 * alpha;
    let a2 = a2_from_a1dag * alpha.conj();
    let s2 = std::f64::consts::SQRT_2;
    Ok([s2 * a1.re, s2 * a1.im, s2 * a2.re, s2 * a2.im])
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const COSH_09: f64 = 1.433_086_385_448_774_4;
    const SINH_09: f64 = 1.026_516_725_708_175_3;
    const SINH2_09: f64 = 1.053_736_588_158_633_2;
    const R_0909: f64 = 0.392_300_904_918_660_6;
    const S2_OVER_X2_0909: f64 = 0.852_415_105_225_739_6;

    fn p(y: f64, tau: f64) -> ModelParams {
        ModelParams::with_default_frequencies(y, tau).unwrap()
    }

    #[test]
    fn rejects_out_of_range_mismatch() {
        assert!(matches!(p_err(1.0), Error::MismatchOutOfRange(_)));
        assert!(matches!(p_err(-0.1), Error::MismatchOutOfRange(_)));
        assert!(matches!(p_err(f64::NAN), Error::MismatchOutOfRange(_)));
        assert!(matches!(p_err(0.999_999_5), Error::NearSingularity(_)));
        assert!(ModelParams::with_default_frequencies(Y_MAX, 0.1).is_ok());
    }

    fn p_err(y: f64) -> Error {
        ModelParams::with_default_frequencies(y, 0.5).unwrap_err()
    }

    #[test]
    fn rejects_bad_time_and_frequency() {
        assert!(matches!(
            ModelParams::with_default_frequencies(0.1, -1e-3),
            Err(Error::InvalidTime(_))
        ));
        assert!(matches!(
            ModelParams::new(0.1, 0.5, 0.0, 1.0),
            Err(Error::InvalidFrequency { name: "w1", .. })
        ));
        assert!(matches!(
            ModelParams::new(0.1, 0.5, 1.0, f64::INFINITY),
            Err(Error::InvalidFrequency { name: "w2", .. })
        ));
    }

    #[test]
    fn derived_quantities() {
        let m = ModelParams::new(0.3, 0.8, 4.0, 6.0).unwrap();
        assert!((m.x() * m.x() + 0.09 - 1.0).abs() < 1e-12);
        assert_eq!(m.w_bar(), 5.0);
        assert_eq!(m.wprime1(), 4.3);
        assert_eq!(m.wprime2(), 6.3);
        assert_eq!(p(0.0, 0.9).r(), 0.9);
        assert!(!p(0.0, 0.99).exceeds_undepleted_pump());
        assert!(p(0.0, 1.0).exceeds_undepleted_pump());
    }

    #[test]
    fn coefficients_at_zero_time() {
        let c = bogoliubov_coefficients(&p(0.0, 0.0));
        assert_eq!(c.u, Complex64::new(1.0, 0.0));
        assert_eq!(c.v, Complex64::new(0.0, 0.0));
        assert_eq!((c.phi1, c.phi2), (0.0, 0.0));
    }

    #[test]
    fn coefficients_without_mismatch() {
        let c = bogoliubov_coefficients(&p(0.0, 0.9));
        assert!((c.u - Complex64::new(COSH_09, 0.0)).norm() < 1e-14);
        assert!((c.v - Complex64::new(0.0, SINH_09)).norm() < 1e-14);
        assert!((c.phi1 - 9.0).abs() < 1e-14);
    }

    #[test]
    fn coefficients_with_mismatch() {
        let c = bogoliubov_coefficients(&p(0.9, 0.9));
        assert!((c.v.norm_sqr() - S2_OVER_X2_0909).abs() < 1e-12);
        assert!((c.commutator() - 1.0).abs() < 1e-12);
        let row2 = c.mode2_row();
        // a2(tau) = e^{-i phi2} [v a1^dag + u a2]
        let phase = Complex64::from_polar(1.0, -c.phi2);
        assert!((row2.0 - phase * c.v).norm() < 1e-15);
    }

    #[test]
    fn squeezing_parameter_values() {
        assert_eq!(squeezing_parameter(&p(0.0, 0.9)), 0.9);
        assert!((squeezing_parameter(&p(0.6, 1.0)) - 0.8).abs() < 1e-15);
        assert!((squeezing_parameter(&p(0.9, 0.9)) - R_0909).abs() < 1e-15);
    }

    #[test]
    fn photon_numbers_reference_points() {
        let th = InitialState::thermal(1.0, 2.0).unwrap();
        assert_eq!(mean_photon_numbers(&p(0.4, 0.0), &th).unwrap(), (1.0, 2.0));

        let (n1, n2) = mean_photon_numbers(&p(0.0, 0.9), &InitialState::Vacuum).unwrap();
        assert!((n1 - SINH2_09).abs() < 1e-13 && n1 == n2);

        let (n1, n2) = mean_photon_numbers(&p(0.9, 0.9), &InitialState::Vacuum).unwrap();
        assert!((n1 - S2_OVER_X2_0909).abs() < 1e-12 && n1 == n2);
    }

    #[test]
    fn photon_difference_is_conserved() {
        let th = InitialState::thermal(1.0, 2.0).unwrap();
        assert!((photon_difference(&p(0.5, 0.7), &th).unwrap() + 1.0).abs() < 1e-12);
        let coh = InitialState::coherent(Complex64::new(2.0, 0.0)).unwrap();
        assert!((photon_difference(&p(0.9, 0.9), &coh).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(photon_difference(&p(0.3, 0.6), &InitialState::Vacuum).unwrap(), 0.0);
    }

    #[test]
    fn invalid_initial_states() {
        assert!(matches!(
            InitialState::thermal(-1.0, 0.0),
            Err(Error::InvalidOccupation { name: "n10", .. })
        ));
        assert!(InitialState::thermal(0.0, f64::NAN).is_err());
        assert!(InitialState::coherent(Complex64::new(f64::INFINITY, 0.0)).is_err());
        let bad = InitialState::Thermal { n10: 1.0, n20: -2.0 };
        assert!(mean_photon_numbers(&p(0.1, 0.1), &bad).is_err());
    }

    #[test]
    fn occupations_by_variant() {
        let coh = InitialState::Coherent { alpha: Complex64::new(1.0, 2.0) };
        assert_eq!(coh.mean_occupations(), (5.0, 0.0));
        assert_eq!(coh.central_occupations(), (0.0, 0.0));
        assert_eq!(InitialState::Vacuum.mean_occupations(), (0.0, 0.0));
    }

    #[test]
    fn mean_vector_cases() {
        assert_eq!(mean_vector(&p(0.2, 0.7), &InitialState::Vacuum).unwrap(), [0.0; 4]);
        let coh = InitialState::coherent(Complex64::new(1.0, 0.0)).unwrap();
        let m = mean_vector(&p(0.0, 0.0), &coh).unwrap();
        assert!((m[0] - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(&m[1..], &[0.0, 0.0, 0.0]);
    }
}
