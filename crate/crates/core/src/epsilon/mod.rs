//! Weil constants, Tate local factors, the regularized torus integral `S_mu(1,1)` and the
//! proportionality check between the epsilon factor and that integral.

mod cyclo;
mod lemma_a;
mod tate;
mod torus_integral;
mod weil;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use cyclo::{Cyclotomic, CyclotomicField};
pub use lemma_a::{verify_lemma_a, LemmaAOutcome, IMAGINARY_TOLERANCE};
pub use tate::{
    epsilon_functional_equation, epsilon_gauss_sum, epsilon_nu1, epsilon_pair, l_factor, self_dual_constant, tate_epsilon, CROSS_CHECK_TOLERANCE,
    zeta_integral, EpsilonValue, TestFunction,
};
pub use torus_integral::{s_mu_11, s_mu_11_with_margin, SHELL_MARGIN, torus_mass, torus_mass_exact, torus_shell_integral, RegularizedValue, ShellSum, TailShape};
pub use weil::{gamma_norm_form, weil_constant, weil_lattice_integral, QuadraticFormF};

use crate::character::{CharacterError, Phase};
use crate::padic::ArithError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EpsilonError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("no stabilization: {0}")]
    NoStabilization(String),
    #[error("pole of the L-factor at s = {0}")]
    Pole(String),
    #[error("unsupported test function: {0}")]
    UnsupportedTestFunction(String),
    #[error("Gauss sum {gauss} and functional equation {functional} disagree")]
    CrossCheckFailure { gauss: String, functional: String },
    #[error("tail not resolved: {0}")]
    TailNotResolved(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value off the unit circle: |z| = {0}")]
    NotUnitary(f64),
}

/// A complex number of modulus one, with its exact phase when known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitComplex {
    #[serde(serialize_with = "serialize_complex")]
    value: Complex64,
    exact: Option<Phase>,
}

pub(crate) fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&round12(z.re))?;
    t.serialize_element(&round12(z.im))?;
    t.end()
}

/// Rounds to 12 significant decimals so serialized reports do not depend on the last bits of
/// floating-point summation order.
pub(crate) fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl UnitComplex {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn new(value: Complex64, exact: Option<Phase>) -> Result<Self, EpsilonError> {
        if (value.norm() - 1.0).abs() > Self::TOLERANCE {
            return Err(EpsilonError::NotUnitary(value.norm()));
        }
        Ok(Self { value, exact })
    }

    pub fn from_phase(phase: Phase) -> Self {
        Self { value: phase.to_complex(), exact: Some(phase) }
    }

    pub fn one() -> Self {
        Self::from_phase(Phase::ZERO)
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn exact(&self) -> Option<Phase> {
        self.exact
    }

    pub fn inv(&self) -> Self {
        Self { value: self.value.inv(), exact: self.exact.map(|p| -p) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exact = match (self.exact, other.exact) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Self { value: self.value * other.value, exact }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.value - other.value).norm() <= tol
    }
}
