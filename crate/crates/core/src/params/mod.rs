//! Parameters of regular semisimple classes in unitary groups, the invariants attached to them,
//! the two transfer-factor formulas and the verifier of their limiting behaviour.

mod lemma231;
mod transfer;
mod xi;

use thiserror::Error;

pub use lemma231::{
    verify_lemma_231, zeta_a, zeta_b, Lemma231Case, Lemma231Outcome, Lemma231Scenario, ScenarioGenerator, STABILIZATION_WINDOW,
};
pub use transfer::{
    transfer_factor_twisted, transfer_factor_unitary, twisted_constants, twisted_formula, unitary_constants, unitary_formula,
};
pub use xi::{
    element_e_from_json, element_e_json, w, CClass, DigitForm, GammaClass, PPower, PolynomialE, XiComponent, XiParameter,
    COLLISION_MARGIN,
};

use crate::character::CharacterError;
use crate::padic::ArithError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("parameter is not regular: {0}")]
    NotRegular(String),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("product is not Galois-stable: {0}")]
    GaloisStabilityViolation(String),
    #[error("rationality failure: {0}")]
    RationalityFailure(String),
    #[error("character restriction mismatch: {0}")]
    RestrictionMismatch(String),
    #[error("degenerate gamma: {0}")]
    DegenerateGamma(String),
    #[error("no stabilization: {0}")]
    StabilizationFailure(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}
