//! Proportionality of `epsilon(mu)` and `sgn(-2) gamma_psi(N) S_mu(1,1)` by a positive real.

use num_complex::Complex64;
use serde::Serialize;

use super::tate::tate_epsilon;
use super::torus_integral::s_mu_11;
use super::weil::gamma_norm_form;
use super::{serialize_complex, EpsilonError, UnitComplex};
use crate::character::{AdditiveCharacter, MultiplicativeCharacter};

/// Relative size of the imaginary part tolerated in the ratio.
pub const IMAGINARY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaAOutcome {
    pub character: String,
    pub epsilon: UnitComplex,
    pub gamma: UnitComplex,
    pub sgn_minus_two: i8,
    #[serde(serialize_with = "serialize_complex")]
    pub s_value: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub ratio: Complex64,
    pub pass: bool,
}

/// `r = epsilon(mu) / (sgn(-2) gamma_psi(N) S_mu(1,1))`; passes when `r` is real and positive.
pub fn verify_lemma_a(mu: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<LemmaAOutcome, EpsilonError> {
    let field = mu.field();
    let s = s_mu_11(mu)?;
    let epsilon = tate_epsilon(mu, psi)?.value;
    let gamma = gamma_norm_form(field, psi, None)?;
    let sgn_minus_two = field.sgn(&field.base().int(-2))?;
    let denom = gamma.value() * f64::from(sgn_minus_two) * s.limit_at_s0;
    if denom.norm() < 1e-12 {
        return Err(EpsilonError::Precondition(format!("S_mu(1,1) vanishes for {}", mu.to_text())));
    }
    let ratio = epsilon.value() / denom;
    let pass = ratio.im.abs() <= IMAGINARY_TOLERANCE * ratio.norm() && ratio.re > 0.0;
    Ok(LemmaAOutcome { character: mu.to_text(), epsilon, gamma, sgn_minus_two, s_value: s.limit_at_s0, ratio, pass })
}
