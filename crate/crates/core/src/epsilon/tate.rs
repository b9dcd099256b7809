//! Tate local factors of characters of `E^x`: L-factors, zeta integrals and epsilon factors
//! computed both as Gauss sums and through the local functional equation.

use num_complex::Complex64;
use serde::Serialize;

use super::{serialize_complex, EpsilonError, UnitComplex};
use crate::character::{AdditiveCharacter, AdditiveCharacterE, FieldTag, MultiplicativeCharacter};
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// Agreement required between the two epsilon computations.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-8;

fn require_e(mu: &MultiplicativeCharacter) -> Result<(), EpsilonError> {
    if mu.tag() != FieldTag::E {
        return Err(EpsilonError::Precondition("character of E^x expected".into()));
    }
    Ok(())
}

fn q_e(field: &QuadraticExtension) -> f64 {
    field.q_e() as f64
}

/// `L(mu, s)`: `(1 - mu(uniformizer) q_E^-s)^-1` for unramified `mu`, `1` otherwise.
pub fn l_factor(mu: &MultiplicativeCharacter, s: f64) -> Result<Complex64, EpsilonError> {
    require_e(mu)?;
    if mu.conductor() > 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let z = mu.uniformizer_phase().to_complex() * q_e(mu.field()).powf(-s);
    let d = Complex64::new(1.0, 0.0) - z;
    if d.norm() < 1e-14 {
        return Err(EpsilonError::Pole(format!("{s}")));
    }
    Ok(d.inv())
}

/// Test functions for which `zeta_integral` is a finite sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// Indicator of `{a + b delta : val(a - 1) >= N, val(b) >= N'}`.
    PhiNN { n: i64, n_prime: i64 },
    /// Indicator of `uniformizer^radius O_E`.
    Ball { radius: i64 },
    /// Indicator of `uniformizer^val O_E^x`.
    Annulus { val: i64 },
}

/// Smallest `r` with `uniformizer^r O_E` inside `{val(a) >= alpha, val(b) >= beta}`.
fn box_resolution(field: &QuadraticExtension, alpha: i64, beta: i64) -> i64 {
    if field.is_ramified() {
        (2 * alpha - 1).max(2 * beta)
    } else {
        alpha.max(beta)
    }
}

fn coordinate_at_least(x: &ElementF, bound: i64) -> bool {
    x.valuation().is_none_or(|v| v >= bound)
}

/// `int_{uniformizer^v O^x} mu(z) |z|^(s-1) dz` by summing over cosets of the conductor layer.
fn annulus_integral(mu: &MultiplicativeCharacter, v: i64, s: f64) -> Result<Complex64, EpsilonError> {
    let field = mu.field();
    let q = q_e(field);
    let m = mu.conductor().max(1);
    let mut sum = Complex64::new(0.0, 0.0);
    for u in field.unit_representatives(m)? {
        let z = u.shift_uniformizer(v);
        sum += mu.eval_e(&z)?.to_complex();
    }
    let vol = q.powf(-(v as f64) - m as f64);
    Ok(sum * vol * q.powf(-(v as f64) * (s - 1.0)))
}

/// `zeta(Phi, mu, s) = int_E Phi(z) mu(z) |z|_E^(s-1) dz`, `dz` giving `O_F + delta O_F` mass one.
pub fn zeta_integral(phi: TestFunction, mu: &MultiplicativeCharacter, s: f64) -> Result<Complex64, EpsilonError> {
    require_e(mu)?;
    if s <= 0.0 {
        return Err(EpsilonError::Precondition("zeta integral needs Re(s) > 0".into()));
    }
    let field = mu.field();
    let q = q_e(field);
    match phi {
        TestFunction::PhiNN { n, n_prime } => {
            if n < 1 || n_prime < 1 {
                return Err(EpsilonError::UnsupportedTestFunction("Phi_{N,N'} needs N, N' >= 1".into()));
            }
            let a = mu.conductor() as i64;
            let r = a.max(box_resolution(field, n, n_prime));
            let (ka, kb) = ElementE::residue_shape(field.ramification() as u8, r as u32);
            let base = field.base();
            let p = field.p() as i64;
            let steps_a = p.pow((ka as i64 - n).max(0) as u32);
            let steps_b = p.pow((kb as i64 - n_prime).max(0) as u32);
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..steps_a {
                for j in 0..steps_b {
                    let z = field.elem(base.one() + base.int(i).shift(n), base.int(j).shift(n_prime));
                    sum += mu.eval_e(&z)?.to_complex();
                }
            }
            Ok(sum * q.powf(-(r as f64)))
        }
        TestFunction::Annulus { val } => annulus_integral(mu, val, s),
        TestFunction::Ball { radius } => {
            if mu.conductor() > 0 {
                // every annulus integrates a nontrivial unit character to zero
                let first = annulus_integral(mu, radius, s)?;
                if first.norm() > 1e-12 {
                    return Err(EpsilonError::UnsupportedTestFunction("annulus sum did not cancel".into()));
                }
                return Ok(Complex64::new(0.0, 0.0));
            }
            let y = mu.uniformizer_phase().to_complex() * q.powf(-s);
            Ok((1.0 - 1.0 / q) * y.powi(radius as i32) / (1.0 - y))
        }
    }
}

/// `C` with `dz' = C dz`, where `dz'` is self-dual for `psi'`. Measured from the orthogonal
/// lattice `O_E^perp = uniformizer^n' O_E`: `C = (vol(O_E) vol(O_E^perp))^(-1/2)`.
pub fn self_dual_constant(psi_e: &AdditiveCharacterE) -> Result<f64, EpsilonError> {
    let field = psi_e.base_character().field();
    let n_prime = psi_e.conductor()?;
    let vol_o = 1.0;
    let vol_perp = q_e(field).powf(-(n_prime as f64));
    Ok((vol_o * vol_perp).powf(-0.5))
}

/// `epsilon(1/2, mu, psi')` as the normalized Gauss sum
/// `q^(-a/2) sum_{y in uniformizer^(n'-a) O^x / U^a} mu^-1(y) psi'(y)`.
pub fn epsilon_gauss_sum(mu: &MultiplicativeCharacter, psi_e: &AdditiveCharacterE) -> Result<Complex64, EpsilonError> {
    require_e(mu)?;
    let field = mu.field();
    let a = mu.conductor();
    let n_prime = psi_e.conductor()?;
    let mut sum = Complex64::new(0.0, 0.0);
    for u in field.unit_representatives(a)? {
        let y = u.shift_uniformizer(n_prime - a as i64);
        sum += (psi_e.eval(&y)? - mu.eval_e(&y)?).to_complex();
    }
    Ok(sum * q_e(field).powf(-(a as f64) / 2.0))
}

/// `epsilon(1/2, mu, psi_E^delta)` extracted from the functional equation applied to
/// `Phi_{N,N'}`, whose Fourier transform is `C q_F^(-N-N') psi(2 delta^2 b)` on a box.
pub fn epsilon_functional_equation(mu: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<Complex64, EpsilonError> {
    require_e(mu)?;
    let field = mu.field();
    let e = field.ramification() as i64;
    let q = q_e(field);
    let a = mu.conductor() as i64;
    let n_big = ((a + e - 1) / e).max(1);
    let two_d = field.disc() * field.base().int(2);
    let n0 = psi.conductor() - two_d.val()?;
    let (alpha0, beta0) = (n0 - n_big, n0 - n_big);
    let val_delta = field.omega_valuation();

    let j_min = (e * alpha0).min(e * beta0 + val_delta);
    let r_box = box_resolution(field, alpha0, beta0);
    let j_psi = e * n0;
    let j_inner = j_psi.max(r_box).max(j_min);

    let mut integral = Complex64::new(0.0, 0.0);
    for j in j_min..j_inner {
        let r_j = (j + a.max(1)).max(j_psi).max(r_box);
        let cell = q.powf(j as f64 / 2.0 - r_j as f64);
        for u in field.unit_representatives((r_j - j) as u32)? {
            let z = u.shift_uniformizer(j);
            if !(coordinate_at_least(&z.a(), alpha0) && coordinate_at_least(&z.b(), beta0)) {
                continue;
            }
            let phase = psi.eval(&(two_d * z.b()))? - mu.eval_e(&z)?;
            integral += phase.to_complex() * cell;
        }
    }
    if a == 0 {
        let x = (-mu.uniformizer_phase()).to_complex() * q.powf(-0.5);
        integral += (1.0 - 1.0 / q) * x.powi(j_inner as i32) / (1.0 - x);
    }

    let c = self_dual_constant(&psi.on_e_delta())?;
    let ratio = l_factor(mu, 0.5)? / l_factor(&mu.inverse(), 0.5)?;
    Ok(integral * c * ratio)
}

/// Both epsilon computations and the agreed value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EpsilonValue {
    #[serde(serialize_with = "serialize_complex")]
    pub gauss: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub functional: Complex64,
    pub value: UnitComplex,
}

/// `epsilon(mu) = epsilon(1/2, mu, psi_E^delta)`, cross-checked between the two routes.
pub fn tate_epsilon(mu: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<EpsilonValue, EpsilonError> {
    let gauss = epsilon_gauss_sum(mu, &psi.on_e_delta())?;
    let functional = epsilon_functional_equation(mu, psi)?;
    if (gauss - functional).norm() > CROSS_CHECK_TOLERANCE {
        return Err(EpsilonError::CrossCheckFailure { gauss: format!("{gauss:.10}"), functional: format!("{functional:.10}") });
    }
    let value = UnitComplex::new(gauss, None)?;
    Ok(EpsilonValue { gauss, functional, value })
}

/// `epsilon(mu x mu') = epsilon(mu mu')`.
pub fn epsilon_pair(mu: &MultiplicativeCharacter, mu_prime: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<EpsilonValue, EpsilonError> {
    tate_epsilon(&mu.try_mul(mu_prime)?, psi)
}

/// `epsilon_nu1(mu, mu') = mu(nu1) mu'(-nu1) epsilon(mu mu')`.
pub fn epsilon_nu1(
    mu: &MultiplicativeCharacter,
    mu_prime: &MultiplicativeCharacter,
    nu1: &ElementF,
    psi: &AdditiveCharacter,
) -> Result<Complex64, EpsilonError> {
    let eps = epsilon_pair(mu, mu_prime, psi)?;
    let twist = mu.eval_f(nu1)? + mu_prime.eval_f(&-*nu1)?;
    Ok(twist.to_complex() * eps.value.value())
}
