//! Weil constants of quadratic forms over `F` via lattice Gauss integrals.

use std::fmt;

use num_complex::Complex64;

use super::{EpsilonError, UnitComplex};
use crate::character::{AdditiveCharacter, Phase};
use crate::padic::{ArithError, BaseField, ElementF, QuadraticExtension};

/// Largest residue sum accepted in a single coordinate.
const MAX_TERMS: u64 = 5_000_000;
/// How far past the first stable lattice scale `weil_constant` searches.
const STABILIZATION_WINDOW: i64 = 6;

/// The diagonal form `sum a_i x_i^2` on `F^n`.
#[derive(Clone, Debug)]
pub struct QuadraticFormF {
    coeffs: Vec<ElementF>,
}

impl QuadraticFormF {
    pub fn new(coeffs: Vec<ElementF>) -> Result<Self, EpsilonError> {
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(EpsilonError::Precondition("degenerate quadratic form".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_integers(base: BaseField, coeffs: &[i64]) -> Result<Self, EpsilonError> {
        Self::new(coeffs.iter().map(|&c| base.int(c)).collect())
    }

    /// `<1, -1>`.
    pub fn hyperbolic_plane(base: BaseField) -> Self {
        Self { coeffs: vec![base.one(), -base.one()] }
    }

    /// The norm form `x -> N(x)` of `E/F` on the basis `1, omega`, i.e. `<1, -D>`.
    pub fn norm_form(field: &QuadraticExtension) -> Self {
        Self { coeffs: vec![field.base().one(), -field.disc()] }
    }

    pub fn coeffs(&self) -> &[ElementF] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().chain(&other.coeffs).copied().collect() }
    }

    pub fn negate(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn scale(&self, lambda: ElementF) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * lambda).collect() }
    }
}

impl fmt::Display for QuadraticFormF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c.valuation().unwrap_or(0);
                let u = c.shift(-v).centered_residue(3).unwrap_or(0);
                format!("{}*p^{}", u, v)
            })
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// `int_{p^-k Z_p} psi(a x^2 / 2) dx` with `dx` giving `Z_p` volume one.
fn coordinate_integral(k: i64, a: &ElementF, psi: &AdditiveCharacter) -> Result<Complex64, EpsilonError> {
    let base = a.base();
    let p = base.prime();
    let va = a.val()?;
    let vl = psi.scale().val()?;
    let depth = (2 * k - vl - va).max(0);
    let terms = p.checked_pow(depth as u32).filter(|&t| t <= MAX_TERMS).ok_or(EpsilonError::Arith(
        ArithError::PrecisionExhausted("lattice too large for the residue sum"),
    ))?;
    let coef = (*a * base.p_power(-2 * k)).checked_div(&base.int(2))?;
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 0..terms {
        let tt = base.int(t as i64) * base.int(t as i64);
        sum += psi.eval(&(coef * tt))?.to_complex();
    }
    let vol = (p as f64).powi(k as i32) / terms as f64;
    Ok(sum * vol)
}

/// `I_psi(L, q)` for `L = p^-k Z_p^n` and the diagonal form `q`.
pub fn weil_lattice_integral(k: i64, q: &QuadraticFormF, psi: &AdditiveCharacter) -> Result<Complex64, EpsilonError> {
    if k.unsigned_abs() > psi.field().precision() as u64 {
        return Err(EpsilonError::Arith(ArithError::PrecisionExhausted("lattice scale beyond working precision")));
    }
    let mut total = Complex64::new(1.0, 0.0);
    for a in q.coeffs() {
        total *= coordinate_integral(k, a, psi)?;
    }
    Ok(total)
}

/// First lattice scale at which every coordinate integral is in its stable range.
fn stable_scale(q: &QuadraticFormF, psi: &AdditiveCharacter) -> Result<i64, EpsilonError> {
    let vl = psi.scale().val()?;
    let mut k = 0i64;
    for a in q.coeffs() {
        let need = (vl + a.val()? + 2).div_euclid(2);
        k = k.max(need);
    }
    Ok(k)
}

/// `gamma_psi(q)`: the phase of `I_psi(L, q)` for large `L`, required to agree at two
/// consecutive lattice scales.
pub fn weil_constant(q: &QuadraticFormF, psi: &AdditiveCharacter) -> Result<UnitComplex, EpsilonError> {
    let tol = 1e-9;
    let k0 = stable_scale(q, psi)?;
    let mut prev = weil_lattice_integral(k0, q, psi)?;
    for k in k0 + 1..=k0 + STABILIZATION_WINDOW {
        let cur = weil_lattice_integral(k, q, psi)?;
        let (a, b) = (prev / prev.norm(), cur / cur.norm());
        if prev.norm() > 1e-12 && (a - b).norm() <= tol {
            let exact = Phase::round_complex(b, 8, 1e-8);
            return UnitComplex::new(b, exact);
        }
        prev = cur;
    }
    Err(EpsilonError::NoStabilization(format!("Weil constant of {q} did not stabilize")))
}

/// `gamma_psi(lambda N_{E/F})`.
pub fn gamma_norm_form(field: &QuadraticExtension, psi: &AdditiveCharacter, lambda: Option<ElementF>) -> Result<UnitComplex, EpsilonError> {
    let q = QuadraticFormF::norm_form(field);
    let q = match lambda {
        Some(l) => q.scale(l),
        None => q,
    };
    weil_constant(&q, psi)
}
