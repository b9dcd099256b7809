//! The regularized integral over the norm-one torus
//! `S_mu(1,1) = 2 lim_{s->0+} int_{Ker N} mu(delta^-1 (1-x)) |1-x|_E^(s-1/2) dx`.
//!
//! The torus is parametrized by `x = (b - delta)/(b + delta)`, `b` in `F`. Then
//! `delta^-1 (1-x) = 2/(b + delta)` and `dx = C' |b + delta|_E^-1 db`, so every shell
//! `val_E(1-x) = v` is a finite character sum over residues of `b`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cyclo::{Cyclotomic, CyclotomicField};
use super::{serialize_complex, EpsilonError};
use crate::character::{FieldTag, MultiplicativeCharacter};
use crate::padic::QuadraticExtension;

/// Shells summed past the conductor before the tail must be certified.
pub const SHELL_MARGIN: i64 = 8;
/// Shells that must follow the same law before a tail is accepted.
const MIN_TAIL_SHELLS: usize = 3;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// One shell `val_E(1-x) = v` of the integral.
#[derive(Clone, Debug, Serialize)]
pub struct ShellSum {
    pub shell: i64,
    #[serde(skip)]
    pub exact: Cyclotomic,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
}

/// Behaviour of the shell coefficients beyond `tail_start`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailShape {
    /// Every further shell vanishes.
    Zero,
    /// `c_{v + step} = ratio * c_v`.
    Geometric {
        step: i64,
        #[serde(serialize_with = "serialize_ratio")]
        ratio: BigRational,
        #[serde(serialize_with = "serialize_complex")]
        leading: Complex64,
    },
}

/// `factor * sum_v c_v q_E^(-v (s + shift))` with its closed-form tail.
#[derive(Clone, Debug, Serialize)]
pub struct RegularizedValue {
    pub shells: Vec<ShellSum>,
    pub tail_start: i64,
    pub tail: TailShape,
    pub exponent_shift: f64,
    pub factor: f64,
    pub q_e: u64,
    #[serde(serialize_with = "serialize_complex")]
    pub limit_at_s0: Complex64,
}

impl RegularizedValue {
    fn x(&self, s: f64) -> f64 {
        (self.q_e as f64).powf(-(s + self.exponent_shift))
    }

    /// The analytic value at `s`; `s = 0` gives `limit_at_s0`.
    pub fn at(&self, s: f64) -> Result<Complex64, EpsilonError> {
        let x = self.x(s);
        let mut total: Complex64 = self
            .shells
            .iter()
            .filter(|c| c.shell < self.tail_start)
            .map(|c| c.value * x.powi(c.shell as i32))
            .sum();
        if let TailShape::Geometric { step, ratio, leading } = &self.tail {
            let rx = ratio.to_f64().unwrap_or(f64::NAN) * x.powi(*step as i32);
            if rx.abs() > 1.0 + 1e-12 || (rx - 1.0).abs() < 1e-12 {
                return Err(EpsilonError::TailNotResolved(format!("tail ratio {rx} at s = {s}")));
            }
            total += leading * x.powi(self.tail_start as i32) / (1.0 - rx);
        }
        Ok(total * self.factor)
    }

    /// Sum of the shells below `depth`, without tail; the truncated integral at `s`.
    pub fn partial_sum(&self, s: f64, depth: i64) -> Complex64 {
        let x = self.x(s);
        let sum: Complex64 = self.shells.iter().filter(|c| c.shell < depth).map(|c| c.value * x.powi(c.shell as i32)).sum();
        sum * self.factor
    }
}

/// Shell coefficients `c_v = int_{val_E(1-x) = v} mu(delta^-1 (1-x)) dx` for `v <= max_shell`,
/// exact in `Q(zeta_n)`, `n` the order of `mu`.
pub fn torus_shell_integral(mu: &MultiplicativeCharacter, max_shell: i64) -> Result<BTreeMap<i64, Cyclotomic>, EpsilonError> {
    if mu.tag() != FieldTag::E {
        return Err(EpsilonError::Precondition("character of E^x expected".into()));
    }
    let field = mu.field();
    let base = field.base();
    let p = field.p() as i64;
    let e = field.ramification() as i64;
    let val_delta = field.omega_valuation();
    let a = mu.conductor() as i64;
    // b in p^w0 Z_p is the shell v = 0
    let w0 = val_delta;
    let c_prime = if field.is_ramified() { ratio(1, 2) } else { ratio(p, p + 1) };
    let cyclo = CyclotomicField::new(mu.order());
    let mu_two = mu.eval_f(&base.int(2))?;
    let value_at = |b: i64, shift: i64| -> Result<_, EpsilonError> {
        let z = field.elem(base.int(b).shift(shift), base.one());
        Ok(mu_two - mu.eval_e(&z)?)
    };

    let mut shells = BTreeMap::new();
    let r0 = w0.max((a + val_delta + e - 1) / e);
    let q_delta = (field.q_e() as i64).pow(val_delta as u32);
    let weight = &c_prime * ratio(q_delta, p.pow(r0 as u32));
    let mut inner = cyclo.zero();
    let stride = p.pow(w0 as u32) as usize;
    for b in (0..p.pow(r0 as u32)).step_by(stride) {
        inner.add_root(value_at(b, 0)?, &weight);
    }
    shells.insert(0, inner);

    let r = ((a + e - 1) / e).max(1);
    let modulus = p.pow(r as u32);
    let mut w = w0 - 1;
    loop {
        let v = val_delta - e * w;
        if v > max_shell {
            break;
        }
        let weight = &c_prime * ratio(1, p.pow((r - w) as u32));
        let mut shell = cyclo.zero();
        for t in (1..modulus).filter(|t| t % p != 0) {
            shell.add_root(value_at(t, w)?, &weight);
        }
        shells.insert(v, shell);
        w -= 1;
    }
    Ok(shells)
}

/// Finds the longest run of final shells that is identically zero or geometric.
fn certify_tail(shells: &BTreeMap<i64, Cyclotomic>) -> Result<(i64, TailShape), EpsilonError> {
    let tail: Vec<(&i64, &Cyclotomic)> = shells.iter().filter(|(&v, _)| v >= 1).collect();
    if tail.len() < MIN_TAIL_SHELLS {
        return Err(EpsilonError::TailNotResolved("too few shells".into()));
    }
    let n = tail.len();
    if tail[n - 1].1.is_zero() {
        let mut start = n - 1;
        while start > 0 && tail[start - 1].1.is_zero() {
            start -= 1;
        }
        if n - start >= MIN_TAIL_SHELLS {
            return Ok((*tail[start].0, TailShape::Zero));
        }
        return Err(EpsilonError::TailNotResolved("vanishing run too short".into()));
    }
    let step = tail[n - 1].0 - tail[n - 2].0;
    let r = tail[n - 2]
        .1
        .rational_ratio(tail[n - 1].1)
        .ok_or_else(|| EpsilonError::TailNotResolved("last shells not proportional".into()))?;
    let mut start = n - 2;
    while start > 0
        && tail[start].0 - tail[start - 1].0 == step
        && tail[start - 1].1.rational_ratio(tail[start].1).as_ref() == Some(&r)
    {
        start -= 1;
    }
    if n - start < MIN_TAIL_SHELLS || r.is_zero() {
        return Err(EpsilonError::TailNotResolved("geometric run too short".into()));
    }
    let leading = tail[start].1.to_complex();
    Ok((*tail[start].0, TailShape::Geometric { step, ratio: r, leading }))
}

fn regularize(
    mu: &MultiplicativeCharacter,
    max_shell: i64,
    exponent_shift: f64,
    factor: f64,
) -> Result<RegularizedValue, EpsilonError> {
    let coeffs = torus_shell_integral(mu, max_shell)?;
    let (tail_start, tail) = certify_tail(&coeffs)?;
    let shells = coeffs
        .into_iter()
        .map(|(shell, exact)| ShellSum { shell, value: exact.to_complex(), exact })
        .collect();
    let mut out = RegularizedValue {
        shells,
        tail_start,
        tail,
        exponent_shift,
        factor,
        q_e: mu.field().q_e(),
        limit_at_s0: Complex64::new(0.0, 0.0),
    };
    out.limit_at_s0 = out.at(0.0)?;
    Ok(out)
}

/// `S_mu(1,1)` for `mu` with `mu|F^x = sgn_{E/F}`.
pub fn s_mu_11(mu: &MultiplicativeCharacter) -> Result<RegularizedValue, EpsilonError> {
    s_mu_11_with_margin(mu, SHELL_MARGIN)
}

/// `S_mu(1,1)` with shells summed up to `a(mu) + margin`.
pub fn s_mu_11_with_margin(mu: &MultiplicativeCharacter, margin: i64) -> Result<RegularizedValue, EpsilonError> {
    if mu.tag() != FieldTag::E {
        return Err(EpsilonError::Precondition("character of E^x expected".into()));
    }
    let sgn = MultiplicativeCharacter::sgn(mu.field().clone());
    if mu.restrict_to_f()? != sgn {
        return Err(EpsilonError::Precondition(format!("{} does not restrict to sgn_E/F", mu.to_text())));
    }
    regularize(mu, mu.conductor() as i64 + margin, -0.5, 2.0)
}

/// Total mass of `Ker N` computed shell by shell; `1` when the measure bookkeeping is right.
pub fn torus_mass(field: &Arc<QuadraticExtension>) -> Result<RegularizedValue, EpsilonError> {
    let trivial = MultiplicativeCharacter::trivial(field.clone(), FieldTag::E);
    regularize(&trivial, SHELL_MARGIN, 0.0, 1.0)
}

/// Exact total mass as a rational: shells plus the geometric tail at `s = 0`.
pub fn torus_mass_exact(field: &Arc<QuadraticExtension>) -> Result<BigRational, EpsilonError> {
    let value = torus_mass(field)?;
    let mut total = BigRational::zero();
    let one = Cyclotomic::unit(CyclotomicField::new(1));
    for c in value.shells.iter().filter(|c| c.shell < value.tail_start) {
        total += one.rational_ratio(&c.exact).unwrap_or_else(BigRational::zero);
    }
    if let TailShape::Geometric { ratio, .. } = &value.tail {
        let lead = value.shells.iter().find(|c| c.shell == value.tail_start).expect("tail start is a shell");
        let lead = one.rational_ratio(&lead.exact).unwrap_or_else(BigRational::zero);
        if ratio.abs() >= BigRational::one() {
            return Err(EpsilonError::TailNotResolved("mass tail diverges".into()));
        }
        total += lead / (BigRational::one() - ratio);
    }
    Ok(total)
}
