use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::element_f::{BaseField, ElementF};
use super::ArithError;

/// Shape data of `E = F(omega)` needed by element arithmetic: the square `D = omega^2` and the
/// ramification index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ExtShape {
    pub(crate) disc: ElementF,
    pub(crate) ram: u8,
}

/// An element `a + b*omega` of the quadratic extension.
#[derive(Clone, Copy, Debug)]
pub struct ElementE {
    a: ElementF,
    b: ElementF,
    shape: ExtShape,
}

impl ElementE {
    pub(crate) fn from_parts(a: ElementF, b: ElementF, shape: ExtShape) -> Self {
        Self { a, b, shape }
    }

    /// Rational coordinate.
    pub fn a(&self) -> ElementF {
        self.a
    }

    /// Coordinate along `omega`.
    pub fn b(&self) -> ElementF {
        self.b
    }

    pub fn base(&self) -> BaseField {
        self.a.base()
    }

    pub(crate) fn shape_copy(&self) -> ExtShape {
        self.shape
    }

    pub(crate) fn ramification_index(&self) -> u32 {
        self.shape.ram as u32
    }

    fn with(&self, a: ElementF, b: ElementF) -> Self {
        Self { a, b, shape: self.shape }
    }

    fn ram(&self) -> i64 {
        self.shape.ram as i64
    }

    /// Valuation of `omega` in the normalized valuation of `E`.
    fn omega_val(&self) -> i64 {
        if self.shape.ram == 2 {
            1
        } else {
            0
        }
    }

    pub fn conj(&self) -> Self {
        self.with(self.a, -self.b)
    }

    pub fn norm(&self) -> ElementF {
        self.a * self.a - self.shape.disc * self.b * self.b
    }

    pub fn trace(&self) -> ElementF {
        self.a + self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Lower bound for the normalized valuation of `E`.
    pub fn val_lower_bound(&self) -> i64 {
        let e = self.ram();
        let va = self.a.val_lower_bound().saturating_mul(e);
        let vb = self.b.val_lower_bound().saturating_mul(e).saturating_add(self.omega_val());
        va.min(vb)
    }

    /// Normalized valuation of `E` (`val_E(uniformizer) = 1`).
    pub fn val(&self) -> Result<i64, ArithError> {
        let e = self.ram();
        let ca = match self.a.valuation() {
            Some(v) => (Some(v * e), i64::MAX),
            None => (None, self.a.val_lower_bound().saturating_mul(e)),
        };
        let cb = match self.b.valuation() {
            Some(v) => (Some(v * e + self.omega_val()), i64::MAX),
            None => (None, self.b.val_lower_bound().saturating_mul(e).saturating_add(self.omega_val())),
        };
        let exact = match (ca.0, cb.0) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => return Err(ArithError::PrecisionExhausted("valuation of a zero element")),
        };
        if exact <= ca.1 && exact <= cb.1 {
            Ok(exact)
        } else {
            Err(ArithError::PrecisionExhausted("valuation not certified"))
        }
    }

    /// `|x|_E` as the exponent `k` with `|x|_E = p^k`.
    pub fn abs_exponent(&self) -> Result<i64, ArithError> {
        let f = if self.shape.ram == 2 { 1 } else { 2 };
        Ok(-f * self.val()?)
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let ni = n.inv()?;
        Ok(self.with(self.a * ni, -(self.b * ni)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self, ArithError> {
        let base = if n < 0 { self.inv()? } else { *self };
        let mut e = n.unsigned_abs();
        let one = self.with(self.base().one(), self.base().zero());
        let mut acc = one;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, s: ElementF) -> Self {
        self.with(self.a * s, self.b * s)
    }

    /// The element as a member of `F` when its `omega`-coordinate vanishes at working precision
    /// and is negligible relative to the rational coordinate.
    pub fn in_base_field(&self) -> Option<ElementF> {
        if !self.b.is_zero() {
            return None;
        }
        match self.a.valuation() {
            Some(v) if self.b.val_lower_bound() > v => Some(self.a),
            Some(_) => None,
            None => Some(self.a),
        }
    }

    /// Writes `x = uniformizer^v * u` with `u` a unit.
    pub fn split_uniformizer(&self) -> Result<(i64, Self), ArithError> {
        let v = self.val()?;
        Ok((v, self.shift_uniformizer(-v)))
    }

    /// Multiplies by `uniformizer^k`.
    pub fn shift_uniformizer(&self, k: i64) -> Self {
        if self.shape.ram == 1 {
            return self.with(self.a.shift(k), self.b.shift(k));
        }
        // omega^2 = D = p * w.
        let w = self.shape.disc.shift(-1);
        let half = k.div_euclid(2);
        let wpow = w.pow(half).expect("unit power");
        let mut x = self.with((self.a * wpow).shift(half), (self.b * wpow).shift(half));
        if k.rem_euclid(2) == 1 {
            // (a + b omega) * omega = b D + a omega
            x = self.with(x.b * self.shape.disc, x.a);
        }
        x
    }

    /// Digit moduli `(ka, kb)` such that a unit is determined modulo `uniformizer^m` by its
    /// coordinates modulo `p^ka` and `p^kb`.
    pub(crate) fn residue_shape(ram: u8, m: u32) -> (u32, u32) {
        if ram == 1 {
            (m, m)
        } else {
            (m.div_ceil(2), m / 2)
        }
    }

    /// Residue of an integral element modulo `uniformizer^m`, as coordinate residues.
    pub fn residue_key(&self, m: u32) -> Result<(u64, u64), ArithError> {
        let (ka, kb) = Self::residue_shape(self.shape.ram, m);
        Ok((self.a.residue(ka)?, self.b.residue(kb)?))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let d = *self - *other;
        d.is_zero()
    }

    pub fn truncate_val(&self, abs_e: i64) -> Self {
        let e = self.ram();
        let abs_a = (abs_e + e - 1).div_euclid(e);
        let abs_b = (abs_e - self.omega_val() + e - 1).div_euclid(e);
        self.with(self.a.truncate(abs_a), self.b.truncate(abs_b))
    }
}

impl PartialEq for ElementE {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Add for ElementE {
    type Output = ElementE;
    fn add(self, o: ElementE) -> ElementE {
        self.with(self.a + o.a, self.b + o.b)
    }
}

impl Sub for ElementE {
    type Output = ElementE;
    fn sub(self, o: ElementE) -> ElementE {
        self.with(self.a - o.a, self.b - o.b)
    }
}

impl Neg for ElementE {
    type Output = ElementE;
    fn neg(self) -> ElementE {
        self.with(-self.a, -self.b)
    }
}

impl Mul for ElementE {
    type Output = ElementE;
    fn mul(self, o: ElementE) -> ElementE {
        let a = self.a * o.a + self.shape.disc * self.b * o.b;
        let b = self.a * o.b + self.b * o.a;
        self.with(a, b)
    }
}

impl fmt::Display for ElementE {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}) + ({})*w", self.a, self.b)
    }
}
