use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::modular::{modinv, mulmod, ppow, valuation_of_u64};
use super::ArithError;

/// Absolute precision of an exact zero.
pub(crate) const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Repr {
    /// Zero known modulo `p^abs`.
    Zero { abs: i64 },
    /// `p^val * unit` with `unit` known modulo `p^rel`.
    Nonzero { val: i64, unit: u64, rel: u32 },
}

/// The ambient prime and the relative precision cap shared by all elements of one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseField {
    p: u64,
    cap: u32,
}

impl BaseField {
    pub(crate) fn new_unchecked(p: u64, cap: u32) -> Self {
        Self { p, cap }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.cap
    }

    pub fn zero(&self) -> ElementF {
        ElementF { field: *self, repr: Repr::Zero { abs: EXACT } }
    }

    pub fn one(&self) -> ElementF {
        self.int(1)
    }

    /// Embeds an integer.
    pub fn int(&self, n: i64) -> ElementF {
        if n == 0 {
            return self.zero();
        }
        let (v, mut rest) = strip_p(n.unsigned_abs(), self.p);
        let m = ppow(self.p, self.cap);
        rest %= m;
        let unit = if n < 0 { (m - rest) % m } else { rest };
        ElementF { field: *self, repr: Repr::Nonzero { val: v as i64, unit, rel: self.cap } }
    }

    /// Embeds the rational number `num / den`.
    pub fn rational(&self, num: i64, den: i64) -> Result<ElementF, ArithError> {
        self.int(num).checked_div(&self.int(den))
    }

    /// `p^k`.
    pub fn p_power(&self, k: i64) -> ElementF {
        ElementF { field: *self, repr: Repr::Nonzero { val: k, unit: 1, rel: self.cap } }
    }

    /// `p^val * (d_0 + d_1 p + ...)`, digits in `0..p`; the digits after the last one are
    /// taken to be zero up to the precision cap.
    pub fn from_digits(&self, val: i64, digits: &[u64]) -> Result<ElementF, ArithError> {
        let mut acc: u64 = 0;
        let m = ppow(self.p, self.cap);
        let mut pk: u64 = 1;
        for (i, &d) in digits.iter().enumerate() {
            if d >= self.p {
                return Err(ArithError::Domain(format!("digit {d} is not below p = {}", self.p)));
            }
            if i as u32 >= self.cap {
                break;
            }
            acc = (acc + mulmod(d, pk, m)) % m;
            pk = pk.wrapping_mul(self.p);
        }
        if acc == 0 {
            return Ok(self.zero());
        }
        let (t, rest) = strip_p(acc, self.p);
        Ok(ElementF {
            field: *self,
            repr: Repr::Nonzero { val: val + t as i64, unit: rest, rel: self.cap - t },
        })
    }

    /// An inexact zero `O(p^abs)`.
    pub fn big_o(&self, abs: i64) -> ElementF {
        ElementF { field: *self, repr: Repr::Zero { abs } }
    }

    /// Builds an element from a residue `r` modulo `p^k` (interpreted as an integer in `0..p^k`),
    /// known exactly only modulo `p^k`.
    pub fn from_residue(&self, r: u64, k: u32) -> ElementF {
        let k = min(k, self.cap);
        if r.is_multiple_of(ppow(self.p, k)) {
            return self.big_o(k as i64);
        }
        let (t, rest) = strip_p(r, self.p);
        let rel = k - t;
        ElementF {
            field: *self,
            repr: Repr::Nonzero { val: t as i64, unit: rest % ppow(self.p, rel), rel },
        }
    }
}

fn strip_p(mut n: u64, p: u64) -> (u32, u64) {
    let mut v = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// An element of `Q_p` in capped relative precision.
#[derive(Clone, Copy, Debug)]
pub struct ElementF {
    field: BaseField,
    pub(crate) repr: Repr,
}

impl ElementF {
    pub fn base(&self) -> BaseField {
        self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.p
    }

    /// True for exact and inexact zeros.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// The valuation, or `None` for a zero (exact or not).
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { val, .. } => Some(val),
        }
    }

    /// Valuation of a nonzero element, failing on zeros.
    pub fn val(&self) -> Result<i64, ArithError> {
        self.valuation().ok_or(ArithError::PrecisionExhausted("valuation of a zero element"))
    }

    /// Lower bound on the valuation (the absolute precision for zeros).
    pub fn val_lower_bound(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Nonzero { val, .. } => val,
        }
    }

    /// Exponent `n` such that the element is known modulo `p^n`.
    pub fn abs_precision(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Nonzero { val, rel, .. } => val + rel as i64,
        }
    }

    pub fn relative_precision(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { rel, .. } => rel,
        }
    }

    /// The unit part modulo `p^digits`.
    pub fn unit_residue(&self, digits: u32) -> Result<u64, ArithError> {
        match self.repr {
            Repr::Zero { .. } => Err(ArithError::PrecisionExhausted("unit part of a zero element")),
            Repr::Nonzero { unit, rel, .. } => {
                if rel < digits {
                    Err(ArithError::PrecisionExhausted("unit part needs more digits"))
                } else {
                    Ok(unit % ppow(self.field.p, digits))
                }
            }
        }
    }

    /// For an element of non-negative valuation, its class modulo `p^k` as an integer in `0..p^k`.
    pub fn residue(&self, k: u32) -> Result<u64, ArithError> {
        if k == 0 {
            return Ok(0);
        }
        let p = self.field.p;
        match self.repr {
            Repr::Zero { abs } => {
                if abs >= k as i64 {
                    Ok(0)
                } else {
                    Err(ArithError::PrecisionExhausted("residue of an imprecise zero"))
                }
            }
            Repr::Nonzero { val, unit, rel } => {
                if val < 0 {
                    return Err(ArithError::Domain("residue of a non-integral element".into()));
                }
                if val >= k as i64 {
                    return Ok(0);
                }
                if val + rel as i64 >= k as i64 {
                    let m = ppow(p, k);
                    Ok(mulmod(unit % m, ppow(p, val as u32), m))
                } else {
                    Err(ArithError::PrecisionExhausted("residue needs more digits"))
                }
            }
        }
    }

    /// The base-`p` digits of the unit part (least significant first).
    pub fn digits(&self) -> Vec<u64> {
        match self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Nonzero { unit, rel, .. } => {
                let mut u = unit;
                (0..rel)
                    .map(|_| {
                        let d = u % self.field.p;
                        u /= self.field.p;
                        d
                    })
                    .collect()
            }
        }
    }

    /// `|x|_F` as the exponent `e` with `|x| = p^e`; `None` for zero.
    pub fn abs_exponent(&self) -> Option<i64> {
        self.valuation().map(|v| -v)
    }

    pub fn inv(&self) -> Result<ElementF, ArithError> {
        match self.repr {
            Repr::Zero { .. } => Err(ArithError::DivisionByZero),
            Repr::Nonzero { val, unit, rel } => {
                let m = ppow(self.field.p, rel);
                let u = modinv(unit, m).expect("unit part is invertible");
                Ok(ElementF { field: self.field, repr: Repr::Nonzero { val: -val, unit: u, rel } })
            }
        }
    }

    pub fn checked_div(&self, other: &ElementF) -> Result<ElementF, ArithError> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<ElementF, ArithError> {
        let base = if n < 0 { self.inv()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = self.field.one();
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

    /// Multiplies by `p^k` without touching the unit part.
    pub fn shift(&self, k: i64) -> ElementF {
        let repr = match self.repr {
            Repr::Zero { abs } => Repr::Zero { abs: if abs >= EXACT { EXACT } else { abs + k } },
            Repr::Nonzero { val, unit, rel } => Repr::Nonzero { val: val + k, unit, rel },
        };
        ElementF { field: self.field, repr }
    }

    /// Reduces the absolute precision to at most `p^abs`.
    pub fn truncate(&self, abs: i64) -> ElementF {
        match self.repr {
            Repr::Zero { abs: a } => self.field.big_o(min(a, abs)),
            Repr::Nonzero { val, unit, rel } => {
                if abs <= val {
                    self.field.big_o(abs)
                } else {
                    let r = min(rel as i64, abs - val) as u32;
                    ElementF {
                        field: self.field,
                        repr: Repr::Nonzero { val, unit: unit % ppow(self.field.p, r), rel: r },
                    }
                }
            }
        }
    }

    /// Legendre symbol of the leading digit: `+1` if the unit part is a square mod p.
    pub fn unit_is_square(&self) -> Result<bool, ArithError> {
        let u = self.unit_residue(1)?;
        let p = self.field.p;
        Ok(super::modular::powmod(u, (p - 1) / 2, p) == 1)
    }

    /// Equality at the precision available in both operands.
    pub fn approx_eq(&self, other: &ElementF) -> bool {
        (*self - *other).is_zero()
    }

    /// Nearest integer representative of a `p`-integral element modulo `p^k`, as a signed value
    /// in `(-p^k/2, p^k/2]`.
    pub fn centered_residue(&self, k: u32) -> Result<i64, ArithError> {
        let r = self.residue(k)?;
        let m = ppow(self.field.p, k);
        Ok(if r > m / 2 { r as i64 - m as i64 } else { r as i64 })
    }
}

impl PartialEq for ElementF {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Add for ElementF {
    type Output = ElementF;
    fn add(self, o: ElementF) -> ElementF {
        debug_assert_eq!(self.field, o.field);
        let f = self.field;
        match (self.repr, o.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => f.big_o(min(a, b)),
            (Repr::Zero { abs }, Repr::Nonzero { .. }) => o.truncate(abs),
            (Repr::Nonzero { .. }, Repr::Zero { abs }) => self.truncate(abs),
            (
                Repr::Nonzero { val: xv, unit: xu, rel: xr },
                Repr::Nonzero { val: yv, unit: yu, rel: yr },
            ) => {
                let abs = min(xv + xr as i64, yv + yr as i64);
                let v = min(xv, yv);
                let n = (abs - v) as u32;
                let m = ppow(f.p, n);
                let lift = |u: u64, w: i64| -> u64 {
                    let sh = (w - v) as u32;
                    if sh >= n {
                        0
                    } else {
                        mulmod(u % m, ppow(f.p, sh), m)
                    }
                };
                let s = (lift(xu, xv) + lift(yu, yv)) % m;
                if s == 0 {
                    return f.big_o(abs);
                }
                let t = valuation_of_u64(s, f.p);
                let rel = n - t;
                let unit = (s / ppow(f.p, t)) % ppow(f.p, rel);
                ElementF { field: f, repr: Repr::Nonzero { val: v + t as i64, unit, rel } }
            }
        }
    }
}

impl Neg for ElementF {
    type Output = ElementF;
    fn neg(self) -> ElementF {
        match self.repr {
            Repr::Zero { .. } => self,
            Repr::Nonzero { val, unit, rel } => {
                let m = ppow(self.field.p, rel);
                ElementF { field: self.field, repr: Repr::Nonzero { val, unit: (m - unit) % m, rel } }
            }
        }
    }
}

impl Sub for ElementF {
    type Output = ElementF;
    fn sub(self, o: ElementF) -> ElementF {
        self + (-o)
    }
}

impl Mul for ElementF {
    type Output = ElementF;
    fn mul(self, o: ElementF) -> ElementF {
        debug_assert_eq!(self.field, o.field);
        let f = self.field;
        let sat = |a: i64, b: i64| if a >= EXACT || b >= EXACT { EXACT } else { a + b };
        match (self.repr, o.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => f.big_o(sat(a, b)),
            (Repr::Zero { abs }, Repr::Nonzero { val, .. }) | (Repr::Nonzero { val, .. }, Repr::Zero { abs }) => {
                f.big_o(sat(abs, val))
            }
            (
                Repr::Nonzero { val: xv, unit: xu, rel: xr },
                Repr::Nonzero { val: yv, unit: yu, rel: yr },
            ) => {
                let rel = min(xr, yr);
                let m = ppow(f.p, rel);
                ElementF {
                    field: f,
                    repr: Repr::Nonzero { val: xv + yv, unit: mulmod(xu % m, yu % m, m), rel },
                }
            }
        }
    }
}

impl fmt::Display for ElementF {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs } if abs >= EXACT => write!(out, "0"),
            Repr::Zero { abs } => write!(out, "O({}^{})", self.field.p, abs),
            Repr::Nonzero { val, rel, .. } => {
                let digits = self.digits();
                let shown: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                write!(out, "{}^{}*[{}] + O({}^{})", self.field.p, val, shown.join(" "), self.field.p, val + rel as i64)
            }
        }
    }
}
