use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A root of unity `exp(2 pi i * t)` stored as the exact rational `t` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub const ZERO: Phase = Phase(Ratio::new_raw(0, 1));
    pub const HALF: Phase = Phase(Ratio::new_raw(1, 2));

    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase with zero denominator");
        Phase::from_ratio(Ratio::new(num, den))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Phase {
        let den = *r.denom();
        let num = r.numer().mod_floor(&den);
        Phase(Ratio::new(num, den))
    }

    /// `+1 -> 0`, `-1 -> 1/2`.
    pub fn from_sign(s: i8) -> Phase {
        if s < 0 {
            Phase::HALF
        } else {
            Phase::ZERO
        }
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        self.denom() as u64
    }

    pub fn times(&self, k: i64) -> Phase {
        let den = self.denom();
        let num = ((self.numer() as i128 * k as i128).rem_euclid(den as i128)) as i64;
        Phase(Ratio::new(num, den))
    }

    /// The sign `+1`/`-1` when the phase is `0` or `1/2`.
    pub fn as_sign(&self) -> Option<i8> {
        if self.is_zero() {
            Some(1)
        } else if *self == Phase::HALF {
            Some(-1)
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = std::f64::consts::TAU * (self.numer() as f64 / self.denom() as f64);
        Complex64::new(t.cos(), t.sin())
    }

    /// Nearest phase with denominator `den` to the argument of `z`, if within `tol` radians.
    pub fn round_complex(z: Complex64, den: i64, tol: f64) -> Option<Phase> {
        let t = z.arg() / std::f64::consts::TAU;
        let k = (t * den as f64).round();
        if (t * den as f64 - k).abs() * std::f64::consts::TAU / den as f64 > tol {
            return None;
        }
        Some(Phase::new(k as i64, den))
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase::from_ratio(self.0 + o.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, o: Phase) {
        *self = *self + o;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        Phase::from_ratio(self.0 - o.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_ratio(-self.0)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("cannot parse phase '{0}'")]
pub struct PhaseParseError(pub String);

impl FromStr for Phase {
    type Err = PhaseParseError;
    fn from_str(s: &str) -> Result<Phase, PhaseParseError> {
        let err = || PhaseParseError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(|n| Phase::new(n, 1)).map_err(|_| err()),
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| err())?;
                let d: i64 = d.trim().parse().map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                Ok(Phase::new(n, d))
            }
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Phase, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_mod_one() {
        assert_eq!(Phase::new(5, 4), Phase::new(1, 4));
        assert_eq!(Phase::new(-1, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(1, 2) + Phase::new(1, 2), Phase::ZERO);
        assert_eq!(Phase::new(1, 6).times(9), Phase::HALF);
        assert_eq!("3/4".parse::<Phase>().unwrap(), Phase::new(3, 4));
        assert_eq!(Phase::new(1, 2).as_sign(), Some(-1));
    }
}
