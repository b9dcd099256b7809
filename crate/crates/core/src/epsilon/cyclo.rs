//! Exact arithmetic in the cyclotomic field `Q(zeta_n)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::character::Phase;

/// Power-basis reduction tables for `Q(zeta_n)`.
#[derive(Debug)]
pub struct CyclotomicField {
    n: u64,
    /// `x^k mod Phi_n` for `k < n`.
    powers: Vec<Vec<i64>>,
}

fn poly_divide_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    // both monic, coefficients lowest degree first
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

fn cyclotomic_poly(n: u64) -> Vec<i128> {
    let mut poly = vec![0i128; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = poly_divide_exact(&poly, &cyclotomic_poly(d));
        }
    }
    poly
}

impl CyclotomicField {
    pub fn new(n: u64) -> Arc<Self> {
        assert!(n >= 1);
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i128; deg];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.iter().map(|&c| i64::try_from(c).expect("small coefficients")).collect());
            // multiply by x and reduce
            let top = cur[deg - 1];
            let mut next = vec![0i128; deg];
            next[1..deg].copy_from_slice(&cur[..(deg - 1)]);
            for i in 0..deg {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        Arc::new(Self { n, powers })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        Cyclotomic { field: self.clone(), coeffs: vec![BigRational::zero(); self.degree()] }
    }
}

/// An element of `Q(zeta_n)` in the power basis.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Adds `c * exp(2 pi i phase)`; the phase denominator must divide `n`.
    pub fn add_root(&mut self, phase: Phase, c: &BigRational) {
        let n = self.field.n as i64;
        assert_eq!(n % phase.denom(), 0, "phase {phase} outside Q(zeta_{n})");
        let k = (phase.numer() * (n / phase.denom())) as usize;
        for (x, &m) in self.coeffs.iter_mut().zip(&self.field.powers[k]) {
            if m != 0 {
                *x += c * BigRational::from_integer(BigInt::from(m));
            }
        }
    }

    /// The element `1`.
    pub fn unit(field: Arc<CyclotomicField>) -> Cyclotomic {
        let mut one = field.zero();
        one.coeffs[0] = BigRational::from_integer(1.into());
        one
    }

    pub fn add_assign(&mut self, other: &Cyclotomic) {
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y;
        }
    }

    pub fn scale(&self, c: &BigRational) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    /// `r` with `other = r * self`, when it exists and is rational.
    pub fn rational_ratio(&self, other: &Cyclotomic) -> Option<BigRational> {
        let pivot = self.coeffs.iter().position(|x| !x.is_zero())?;
        let r = &other.coeffs[pivot] / &self.coeffs[pivot];
        let ok = self.coeffs.iter().zip(&other.coeffs).all(|(x, y)| &(x * &r) == y);
        ok.then_some(r)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let t = std::f64::consts::TAU * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), t)
            })
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}
