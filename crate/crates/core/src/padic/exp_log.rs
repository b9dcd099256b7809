use std::ops::{Add, Mul, Sub};

use super::{ArithError, ElementE, ElementF};

/// The operations the exponential and logarithm series need.
trait SeriesScalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn unit(&self) -> Self;
    fn minus_one(&self) -> Self;
    fn div_integer(&self, n: u64) -> Self;
    /// Exact `p`-adic valuation normalized by `v(p) = 1`, or `None` for zero.
    fn vp(&self) -> Result<Option<f64>, ArithError>;
    fn truncate_abs(&self, abs: i64) -> Self;
    fn cap(&self) -> u32;
    fn prime(&self) -> u64;
}

impl SeriesScalar for ElementF {
    fn unit(&self) -> Self {
        self.base().one()
    }
    fn minus_one(&self) -> Self {
        *self - self.base().one()
    }
    fn div_integer(&self, n: u64) -> Self {
        *self * self.base().int(n as i64).inv().expect("nonzero integer")
    }
    fn vp(&self) -> Result<Option<f64>, ArithError> {
        Ok(self.valuation().map(|v| v as f64))
    }
    fn truncate_abs(&self, abs: i64) -> Self {
        self.truncate(abs)
    }
    fn cap(&self) -> u32 {
        self.base().precision()
    }
    fn prime(&self) -> u64 {
        self.base().prime()
    }
}

impl SeriesScalar for ElementE {
    fn unit(&self) -> Self {
        let b = self.base();
        ElementE::from_parts(b.one(), b.zero(), self.shape_copy())
    }
    fn minus_one(&self) -> Self {
        *self - self.unit()
    }
    fn div_integer(&self, n: u64) -> Self {
        self.scale(self.base().int(n as i64).inv().expect("nonzero integer"))
    }
    fn vp(&self) -> Result<Option<f64>, ArithError> {
        if self.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.val()? as f64 / self.ramification_index() as f64))
    }
    fn truncate_abs(&self, abs: i64) -> Self {
        ElementE::from_parts(self.a().truncate(abs), self.b().truncate(abs), self.shape_copy())
    }
    fn cap(&self) -> u32 {
        self.base().precision()
    }
    fn prime(&self) -> u64 {
        self.base().prime()
    }
}

fn exp_series<T: SeriesScalar>(x: &T) -> Result<T, ArithError> {
    let p = x.prime() as f64;
    let v = match x.vp()? {
        None => return Ok(x.unit()),
        Some(v) => v,
    };
    if v <= 1.0 / (p - 1.0) + 1e-12 {
        return Err(ArithError::Domain(format!("exp does not converge: v_p(x) = {v}")));
    }
    let target = x.cap() as f64 + 1.0;
    let bound = |m: f64| m * v - (m - 1.0) / (p - 1.0);
    let mut sum = x.unit();
    let mut term = x.unit();
    let mut n: u64 = 1;
    loop {
        term = (term * *x).div_integer(n);
        sum = sum + term;
        n += 1;
        if bound(n as f64) >= target {
            break;
        }
    }
    Ok(sum.truncate_abs(bound(n as f64).floor() as i64))
}

fn log_series<T: SeriesScalar>(y: &T) -> Result<T, ArithError> {
    let z = y.minus_one();
    let v = match z.vp()? {
        None => return Ok(z),
        Some(v) => v,
    };
    if v <= 1e-12 {
        return Err(ArithError::Domain("log needs val(y - 1) >= 1".into()));
    }
    let lp = (y.prime() as f64).ln();
    let target = y.cap() as f64 + 1.0;
    let bound = |m: f64| m * v - m.ln() / lp;
    let mut sum = z;
    let mut power = z;
    let mut n: u64 = 1;
    loop {
        n += 1;
        power = power * z;
        let term = power.div_integer(n);
        sum = if n.is_multiple_of(2) { sum - term } else { sum + term };
        let rest = (n + 1) as f64;
        if bound(rest) >= target && bound(rest + 1.0) >= target {
            break;
        }
    }
    Ok(sum)
}

impl ElementF {
    /// `p`-adic exponential; needs `val(x) >= 1`.
    pub fn exp(&self) -> Result<ElementF, ArithError> {
        exp_series(self)
    }

    /// `p`-adic logarithm; needs `val(y - 1) >= 1`.
    pub fn log(&self) -> Result<ElementF, ArithError> {
        log_series(self)
    }
}

impl ElementE {
    /// `p`-adic exponential; needs `v_p(x) > 1/(p-1)`.
    pub fn exp(&self) -> Result<ElementE, ArithError> {
        exp_series(self)
    }

    /// `p`-adic logarithm; needs `val_E(y - 1) >= 1`.
    pub fn log(&self) -> Result<ElementE, ArithError> {
        log_series(self)
    }
}
