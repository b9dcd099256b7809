//! Arithmetic in `F = Q_p` (p odd) and its quadratic extensions.

mod element_e;
mod element_f;
mod exp_log;
pub(crate) mod modular;
mod torus;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use element_e::ElementE;
pub use element_f::{BaseField, ElementF};

use element_e::ExtShape;
use modular::{is_prime, least_non_residue, legendre, ppow};

use crate::character::UnitGroupCache;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid field configuration: {0}")]
pub struct ConfigError(pub String);

/// Which quadratic extension `E = F(omega)` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtKind {
    /// `omega^2 = u`, the least quadratic non-residue.
    Unramified,
    /// `omega^2 = p`.
    RamifiedP,
    /// `omega^2 = u p`.
    RamifiedUp,
}

impl ExtKind {
    pub const ALL: [ExtKind; 3] = [ExtKind::Unramified, ExtKind::RamifiedP, ExtKind::RamifiedUp];

    pub fn name(&self) -> &'static str {
        match self {
            ExtKind::Unramified => "unramified",
            ExtKind::RamifiedP => "ramified_p",
            ExtKind::RamifiedUp => "ramified_up",
        }
    }

    pub fn is_ramified(&self) -> bool {
        !matches!(self, ExtKind::Unramified)
    }
}

impl fmt::Display for ExtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "unramified" => Ok(ExtKind::Unramified),
            "ramified_p" => Ok(ExtKind::RamifiedP),
            "ramified_up" => Ok(ExtKind::RamifiedUp),
            _ => Err(ConfigError(format!("unknown extension kind '{s}'"))),
        }
    }
}

/// Prime, working precision and extension kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldConfig {
    p: u64,
    precision: u32,
    ext: ExtKind,
}

impl FieldConfig {
    pub const MIN_PRECISION: u32 = 8;

    pub fn new(p: u64, precision: u32, ext: ExtKind) -> Result<Self, ConfigError> {
        if p == 2 || !is_prime(p) {
            return Err(ConfigError(format!("p = {p} must be an odd prime")));
        }
        if precision < Self::MIN_PRECISION {
            return Err(ConfigError(format!(
                "working precision {precision} is below the minimum {}",
                Self::MIN_PRECISION
            )));
        }
        match p.checked_pow(precision) {
            Some(m) if m < (1u64 << 62) => {}
            _ => {
                return Err(ConfigError(format!(
                    "p^precision = {p}^{precision} does not fit the 62-bit word budget"
                )))
            }
        }
        Ok(Self { p, precision, ext })
    }

    /// Largest admissible working precision for `p`.
    pub fn max_precision(p: u64) -> u32 {
        let mut k = 0;
        let mut m: u64 = 1;
        while let Some(n) = m.checked_mul(p) {
            if n >= 1 << 62 {
                break;
            }
            m = n;
            k += 1;
        }
        k
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn ext(&self) -> ExtKind {
        self.ext
    }
}

/// The pair `E/F` with its canonical choices (`omega`, `delta = omega`, uniformizers) and the
/// shared discrete-log tables.
pub struct QuadraticExtension {
    config: FieldConfig,
    base: BaseField,
    non_residue: u64,
    shape: ExtShape,
    pub(crate) unit_groups: UnitGroupCache,
}

impl fmt::Debug for QuadraticExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadraticExtension").field("config", &self.config).finish()
    }
}

impl QuadraticExtension {
    pub fn new(config: FieldConfig) -> Arc<Self> {
        let base = BaseField::new_unchecked(config.p, config.precision);
        let u = least_non_residue(config.p);
        let (disc, ram) = match config.ext {
            ExtKind::Unramified => (base.int(u as i64), 1),
            ExtKind::RamifiedP => (base.int(config.p as i64), 2),
            ExtKind::RamifiedUp => (base.int((u * config.p) as i64), 2),
        };
        Arc::new(Self {
            config,
            base,
            non_residue: u,
            shape: ExtShape { disc, ram },
            unit_groups: UnitGroupCache::default(),
        })
    }

    pub fn config(&self) -> FieldConfig {
        self.config
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    pub fn kind(&self) -> ExtKind {
        self.config.ext
    }

    /// The least positive quadratic non-residue modulo `p`.
    pub fn non_residue(&self) -> u64 {
        self.non_residue
    }

    /// `D = omega^2`.
    pub fn disc(&self) -> ElementF {
        self.shape.disc
    }

    /// Ramification index `e(E/F)`.
    pub fn ramification(&self) -> u32 {
        self.shape.ram as u32
    }

    pub fn is_ramified(&self) -> bool {
        self.shape.ram == 2
    }

    /// Residue degree `f(E/F)`.
    pub fn residue_degree(&self) -> u32 {
        3 - self.shape.ram as u32
    }

    /// Cardinality of the residue field of `E`.
    pub fn q_e(&self) -> u64 {
        ppow(self.config.p, self.residue_degree())
    }

    pub fn elem(&self, a: ElementF, b: ElementF) -> ElementE {
        ElementE::from_parts(a, b, self.shape)
    }

    pub fn embed(&self, a: ElementF) -> ElementE {
        self.elem(a, self.base.zero())
    }

    pub fn e_int(&self, a: i64, b: i64) -> ElementE {
        self.elem(self.base.int(a), self.base.int(b))
    }

    pub fn e_one(&self) -> ElementE {
        self.e_int(1, 0)
    }

    pub fn e_zero(&self) -> ElementE {
        self.e_int(0, 0)
    }

    /// The square root `omega` of `D`.
    pub fn omega(&self) -> ElementE {
        self.e_int(0, 1)
    }

    /// The fixed nonzero trace-zero element; equal to `omega`.
    pub fn delta(&self) -> ElementE {
        self.omega()
    }

    /// Uniformizer of `E`: `p` when unramified, `omega` when ramified.
    pub fn uniformizer(&self) -> ElementE {
        if self.is_ramified() {
            self.omega()
        } else {
            self.e_int(self.config.p as i64, 0)
        }
    }

    /// Valuation of `omega` in `E`.
    pub fn omega_valuation(&self) -> i64 {
        if self.is_ramified() {
            1
        } else {
            0
        }
    }

    /// The quadratic character of `F^x` whose kernel is the norm group of `E^x`.
    pub fn sgn(&self, x: &ElementF) -> Result<i8, ArithError> {
        let v = x.valuation().ok_or(ArithError::PrecisionExhausted("sgn of a zero element"))?;
        let p = self.config.p;
        match self.config.ext {
            ExtKind::Unramified => Ok(if v.rem_euclid(2) == 0 { 1 } else { -1 }),
            _ => {
                let unit = x.unit_residue(1)?;
                // -D = N(omega) is a norm, so sgn(p) = sgn(-w) where D = p w.
                let w = self.shape.disc.shift(-1).unit_residue(1)?;
                let sgn_p = legendre(p - w % p, p);
                let sp = if v.rem_euclid(2) == 0 { 1 } else { sgn_p };
                Ok(sp * legendre(unit, p))
            }
        }
    }

    /// A representative of the nontrivial class of `F^x / N(E^x)`.
    pub fn non_norm(&self) -> ElementF {
        match self.config.ext {
            ExtKind::Unramified => self.base.int(self.config.p as i64),
            _ => self.base.int(self.non_residue as i64),
        }
    }

    /// Solution of `gamma / conj(gamma) = y` for `y` of norm one, `y != -1`: `gamma = 1 + y`.
    pub fn hilbert90_gamma(&self, y: &ElementE) -> Result<ElementE, ArithError> {
        let n = y.norm();
        if !(n - self.base.one()).is_zero() {
            return Err(ArithError::Domain("hilbert90_gamma needs an element of norm one".into()));
        }
        let g = self.e_one() + *y;
        if g.is_zero() {
            return Err(ArithError::Domain("y = -1 has no solution of the form 1 + y".into()));
        }
        Ok(g)
    }

    /// A solution of `gamma / conj(gamma) = y` for any `y` of norm one (uses `delta` at `y = -1`).
    pub fn hilbert90_any(&self, y: &ElementE) -> Result<ElementE, ArithError> {
        match self.hilbert90_gamma(y) {
            Ok(g) => Ok(g),
            Err(ArithError::Domain(_)) if (*y + self.e_one()).is_zero() => Ok(self.delta()),
            Err(e) => Err(e),
        }
    }
}
