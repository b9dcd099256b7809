use std::sync::Arc;

use super::{CharacterError, Phase};
use crate::padic::modular::ppow;
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// `psi(x) = exp(2 pi i {lambda x}_p)` on `F`, with `{.}_p` the `p`-adic fractional part.
#[derive(Clone, Debug)]
pub struct AdditiveCharacter {
    field: Arc<QuadraticExtension>,
    scale: ElementF,
}

/// `p`-adic fractional part as a phase.
pub fn fractional_phase(y: &ElementF) -> Result<Phase, CharacterError> {
    match y.valuation() {
        None => {
            if y.val_lower_bound() >= 0 {
                Ok(Phase::ZERO)
            } else {
                Err(CharacterError::Arith(crate::padic::ArithError::PrecisionExhausted(
                    "additive character of an imprecise zero",
                )))
            }
        }
        Some(v) if v >= 0 => Ok(Phase::ZERO),
        Some(v) => {
            let k = (-v) as u32;
            let num = y.unit_residue(k)?;
            let den = ppow(y.prime(), k);
            Ok(Phase::new(num as i64, den as i64))
        }
    }
}

impl AdditiveCharacter {
    /// The character with scale `lambda`.
    pub fn new(field: Arc<QuadraticExtension>, scale: ElementF) -> Result<Self, CharacterError> {
        if scale.is_zero() {
            return Err(CharacterError::Invalid("additive character needs a nonzero scale".into()));
        }
        Ok(Self { field, scale })
    }

    /// `lambda = p^-n`, so the conductor is `n`.
    pub fn with_conductor(field: Arc<QuadraticExtension>, n: i64) -> Self {
        let scale = field.base().p_power(-n);
        Self { field, scale }
    }

    pub fn standard(field: Arc<QuadraticExtension>) -> Self {
        Self::with_conductor(field, 0)
    }

    pub fn field(&self) -> &Arc<QuadraticExtension> {
        &self.field
    }

    pub fn scale(&self) -> ElementF {
        self.scale
    }

    /// `n(psi)`: the least `n` with `psi` trivial on `p^n O_F`.
    pub fn conductor(&self) -> i64 {
        -self.scale.valuation().expect("nonzero scale")
    }

    pub fn eval(&self, x: &ElementF) -> Result<Phase, CharacterError> {
        fractional_phase(&(self.scale * *x))
    }

    /// `psi_E = psi o Tr`.
    pub fn on_e(&self) -> AdditiveCharacterE {
        AdditiveCharacterE { psi: self.clone(), twist: None }
    }

    /// `psi_E^delta(x) = psi_E(delta x)`.
    pub fn on_e_delta(&self) -> AdditiveCharacterE {
        AdditiveCharacterE { psi: self.clone(), twist: Some(self.field.delta()) }
    }
}

/// `x -> psi(Tr(t x))` on `E`, derived from an additive character of `F`.
#[derive(Clone, Debug)]
pub struct AdditiveCharacterE {
    psi: AdditiveCharacter,
    twist: Option<ElementE>,
}

impl AdditiveCharacterE {
    pub fn base_character(&self) -> &AdditiveCharacter {
        &self.psi
    }

    pub fn twist(&self) -> Option<ElementE> {
        self.twist
    }

    pub fn eval(&self, x: &ElementE) -> Result<Phase, CharacterError> {
        let y = match &self.twist {
            Some(t) => *t * *x,
            None => *x,
        };
        self.psi.eval(&y.trace())
    }

    /// Least `n` such that the character is trivial on `uniformizer^n O_E`, found by testing the
    /// `Z_p`-basis `uniformizer^n, uniformizer^n * omega` of that lattice.
    pub fn conductor(&self) -> Result<i64, CharacterError> {
        let field = &self.psi.field;
        let pi = field.uniformizer();
        let trivial_at = |n: i64| -> Result<bool, CharacterError> {
            let lattice = [pi.pow(n)?, pi.pow(n)? * field.omega()];
            for x in lattice {
                if !self.eval(&x)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let e = field.ramification() as i64;
        let mut n = e * self.psi.conductor() - 4;
        while !trivial_at(n)? {
            n += 1;
        }
        while trivial_at(n - 1)? {
            n -= 1;
        }
        Ok(n)
    }
}
