//! The base-change constants `c(phi, phi')` and the constants `gamma^G_{mu+,mu-}(phi+, phi-)`.

use serde::{Deserialize, Serialize};

use super::LanglandsError;
use crate::character::{AdditiveCharacter, Phase};
use crate::epsilon::{gamma_norm_form, UnitComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantQuery {
    /// `c_{mu,mu'}(phi, phi')` for parameters of dimensions `d`, `d'`.
    CPair { d: u32, d_prime: u32 },
    /// `gamma^G_{mu+,mu-}(phi+, phi-)`; `quasi_split` says whether the ambient hermitian space
    /// is the quasi-split one.
    GammaTe { d_plus: u32, d_minus: u32, quasi_split: bool },
}

/// Value of a table entry, with `gamma_psi(N_{E/F})` computed from the Weil constant of the
/// norm form.
pub fn constants_table(psi: &AdditiveCharacter, query: ConstantQuery) -> Result<UnitComplex, LanglandsError> {
    let field = psi.field();
    let gamma_n = gamma_norm_form(field, psi, None)?;
    let sgn = |x: i64| -> Result<UnitComplex, LanglandsError> {
        Ok(UnitComplex::from_phase(Phase::from_sign(field.sgn(&field.base().int(x))?)))
    };
    let minus_one = UnitComplex::from_phase(Phase::HALF);
    Ok(match query {
        ConstantQuery::CPair { d, d_prime } => {
            if d % 2 == 1 && d_prime % 2 == 1 {
                gamma_n.inv().mul(&sgn(2)?)
            } else {
                UnitComplex::one()
            }
        }
        ConstantQuery::GammaTe { d_plus, d_minus, quasi_split } => {
            let both_odd = d_plus % 2 == 1 && d_minus % 2 == 1;
            let both_even = d_plus % 2 == 0 && d_minus % 2 == 0;
            let base = if both_odd { gamma_n.inv().mul(&sgn(-2)?) } else { UnitComplex::one() };
            if quasi_split || !(both_odd || both_even) {
                base
            } else {
                base.mul(&minus_one)
            }
        }
    })
}
