//! Component groups of character-sum L-parameters of unitary groups, the epsilon characters
//! attached to a pair of parameters, the resulting dichotomy, and the constants tables.

mod constants;
mod ggp;
mod parameter;

use thiserror::Error;

pub use constants::{constants_table, ConstantQuery};
pub use ggp::{
    epsilon_character, epsilon_tensor, ggp_dichotomy, multiplicity_pairing, GgpKind, GgpOutcome, MultiplicityMatrix, PairingData,
    SIGN_TOLERANCE,
};
pub use parameter::{component_group, z_phi, ComponentGroup, ComponentGroupElement, EntryJson, LParamEntry, LParameter, SignCharacter};

use crate::character::CharacterError;
use crate::epsilon::EpsilonError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LanglandsError {
    #[error(transparent)]
    Epsilon(#[from] EpsilonError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("{what} = {value} is not a sign")]
    EpsilonNotSign { what: String, value: String },
    #[error("Fourier inversion is not integral: {0}")]
    InversionNotIntegral(String),
}

impl From<crate::padic::ArithError> for LanglandsError {
    fn from(e: crate::padic::ArithError) -> Self {
        LanglandsError::Epsilon(EpsilonError::Arith(e))
    }
}
