//! Additive and finite-order multiplicative characters of `F` and `E`.

mod abelian;
mod additive;
mod mult;
mod phase;
mod units;

use thiserror::Error;

pub use additive::{fractional_phase, AdditiveCharacter, AdditiveCharacterE};
pub use mult::{enumerate_characters, DualSign, MultiplicativeCharacter};
pub use phase::{Phase, PhaseParseError};
pub use units::{FieldTag, UnitGroup, UnitGroupCache, MAX_TABLE};


use crate::padic::ArithError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("discrete-log table of size {0} exceeds the budget")]
    TableTooLarge(u64),
    #[error("element is not a unit at the table depth")]
    NotAUnit,
    #[error("character and element live on different fields")]
    FieldMismatch,
    #[error("no extension of the target character found")]
    NoExtension,
    #[error("cannot parse character '{0}'")]
    Parse(String),
    #[error("invalid character data: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
