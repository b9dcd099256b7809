//! Exact computation of the `p`-adic local factors attached to unitary groups and the
//! Gan-Gross-Prasad dichotomy: field arithmetic, characters, Weil constants, Tate epsilon
//! factors, transfer factors and component-group signs.

pub mod character;
pub mod epsilon;
pub mod langlands;
pub mod padic;
pub mod params;
pub mod report;

pub use character::{AdditiveCharacter, FieldTag, MultiplicativeCharacter, Phase};
pub use padic::{ElementE, ElementF, ExtKind, FieldConfig, QuadraticExtension};
