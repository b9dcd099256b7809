//! Fixtures shared by the kernel benchmarks.

use std::sync::Arc;

use localfactors::character::{AdditiveCharacter, FieldTag, MultiplicativeCharacter};
use localfactors::padic::{ExtKind, FieldConfig, QuadraticExtension};

pub fn field(p: u64, ext: ExtKind) -> Arc<QuadraticExtension> {
    QuadraticExtension::new(FieldConfig::new(p, 20, ext).expect("valid field"))
}

pub fn psi(field: &Arc<QuadraticExtension>) -> AdditiveCharacter {
    AdditiveCharacter::standard(field.clone())
}

/// Characters of `E^x` with conductor at most 2 and order at most 12, optionally restricted
/// to a given character on `F^x`.
pub fn characters(field: &Arc<QuadraticExtension>, restriction: Option<&MultiplicativeCharacter>) -> Vec<MultiplicativeCharacter> {
    localfactors::character::enumerate_characters(field, FieldTag::E, 2, 12, restriction).expect("enumeration")
}

/// A conductor-2 character whose restriction to `F^x` is the quadratic sign.
pub fn sign_minus_character(field: &Arc<QuadraticExtension>) -> MultiplicativeCharacter {
    let sgn = MultiplicativeCharacter::sgn(field.clone());
    characters(field, Some(&sgn)).into_iter().max_by_key(|c| c.conductor()).expect("a sign-minus character")
}
