//! Conjugate-dual L-parameters that are sums of characters of `E^x`, and their component groups.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LanglandsError;
use crate::character::{DualSign, MultiplicativeCharacter};
use crate::padic::QuadraticExtension;

/// `l * mu` inside a parameter.
#[derive(Clone, Debug)]
pub struct LParamEntry {
    pub mu: MultiplicativeCharacter,
    pub multiplicity: u32,
    pub sign: DualSign,
}

/// `phi = sum_j l_j mu_j`, a parameter of a unitary group in `d = sum l_j` variables, hence
/// conjugate-dual of sign `(-1)^(d+1)`.
#[derive(Clone, Debug)]
pub struct LParameter {
    field: Arc<QuadraticExtension>,
    entries: Vec<LParamEntry>,
}

/// JSON form of one entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub character: String,
    pub multiplicity: u32,
}

impl LParameter {
    pub fn empty(field: Arc<QuadraticExtension>) -> Self {
        Self { field, entries: Vec::new() }
    }

    /// Checks distinctness, that entries of the wrong sign have even multiplicity, and that
    /// every entry which is not conjugate-dual comes with `mu^theta = conj(mu)^-1` at the same
    /// multiplicity.
    pub fn new(field: Arc<QuadraticExtension>, items: Vec<(MultiplicativeCharacter, u32)>) -> Result<Self, LanglandsError> {
        let mut entries = Vec::with_capacity(items.len());
        for (mu, multiplicity) in items {
            if multiplicity == 0 {
                return Err(LanglandsError::InvalidParameter("multiplicities are positive".into()));
            }
            if entries.iter().any(|e: &LParamEntry| e.mu == mu) {
                return Err(LanglandsError::InvalidParameter(format!("{} appears twice", mu.to_text())));
            }
            let sign = mu.conjugate_dual_sign()?;
            entries.push(LParamEntry { mu, multiplicity, sign });
        }
        let phi = Self { field, entries };
        let ambient = phi.ambient_sign();
        for e in &phi.entries {
            match e.sign.as_sign() {
                Some(s) if s != ambient && e.multiplicity % 2 == 1 => {
                    return Err(LanglandsError::InvalidParameter(format!(
                        "{} has sign {s} against ambient sign {ambient} and odd multiplicity",
                        e.mu.to_text()
                    )))
                }
                Some(_) => {}
                None => {
                    let theta = e.mu.galois_conjugate()?.inverse();
                    if !phi.entries.iter().any(|f| f.mu == theta && f.multiplicity == e.multiplicity) {
                        return Err(LanglandsError::InvalidParameter(format!(
                            "{} is not conjugate-dual and its partner is missing",
                            e.mu.to_text()
                        )));
                    }
                }
            }
        }
        Ok(phi)
    }

    /// Multiplicity-free parameter from distinct characters.
    pub fn multiplicity_free(field: Arc<QuadraticExtension>, chars: Vec<MultiplicativeCharacter>) -> Result<Self, LanglandsError> {
        Self::new(field, chars.into_iter().map(|m| (m, 1)).collect())
    }

    pub fn field(&self) -> &Arc<QuadraticExtension> {
        &self.field
    }

    pub fn entries(&self) -> &[LParamEntry] {
        &self.entries
    }

    pub fn dimension(&self) -> u32 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `(-1)^(d+1)`.
    pub fn ambient_sign(&self) -> i8 {
        if self.dimension() % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// Positions of the entries in `J^epsilon`.
    pub fn j_epsilon(&self) -> Vec<usize> {
        let s = self.ambient_sign();
        self.entries.iter().enumerate().filter(|(_, e)| e.sign.as_sign() == Some(s)).map(|(i, _)| i).collect()
    }

    pub fn to_json(&self) -> Vec<EntryJson> {
        self.entries.iter().map(|e| EntryJson { character: e.mu.to_text(), multiplicity: e.multiplicity }).collect()
    }

    pub fn from_json(field: Arc<QuadraticExtension>, items: &[EntryJson]) -> Result<Self, LanglandsError> {
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            out.push((MultiplicativeCharacter::parse(field.clone(), &item.character)?, item.multiplicity));
        }
        Self::new(field, out)
    }
}

/// `S_phi = {+-1}^{J^epsilon}`, with the characters of `J^epsilon` as coordinate labels.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentGroup {
    pub labels: Vec<String>,
    pub multiplicities: Vec<u32>,
}

impl ComponentGroup {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn order(&self) -> u64 {
        1 << self.rank()
    }

    pub fn identity(&self) -> ComponentGroupElement {
        ComponentGroupElement { bits: vec![1; self.rank()] }
    }

    /// Every element, in the order of the binary expansion of `0 .. 2^rank`.
    pub fn elements(&self) -> Vec<ComponentGroupElement> {
        let n = self.rank();
        (0..1u64 << n)
            .map(|mask| ComponentGroupElement { bits: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }
}

pub fn component_group(phi: &LParameter) -> ComponentGroup {
    let j = phi.j_epsilon();
    ComponentGroup {
        labels: j.iter().map(|&i| phi.entries[i].mu.to_text()).collect(),
        multiplicities: j.iter().map(|&i| phi.entries[i].multiplicity).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentGroupElement {
    pub bits: Vec<i8>,
}

impl ComponentGroupElement {
    pub fn mul(&self, other: &Self) -> Self {
        Self { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a * b).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&b| b == 1)
    }
}

/// Image of `-1` in `S_phi`: the determinant of `-1` on each orthogonal factor `O(l_j)`.
pub fn z_phi(phi: &LParameter) -> ComponentGroupElement {
    let bits = phi
        .j_epsilon()
        .iter()
        .map(|&i| if phi.entries[i].multiplicity % 2 == 1 { -1 } else { 1 })
        .collect();
    ComponentGroupElement { bits }
}

/// A `{+-1}`-valued character of `{+-1}^n`, stored by its values on the coordinate generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignCharacter {
    pub generators: Vec<i8>,
}

impl SignCharacter {
    pub fn trivial(n: usize) -> Self {
        Self { generators: vec![1; n] }
    }

    pub fn eval(&self, s: &ComponentGroupElement) -> i8 {
        self.generators.iter().zip(&s.bits).filter(|(_, &b)| b == -1).map(|(g, _)| *g).product()
    }

    /// All `2^n` characters, in the same order as `ComponentGroup::elements`.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1u64 << n)
            .map(|mask| Self { generators: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|&g| g == 1)
    }
}

#[derive(Serialize)]
struct TableRow<'a> {
    s: &'a [i8],
    value: i8,
}

impl Serialize for SignCharacter {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let group = ComponentGroup { labels: vec![String::new(); self.generators.len()], multiplicities: vec![] };
        let elements = group.elements();
        let rows: Vec<TableRow<'_>> = elements.iter().map(|s| TableRow { s: &s.bits, value: self.eval(s) }).collect();
        rows.serialize(ser)
    }
}
