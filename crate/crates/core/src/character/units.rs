//! Unit groups `(O / uniformizer^m)^x` of `F` and `E` with discrete-log tables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::abelian::smith_normal_form;
use super::CharacterError;
use crate::padic::modular::{mulmod, powmod, ppow, prime_factors};
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// Largest unit group for which a table is built.
pub const MAX_TABLE: u64 = 1_000_000;

const EMPTY: u32 = u32::MAX;

/// Which field a character or unit group lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    F,
    E,
}

impl FieldTag {
    pub fn letter(&self) -> char {
        match self {
            FieldTag::F => 'F',
            FieldTag::E => 'E',
        }
    }
}

/// `O / uniformizer^m` as pairs `(a mod p^ka, b mod p^kb)` for `a + b*omega`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ResidueRing {
    p: u64,
    ka: u32,
    kb: u32,
    ma: u64,
    mb: u64,
    disc: u64,
    ramified: bool,
}

pub(crate) type Residue = (u64, u64);

impl ResidueRing {
    pub(crate) fn mul(&self, x: Residue, y: Residue) -> Residue {
        if self.kb == 0 {
            return (mulmod(x.0, y.0, self.ma), 0);
        }
        let a = (mulmod(x.0, y.0, self.ma) + mulmod(mulmod(self.disc, x.1 % self.ma, self.ma), y.1 % self.ma, self.ma)) % self.ma;
        let b = (mulmod(x.0 % self.mb, y.1, self.mb) + mulmod(x.1, y.0 % self.mb, self.mb)) % self.mb;
        (a, b)
    }

    fn pow(&self, x: Residue, mut e: u64) -> Residue {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn one(&self) -> Residue {
        (1 % self.ma, 0)
    }

    fn index(&self, x: Residue) -> usize {
        (x.0 + self.ma * x.1) as usize
    }

    fn size(&self) -> u64 {
        self.ma * self.mb
    }

    /// Generators `1 + uniformizer^j r` of the layer `U^j / U^(j+1)`.
    pub(crate) fn layer_generators(&self, j: u32) -> Vec<Residue> {
        let pj = self.pi_power(j);
        let mut out = vec![((1 + pj.0) % self.ma, pj.1)];
        if self.kb > 0 && !self.ramified {
            out.push((1 % self.ma, pj.0 % self.mb));
        }
        out
    }

    /// `uniformizer^j` reduced.
    fn pi_power(&self, j: u32) -> Residue {
        if !self.ramified {
            return (ppow(self.p, j) % self.ma, 0);
        }
        self.pow((0, 1 % self.mb), j as u64)
    }
}

/// The finite abelian group `(O / uniformizer^m)^x` with a polycyclic presentation,
/// its invariant factor decomposition, and an `O(1)` discrete-log table.
#[derive(Debug)]
pub struct UnitGroup {
    tag: FieldTag,
    depth: u32,
    ring: ResidueRing,
    /// Relative orders of the polycyclic generators.
    radices: Vec<u64>,
    /// Element position -> polycyclic digits via mixed radix; residue index -> position.
    table: Vec<u32>,
    /// Row `j`: image of polycyclic generator `j` in `Z^r`, times `V`.
    v: Vec<Vec<i128>>,
    /// Kept invariant factors (all `> 1`) and their column in `V`.
    invariants: Vec<u64>,
    columns: Vec<usize>,
    /// Representatives of the basis generators, one per invariant factor.
    basis: Vec<Residue>,
    order: u64,
}

impl UnitGroup {
    fn build(tag: FieldTag, depth: u32, ring: ResidueRing, residue_gen: Residue) -> Result<UnitGroup, CharacterError> {
        let p = ring.p;
        let order = if depth == 0 {
            1
        } else {
            let q = if ring.kb > 0 && !ring.ramified { p * p } else { p };
            (q - 1) * q.pow(depth - 1)
        };
        if ring.size() > MAX_TABLE {
            return Err(CharacterError::TableTooLarge(ring.size()));
        }
        let mut table = vec![EMPTY; ring.size() as usize];
        let mut elements: Vec<Residue> = vec![ring.one()];
        table[ring.index(ring.one())] = 0;

        let mut gens = Vec::new();
        if depth > 0 {
            gens.push(residue_gen);
            for j in 1..depth {
                gens.extend(ring.layer_generators(j));
            }
        }

        let mut radices = Vec::new();
        let mut relations: Vec<Vec<i128>> = Vec::new();
        for g in gens {
            let mut h = g;
            let mut k: u64 = 1;
            while table[ring.index(h)] == EMPTY {
                h = ring.mul(h, g);
                k += 1;
            }
            if k == 1 {
                continue;
            }
            let old = table[ring.index(h)] as u64;
            let mut row = digits_of(old, &radices);
            row.iter_mut().for_each(|x| *x = -*x);
            row.push(k as i128);
            relations.push(row);

            let size = elements.len();
            let mut power = g;
            for i in 1..k {
                for pos in 0..size {
                    let e = ring.mul(power, elements[pos]);
                    let slot = &mut table[ring.index(e)];
                    debug_assert_eq!(*slot, EMPTY);
                    *slot = (i as usize * size + pos) as u32;
                    elements.push(e);
                }
                power = ring.mul(power, g);
            }
            radices.push(k);
        }
        if elements.len() as u64 != order {
            return Err(CharacterError::Internal(format!(
                "unit group of depth {depth} has {} elements, expected {order}",
                elements.len()
            )));
        }

        let r = radices.len();
        let rel: Vec<Vec<i128>> = relations
            .into_iter()
            .map(|mut row| {
                row.resize(r, 0);
                row
            })
            .collect();
        let (v, invariants, columns, basis) = if r == 0 {
            (Vec::new(), Vec::new(), Vec::new(), Vec::new())
        } else {
            let snf = smith_normal_form(&rel);
            let mut invariants = Vec::new();
            let mut columns = Vec::new();
            let mut basis = Vec::new();
            for (i, &d) in snf.diagonal.iter().enumerate() {
                if d > 1 {
                    invariants.push(d as u64);
                    columns.push(i);
                    // basis element i = prod_j g_j^{V^-1[i][j]}
                    let mut x = ring.one();
                    let mut stride = 1u64;
                    for (j, &rad) in radices.iter().enumerate() {
                        let e = snf.v_inv[i][j].rem_euclid(order as i128) as u64;
                        let gj = elements[stride as usize];
                        x = ring.mul(x, ring.pow(gj, e));
                        stride *= rad;
                    }
                    basis.push(x);
                }
            }
            (snf.v, invariants, columns, basis)
        };
        Ok(UnitGroup { tag, depth, ring, radices, table, v, invariants, columns, basis, order })
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than one.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub(crate) fn basis_residues(&self) -> &[Residue] {
        &self.basis
    }

    pub(crate) fn ring(&self) -> ResidueRing {
        self.ring
    }

    /// Phase weights per polycyclic generator for the character with the given exponents.
    pub(crate) fn generator_weights(&self, exponents: &[u64]) -> Vec<super::Phase> {
        (0..self.radices.len())
            .map(|j| {
                self.columns
                    .iter()
                    .zip(exponents)
                    .zip(&self.invariants)
                    .map(|((&c, &e), &d)| {
                        let num = (self.v[j][c] * e as i128).rem_euclid(d as i128) as i64;
                        super::Phase::new(num, d as i64)
                    })
                    .sum()
            })
            .collect()
    }

    pub(crate) fn position(&self, x: Residue) -> Result<u32, CharacterError> {
        let idx = self.ring.index(x);
        match self.table.get(idx) {
            Some(&pos) if pos != EMPTY => Ok(pos),
            _ => Err(CharacterError::NotAUnit),
        }
    }

    pub(crate) fn digits(&self, pos: u32) -> Vec<i128> {
        digits_of(pos as u64, &self.radices)
    }

    /// Coordinates of a unit residue in the invariant factor decomposition.
    #[cfg(test)]
    pub(crate) fn coordinates(&self, x: Residue) -> Result<Vec<u64>, CharacterError> {
        let digits = self.digits(self.position(x)?);
        Ok(self
            .columns
            .iter()
            .zip(&self.invariants)
            .map(|(&c, &d)| {
                let y: i128 = digits.iter().enumerate().map(|(j, &x)| x * self.v[j][c]).sum();
                y.rem_euclid(d as i128) as u64
            })
            .collect())
    }

    pub(crate) fn residue_of_f(&self, x: &ElementF) -> Result<Residue, CharacterError> {
        Ok((x.residue(self.ring.ka)?, 0))
    }

    pub(crate) fn residue_of_e(&self, x: &ElementE) -> Result<Residue, CharacterError> {
        Ok(x.residue_key(self.depth)?)
    }

    /// Lifts a residue to an exact element of `E` (or of `F` embedded).
    pub(crate) fn lift(&self, field: &QuadraticExtension, x: Residue) -> ElementE {
        field.e_int(x.0 as i64, x.1 as i64)
    }
}

fn digits_of(mut pos: u64, radices: &[u64]) -> Vec<i128> {
    radices
        .iter()
        .map(|&r| {
            let d = pos % r;
            pos /= r;
            d as i128
        })
        .collect()
}

/// Unit groups of one field pair, built lazily and shared.
#[derive(Default)]
pub struct UnitGroupCache {
    groups: Mutex<HashMap<(FieldTag, u32), Arc<UnitGroup>>>,
}

impl std::fmt::Debug for UnitGroupCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("UnitGroupCache")
    }
}

fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&f| powmod(g, (p - 1) / f, p) != 1)).unwrap_or(1)
}

impl QuadraticExtension {
    /// The unit group of `F` or `E` modulo the given depth.
    pub fn unit_group(&self, tag: FieldTag, depth: u32) -> Result<Arc<UnitGroup>, CharacterError> {
        if let Some(g) = self.unit_groups.groups.lock().expect("cache lock").get(&(tag, depth)) {
            return Ok(g.clone());
        }
        let group = Arc::new(self.build_unit_group(tag, depth)?);
        let mut cache = self.unit_groups.groups.lock().expect("cache lock");
        Ok(cache.entry((tag, depth)).or_insert(group).clone())
    }

    fn build_unit_group(&self, tag: FieldTag, depth: u32) -> Result<UnitGroup, CharacterError> {
        let p = self.p();
        if depth + 2 > self.precision() {
            return Err(CharacterError::Arith(crate::padic::ArithError::PrecisionExhausted(
                "unit group depth exceeds working precision",
            )));
        }
        let (ka, kb, ramified) = match tag {
            FieldTag::F => (depth, 0, false),
            FieldTag::E => {
                let (ka, kb) = ElementE::residue_shape(self.ramification() as u8, depth);
                (ka, kb, self.is_ramified())
            }
        };
        let (ma, mb) = (ppow(p, ka), ppow(p, kb));
        if ma.saturating_mul(mb) > MAX_TABLE {
            return Err(CharacterError::TableTooLarge(ma.saturating_mul(mb)));
        }
        let disc = if ka == 0 { 0 } else { self.disc().residue(ka)? };
        let ring = ResidueRing { p, ka, kb, ma, mb, disc, ramified };
        let residue_gen = if depth == 0 {
            ring.one()
        } else if tag == FieldTag::E && !self.is_ramified() {
            let small = ResidueRing { p, ka: 1, kb: 1, ma: p, mb: p, disc: disc % p, ramified: false };
            let n = p * p - 1;
            let factors = prime_factors(n);
            let mut found = None;
            'search: for b in 0..p {
                for a in 0..p {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    if factors.iter().all(|&f| small.pow((a, b), n / f) != small.one()) {
                        found = Some((a, b));
                        break 'search;
                    }
                }
            }
            found.expect("finite field has a primitive element")
        } else {
            (primitive_root(p) % ma, 0)
        };
        UnitGroup::build(tag, depth, ring, residue_gen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{ExtKind, FieldConfig};

    fn field(p: u64, ext: ExtKind) -> Arc<QuadraticExtension> {
        QuadraticExtension::new(FieldConfig::new(p, 10, ext).unwrap())
    }

    #[test]
    fn orders_and_invariants() {
        let e = field(5, ExtKind::Unramified);
        let g = e.unit_group(FieldTag::E, 2).unwrap();
        assert_eq!(g.order(), 24 * 25);
        assert_eq!(g.invariants().iter().product::<u64>(), 600);
        let f = e.unit_group(FieldTag::F, 3).unwrap();
        assert_eq!(f.invariants(), &[100]);
        let r = field(3, ExtKind::RamifiedP).unit_group(FieldTag::E, 4).unwrap();
        assert_eq!(r.order(), 2 * 27);
    }

    #[test]
    fn basis_coordinates_are_unit_vectors() {
        for ext in ExtKind::ALL {
            let e = field(3, ext);
            for tag in [FieldTag::F, FieldTag::E] {
                let g = e.unit_group(tag, 3).unwrap();
                for (i, &b) in g.basis_residues().iter().enumerate() {
                    let c = g.coordinates(b).unwrap();
                    let want: Vec<u64> = (0..c.len()).map(|j| u64::from(i == j)).collect();
                    assert_eq!(c, want, "{ext} {tag:?}");
                }
            }
        }
    }

    #[test]
    fn coordinates_are_a_homomorphism() {
        let e = field(5, ExtKind::RamifiedUp);
        let g = e.unit_group(FieldTag::E, 3).unwrap();
        let ring = g.ring();
        let xs = [(2u64, 3u64), (7, 1), (11, 4)];
        for &x in &xs {
            for &y in &xs {
                let cx = g.coordinates(x).unwrap();
                let cy = g.coordinates(y).unwrap();
                let cxy = g.coordinates(ring.mul(x, y)).unwrap();
                for i in 0..cx.len() {
                    assert_eq!((cx[i] + cy[i]) % g.invariants()[i], cxy[i]);
                }
            }
        }
    }
}
