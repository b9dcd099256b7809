use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use super::units::{FieldTag, Residue, UnitGroup};
use super::{CharacterError, Phase};
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// Upper bound on the dual groups searched by `extend_character` and the enumerators.
const MAX_DUAL_SEARCH: u64 = 2_000_000;

/// Classification of a character of `E^x` by its restriction to `F^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualSign {
    Plus,
    Minus,
    None,
}

impl DualSign {
    pub fn as_sign(&self) -> Option<i8> {
        match self {
            DualSign::Plus => Some(1),
            DualSign::Minus => Some(-1),
            DualSign::None => None,
        }
    }
}

/// A finite-order character of `F^x` or `E^x`: a character of `(O / uniformizer^depth)^x`
/// in invariant-factor coordinates and the value at the fixed uniformizer.
#[derive(Clone)]
pub struct MultiplicativeCharacter {
    field: Arc<QuadraticExtension>,
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    uniformizer_phase: Phase,
    weights: Vec<Phase>,
}

impl fmt::Debug for MultiplicativeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiplicativeCharacter({self})")
    }
}

impl MultiplicativeCharacter {
    pub fn new(
        field: Arc<QuadraticExtension>,
        tag: FieldTag,
        depth: u32,
        exponents: Vec<u64>,
        uniformizer_phase: Phase,
    ) -> Result<Self, CharacterError> {
        let group = field.unit_group(tag, depth)?;
        Self::from_group(field, group, exponents, uniformizer_phase)
    }

    fn from_group(
        field: Arc<QuadraticExtension>,
        group: Arc<UnitGroup>,
        exponents: Vec<u64>,
        uniformizer_phase: Phase,
    ) -> Result<Self, CharacterError> {
        if exponents.len() != group.invariants().len() {
            return Err(CharacterError::Invalid(format!(
                "expected {} unit exponents at depth {}, got {}",
                group.invariants().len(),
                group.depth(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.iter().zip(group.invariants()).map(|(&e, &d)| e % d).collect();
        let weights = group.generator_weights(&exponents);
        Ok(Self { field, group, exponents, uniformizer_phase, weights })
    }

    pub fn trivial(field: Arc<QuadraticExtension>, tag: FieldTag) -> Self {
        Self::new(field, tag, 0, Vec::new(), Phase::ZERO).expect("depth 0 group")
    }

    /// The unramified character with the given value at the uniformizer.
    pub fn unramified(field: Arc<QuadraticExtension>, tag: FieldTag, uniformizer_phase: Phase) -> Self {
        Self::new(field, tag, 0, Vec::new(), uniformizer_phase).expect("depth 0 group")
    }

    /// Builds the character from its values on unit representatives (lifted to `E`).
    pub fn from_unit_values<G>(
        field: Arc<QuadraticExtension>,
        tag: FieldTag,
        depth: u32,
        unit_value: G,
        uniformizer_phase: Phase,
    ) -> Result<Self, CharacterError>
    where
        G: Fn(&ElementE) -> Result<Phase, CharacterError>,
    {
        let group = field.unit_group(tag, depth)?;
        let mut exponents = Vec::with_capacity(group.invariants().len());
        for (&b, &d) in group.basis_residues().iter().zip(group.invariants()) {
            let phase = unit_value(&group.lift(&field, b))?;
            let scaled = phase.ratio() * num_rational::Ratio::from_integer(d as i64);
            if !scaled.is_integer() {
                return Err(CharacterError::Invalid(format!(
                    "unit value {phase} is not a character of the depth-{depth} quotient"
                )));
            }
            exponents.push(scaled.to_integer().rem_euclid(d as i64) as u64);
        }
        Self::from_group(field, group, exponents, uniformizer_phase)
    }

    /// `sgn_{E/F}` as a character of `F^x`.
    pub fn sgn(field: Arc<QuadraticExtension>) -> Self {
        let depth = u32::from(field.is_ramified());
        let f = field.clone();
        let at_p = Phase::from_sign(field.sgn(&field.base().int(field.p() as i64)).expect("p is nonzero"));
        Self::from_unit_values(field, FieldTag::F, depth, move |x| Ok(Phase::from_sign(f.sgn(&x.a())?)), at_p)
            .expect("sgn has conductor at most one")
    }

    pub fn field(&self) -> &Arc<QuadraticExtension> {
        &self.field
    }

    pub fn tag(&self) -> FieldTag {
        self.group.tag()
    }

    pub fn depth(&self) -> u32 {
        self.group.depth()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn invariants(&self) -> &[u64] {
        self.group.invariants()
    }

    /// Value at the fixed uniformizer (`p` for `F` and unramified `E`, `omega` for ramified `E`).
    pub fn uniformizer_phase(&self) -> Phase {
        self.uniformizer_phase
    }

    fn eval_residue(&self, x: Residue) -> Result<Phase, CharacterError> {
        let digits = self.group.digits(self.group.position(x)?);
        Ok(digits.iter().zip(&self.weights).map(|(&d, w)| w.times(d as i64)).sum())
    }

    /// Value on a unit of `E` (or of `F` embedded, for characters of `F^x`).
    fn eval_unit_e(&self, u: &ElementE) -> Result<Phase, CharacterError> {
        match self.tag() {
            FieldTag::E => self.eval_residue(self.group.residue_of_e(u)?),
            FieldTag::F => {
                let a = u.in_base_field().ok_or(CharacterError::FieldMismatch)?;
                self.eval_residue(self.group.residue_of_f(&a)?)
            }
        }
    }

    /// `mu(x)` for `x` in `E^x`; characters of `F^x` accept only elements of `F`.
    pub fn eval_e(&self, x: &ElementE) -> Result<Phase, CharacterError> {
        match self.tag() {
            FieldTag::E => {
                let (v, u) = x.split_uniformizer()?;
                Ok(self.uniformizer_phase.times(v) + self.eval_unit_e(&u)?)
            }
            FieldTag::F => {
                let a = x.in_base_field().ok_or(CharacterError::FieldMismatch)?;
                self.eval_f(&a)
            }
        }
    }

    /// `mu(x)` for `x` in `F^x`.
    pub fn eval_f(&self, x: &ElementF) -> Result<Phase, CharacterError> {
        match self.tag() {
            FieldTag::E => self.eval_e(&self.field.embed(*x)),
            FieldTag::F => {
                let v = x.val()?;
                let u = x.shift(-v);
                Ok(self.uniformizer_phase.times(v) + self.eval_residue(self.group.residue_of_f(&u)?)?)
            }
        }
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        let unit_order = self
            .exponents
            .iter()
            .zip(self.group.invariants())
            .fold(1u64, |acc, (&e, &d)| acc.lcm(&(d / e.gcd(&d))));
        unit_order.lcm(&self.uniformizer_phase.order())
    }

    pub fn is_trivial(&self) -> bool {
        self.uniformizer_phase.is_zero() && self.exponents.iter().all(|&e| e == 0)
    }

    fn unit_part_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Conductor exponent `a(mu)`.
    pub fn conductor(&self) -> u32 {
        if self.unit_part_trivial() {
            return 0;
        }
        let ring = self.group.ring();
        for j in (1..self.depth()).rev() {
            for g in ring.layer_generators(j) {
                if !self.eval_residue(g).expect("layer generator is a unit").is_zero() {
                    return j + 1;
                }
            }
        }
        1
    }

    /// The same character expressed on the depth-`depth` quotient (`depth >= conductor`).
    pub fn at_depth(&self, depth: u32) -> Result<Self, CharacterError> {
        if depth == self.depth() {
            return Ok(self.clone());
        }
        if depth < self.conductor() {
            return Err(CharacterError::Invalid(format!(
                "depth {depth} is below the conductor {}",
                self.conductor()
            )));
        }
        let this = self.clone();
        Self::from_unit_values(self.field.clone(), self.tag(), depth, move |u| this.eval_unit_e(u), self.uniformizer_phase)
    }

    /// The representation at conductor depth, used for equality and display.
    pub fn canonical(&self) -> Self {
        self.at_depth(self.conductor()).expect("conductor depth is admissible")
    }

    fn common_depth(&self, other: &Self) -> Result<(Self, Self), CharacterError> {
        if self.tag() != other.tag() {
            return Err(CharacterError::FieldMismatch);
        }
        let d = self.depth().max(other.depth());
        Ok((self.at_depth(d)?, other.at_depth(d)?))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CharacterError> {
        let (a, b) = self.common_depth(other)?;
        let exps = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
        Self::from_group(a.field.clone(), a.group.clone(), exps, a.uniformizer_phase + b.uniformizer_phase)
    }

    pub fn pow(&self, k: i64) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(self.group.invariants())
            .map(|(&e, &d)| ((e as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect();
        Self::from_group(self.field.clone(), self.group.clone(), exps, self.uniformizer_phase.times(k))
            .expect("same group")
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// `x -> mu(conj(x))` for characters of `E^x`.
    pub fn galois_conjugate(&self) -> Result<Self, CharacterError> {
        if self.tag() == FieldTag::F {
            return Ok(self.clone());
        }
        let pi = self.field.uniformizer();
        let at_pi = self.eval_e(&pi.conj())?;
        let this = self.clone();
        Self::from_unit_values(self.field.clone(), FieldTag::E, self.depth(), move |u| this.eval_e(&u.conj()), at_pi)
    }

    /// Restriction of a character of `E^x` to `F^x`.
    pub fn restrict_to_f(&self) -> Result<Self, CharacterError> {
        if self.tag() == FieldTag::F {
            return Ok(self.clone());
        }
        let e = self.field.ramification();
        let depth_f = self.depth().div_ceil(e);
        let at_p = self.eval_f(&self.field.base().int(self.field.p() as i64))?;
        let this = self.clone();
        Self::from_unit_values(self.field.clone(), FieldTag::F, depth_f, move |u| this.eval_e(u), at_p)
    }

    pub fn conjugate_dual_sign(&self) -> Result<DualSign, CharacterError> {
        let r = self.restrict_to_f()?;
        if r.is_trivial() {
            return Ok(DualSign::Plus);
        }
        if r == Self::sgn(self.field.clone()) {
            return Ok(DualSign::Minus);
        }
        Ok(DualSign::None)
    }

    /// Deterministic extension of a character of `F^x` to `E^x`: lexicographically least unit
    /// exponents at depth `e(a - 1) + 1`, then the least admissible uniformizer value.
    pub fn extend_character(target: &Self) -> Result<Self, CharacterError> {
        if target.tag() != FieldTag::F {
            return Err(CharacterError::FieldMismatch);
        }
        let field = target.field.clone();
        let target = target.canonical();
        let a = target.depth();
        let e = field.ramification();
        let depth_e = if a == 0 { 0 } else { e * (a - 1) + 1 };
        let group_e = field.unit_group(FieldTag::E, depth_e)?;
        let group_f = field.unit_group(FieldTag::F, a)?;
        let f_units: Vec<ElementE> = group_f.basis_residues().iter().map(|&b| group_f.lift(&field, b)).collect();
        let wanted: Vec<Phase> = f_units.iter().map(|u| target.eval_unit_e(u)).collect::<Result<_, _>>()?;

        let dual_size: u64 = group_e.invariants().iter().product();
        if dual_size > MAX_DUAL_SEARCH {
            return Err(CharacterError::TableTooLarge(dual_size));
        }
        for exps in ExponentIter::new(group_e.invariants()) {
            let unit_char = Self::from_group(field.clone(), group_e.clone(), exps, Phase::ZERO)?;
            let mut ok = true;
            for (u, w) in f_units.iter().zip(&wanted) {
                if unit_char.eval_unit_e(u)? != *w {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let phi = unit_char.uniformizer_candidates(&target)?.into_iter().min().expect("e >= 1");
            let mu = Self { uniformizer_phase: phi, ..unit_char };
            return Ok(mu.canonical());
        }
        Err(CharacterError::NoExtension)
    }

    /// Uniformizer values `phi` making `mu(p) = target(p)`, given the unit part of `self`.
    fn uniformizer_candidates(&self, target: &Self) -> Result<Vec<Phase>, CharacterError> {
        let field = &self.field;
        let p = field.base().int(field.p() as i64);
        let want = target.eval_f(&p)?;
        let e = field.ramification() as i64;
        // p = uniformizer^e * (p / uniformizer^e)
        let rest = field.embed(p).checked_div(&field.uniformizer().pow(e)?)?;
        let unit_part = self.eval_unit_e(&rest)?;
        let base = (want - unit_part).ratio() / num_rational::Ratio::from_integer(e);
        Ok((0..e).map(|j| Phase::from_ratio(base + num_rational::Ratio::new(j, e))).collect())
    }

    /// Text form `F:depth:e1,e2,...:phase`.
    pub fn to_text(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("{}:{}:{}:{}", self.tag().letter(), self.depth(), exps.join(","), self.uniformizer_phase)
    }

    pub fn parse(field: Arc<QuadraticExtension>, text: &str) -> Result<Self, CharacterError> {
        let err = || CharacterError::Parse(text.to_string());
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(err());
        }
        let tag = match parts[0] {
            "F" => FieldTag::F,
            "E" => FieldTag::E,
            _ => return Err(err()),
        };
        let depth: u32 = parts[1].parse().map_err(|_| err())?;
        let exps: Vec<u64> = if parts[2].is_empty() {
            Vec::new()
        } else {
            parts[2].split(',').map(|s| s.trim().parse().map_err(|_| err())).collect::<Result<_, _>>()?
        };
        let phase: Phase = parts[3].parse().map_err(|_| err())?;
        Self::new(field, tag, depth, exps, phase)
    }
}

impl PartialEq for MultiplicativeCharacter {
    fn eq(&self, other: &Self) -> bool {
        if self.tag() != other.tag() || self.field.config() != other.field.config() {
            return false;
        }
        let (a, b) = (self.canonical(), other.canonical());
        a.depth() == b.depth() && a.exponents == b.exponents && a.uniformizer_phase == b.uniformizer_phase
    }
}

impl fmt::Display for MultiplicativeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for MultiplicativeCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

/// All exponent vectors `0 <= e_i < d_i` in lexicographic order (first coordinate slowest).
pub(crate) struct ExponentIter {
    bounds: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl ExponentIter {
    pub(crate) fn new(bounds: &[u64]) -> Self {
        Self { bounds: bounds.to_vec(), next: Some(vec![0; bounds.len()]) }
    }
}

impl Iterator for ExponentIter {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.bounds[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Characters of `E^x` (or `F^x`) with conductor at most `max_conductor` and order at most
/// `max_order`, optionally with prescribed restriction to `F^x`. Deterministic order.
pub fn enumerate_characters(
    field: &Arc<QuadraticExtension>,
    tag: FieldTag,
    max_conductor: u32,
    max_order: u64,
    restriction: Option<&MultiplicativeCharacter>,
) -> Result<Vec<MultiplicativeCharacter>, CharacterError> {
    let group = field.unit_group(tag, max_conductor)?;
    let dual_size: u64 = group.invariants().iter().product();
    if dual_size > MAX_DUAL_SEARCH {
        return Err(CharacterError::TableTooLarge(dual_size));
    }
    let target = match restriction {
        Some(t) if tag == FieldTag::E => Some(t.canonical()),
        Some(_) => return Err(CharacterError::FieldMismatch),
        None => None,
    };
    let mut out = Vec::new();
    for exps in ExponentIter::new(group.invariants()) {
        let unit_char = MultiplicativeCharacter::from_group(field.clone(), group.clone(), exps, Phase::ZERO)?;
        let unit_order = unit_char.order();
        if unit_order > max_order {
            continue;
        }
        let phases: Vec<Phase> = match &target {
            Some(t) => {
                let r = unit_char.restrict_to_f()?;
                let t_units = t.at_depth(r.depth().max(t.depth()))?;
                let r_units = r.at_depth(r.depth().max(t.depth()))?;
                if t_units.exponents != r_units.exponents {
                    continue;
                }
                let mut c = unit_char.uniformizer_candidates(t)?;
                c.sort();
                c
            }
            None => {
                let mut c = Vec::new();
                for n in 1..=max_order as i64 {
                    for k in 0..n {
                        if k.gcd(&n) == 1 || (k == 0 && n == 1) {
                            c.push(Phase::new(k, n));
                        }
                    }
                }
                c.sort();
                c
            }
        };
        for phi in phases {
            let mu = MultiplicativeCharacter { uniformizer_phase: phi, ..unit_char.clone() };
            if mu.order() <= max_order {
                out.push(mu);
            }
        }
    }
    Ok(out)
}
