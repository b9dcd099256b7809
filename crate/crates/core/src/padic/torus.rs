use std::collections::BTreeMap;

use super::modular::ppow;
use super::{ArithError, ElementE, QuadraticExtension};

/// Enumeration budget for `norm_one_reps`.
const MAX_RESIDUES: u64 = 4_000_000;

impl QuadraticExtension {
    /// One representative per coset of the norm-one torus modulo its congruence subgroup of the
    /// given depth, built as `z / conj(z)`. Sorted by residue key.
    pub fn norm_one_reps(&self, depth: u32) -> Result<Vec<ElementE>, ArithError> {
        if depth == 0 || depth + 2 > self.precision() {
            return Err(ArithError::PrecisionExhausted("norm_one_reps depth outside 1..=precision-2"));
        }
        let p = self.p();
        let (ka, kb) = ElementE::residue_shape(self.ramification() as u8, depth);
        let (ma, mb) = (ppow(p, ka), ppow(p, kb));
        if ma.saturating_mul(mb) > MAX_RESIDUES {
            return Err(ArithError::Domain(format!("depth {depth} exceeds the enumeration budget")));
        }
        let base = self.base();
        let pi = self.uniformizer();
        let mut found: BTreeMap<(u64, u64), ElementE> = BTreeMap::new();
        for b in 0..mb {
            for a in 0..ma {
                let z = self.elem(base.int(a as i64), base.int(b as i64));
                if z.val_lower_bound() > 0 || z.is_zero() {
                    continue;
                }
                for w in [z, z * pi] {
                    let x = w.checked_div(&w.conj())?;
                    let key = x.residue_key(depth)?;
                    found.entry(key).or_insert(x);
                }
            }
        }
        Ok(found.into_values().collect())
    }

    /// Exact integral representatives of `(O_E / uniformizer^depth)^x`, in residue order.
    pub fn unit_representatives(&self, depth: u32) -> Result<Vec<ElementE>, ArithError> {
        if depth == 0 {
            return Ok(vec![self.e_one()]);
        }
        let p = self.p();
        let (ka, kb) = ElementE::residue_shape(self.ramification() as u8, depth);
        let (ma, mb) = (ppow(p, ka), ppow(p, kb));
        if ma.saturating_mul(mb) > MAX_RESIDUES {
            return Err(ArithError::Domain(format!("depth {depth} exceeds the enumeration budget")));
        }
        let mut out = Vec::new();
        for b in 0..mb {
            for a in 0..ma {
                let unit = if self.is_ramified() { a % p != 0 } else { a % p != 0 || b % p != 0 };
                if unit {
                    out.push(self.e_int(a as i64, b as i64));
                }
            }
        }
        Ok(out)
    }

    /// Index of the depth-`depth` congruence subgroup in the norm-one torus.
    pub fn norm_one_index(&self, depth: u32) -> u64 {
        let p = self.p();
        if depth == 0 {
            return 1;
        }
        if self.is_ramified() {
            2 * ppow(p, depth / 2)
        } else {
            (p + 1) * ppow(p, depth - 1)
        }
    }
}
