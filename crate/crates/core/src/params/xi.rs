//! Parameters `xi` of regular semisimple classes with components `F_{+-i}` in `{F, E}`, and
//! the invariants `P_xi`, `Delta`, `D`, `D^d`, `C(xi)`, `Gamma(xi)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ParamError;
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// Distance below which two eigenvalues count as equal: `val >= precision - COLLISION_MARGIN`.
pub const COLLISION_MARGIN: i64 = 2;

/// One index `i` of a parameter.
#[derive(Clone, Copy, Debug)]
pub enum XiComponent {
    /// `F_{+-i} = F`, `F_i = E`, `y_i = y` with `N(y) = 1`.
    Dihedral { y: ElementE },
    /// `F_{+-i} = E`, `F_i = E x E`, `y_i = (a, conj(a)^-1)`.
    Split { a: ElementE },
}

impl XiComponent {
    pub fn degree(&self) -> usize {
        match self {
            XiComponent::Dihedral { .. } => 1,
            XiComponent::Split { .. } => 2,
        }
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(self, XiComponent::Dihedral { .. })
    }

    /// `phi(y_i)` for the `E`-algebra maps `phi: F_i -> Fbar`.
    pub fn eigenvalues(&self) -> Result<Vec<ElementE>, ParamError> {
        match self {
            XiComponent::Dihedral { y } => Ok(vec![*y]),
            XiComponent::Split { a } => Ok(vec![*a, a.conj().inv()?]),
        }
    }
}

/// An absolute value `p^exponent`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PPower {
    pub p: u64,
    pub exponent: i64,
}

impl PPower {
    pub fn one(p: u64) -> Self {
        Self { p, exponent: 0 }
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self { p: self.p, exponent: self.exponent + other.exponent }
    }

    pub fn pow(self, k: i64) -> Self {
        Self { p: self.p, exponent: self.exponent * k }
    }

    pub fn to_f64(self) -> f64 {
        (self.p as f64).powi(self.exponent as i32)
    }
}

impl fmt::Display for PPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.exponent)
    }
}

/// A polynomial over `E`, coefficients lowest degree first.
#[derive(Clone, Debug)]
pub struct PolynomialE {
    coeffs: Vec<ElementE>,
}

impl PolynomialE {
    pub fn from_roots(field: &QuadraticExtension, roots: &[ElementE]) -> Self {
        let mut coeffs = vec![field.e_one()];
        for r in roots {
            let mut next = vec![field.e_zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1] + *c;
                next[k] = next[k] - *c * *r;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ElementE] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &ElementE) -> ElementE {
        let mut acc = *self.coeffs.last().expect("nonempty");
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * *x + *c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].scale(self.coeffs[0].base().zero());
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        Self { coeffs: out }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }
}

/// A regular parameter `xi = (I, (F_{+-i}), (F_i), (y_i))`.
#[derive(Clone, Debug)]
pub struct XiParameter {
    field: Arc<QuadraticExtension>,
    components: Vec<XiComponent>,
}

impl XiParameter {
    pub fn empty(field: Arc<QuadraticExtension>) -> Self {
        Self { field, components: Vec::new() }
    }

    /// Checks norm one for dihedral components and regularity of the whole parameter.
    pub fn new(field: Arc<QuadraticExtension>, components: Vec<XiComponent>) -> Result<Self, ParamError> {
        for c in &components {
            match c {
                XiComponent::Dihedral { y } => {
                    if !(y.norm() - field.base().one()).is_zero() {
                        return Err(ParamError::InvalidComponent("dihedral eigenvalue must have norm one".into()));
                    }
                }
                XiComponent::Split { a } => {
                    if a.is_zero() {
                        return Err(ParamError::InvalidComponent("split component needs a nonzero element".into()));
                    }
                }
            }
        }
        let xi = Self { field, components };
        xi.check_regular()?;
        Ok(xi)
    }

    fn check_regular(&self) -> Result<(), ParamError> {
        let eig = self.eigenvalues()?;
        let limit = self.field.precision() as i64 - COLLISION_MARGIN;
        for (j, x) in eig.iter().enumerate() {
            for y in &eig[j + 1..] {
                let d = *x - *y;
                if d.is_zero() || d.val()? >= limit {
                    return Err(ParamError::NotRegular(format!("eigenvalues collide at valuation >= {limit}")));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<QuadraticExtension> {
        &self.field
    }

    pub fn components(&self) -> &[XiComponent] {
        &self.components
    }

    /// `d_xi = sum [F_{+-i} : F]`.
    pub fn degree(&self) -> usize {
        self.components.iter().map(XiComponent::degree).sum()
    }

    /// Positions of the components with `F_i` a field.
    pub fn dihedral_indices(&self) -> Vec<usize> {
        self.components.iter().enumerate().filter(|(_, c)| c.is_dihedral()).map(|(i, _)| i).collect()
    }

    pub fn dihedral_count(&self) -> usize {
        self.components.iter().filter(|c| c.is_dihedral()).count()
    }

    pub fn eigenvalues(&self) -> Result<Vec<ElementE>, ParamError> {
        let mut out = Vec::with_capacity(self.degree());
        for c in &self.components {
            out.extend(c.eigenvalues()?);
        }
        Ok(out)
    }

    /// `xi_1 ⊔ xi_2`, required to stay regular.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, ParamError> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().copied());
        Self::new(self.field.clone(), components)
    }

    pub fn with_component(&self, c: XiComponent) -> Result<Self, ParamError> {
        let mut components = self.components.clone();
        components.push(c);
        Self::new(self.field.clone(), components)
    }

    /// `P_xi(T) = prod_i prod_phi (T - phi(y_i))`.
    pub fn p_xi(&self) -> Result<PolynomialE, ParamError> {
        Ok(PolynomialE::from_roots(&self.field, &self.eigenvalues()?))
    }

    /// `Delta(xi) = |P_xi(1)|_E`.
    pub fn delta(&self) -> Result<PPower, ParamError> {
        let v = self.p_xi()?.eval(&self.field.e_one());
        if v.is_zero() {
            return Err(ParamError::SingularParameter("1 is an eigenvalue".into()));
        }
        Ok(PPower { p: self.field.p(), exponent: v.abs_exponent()? })
    }

    /// `D(xi) = D^{d_xi}(xi)`.
    pub fn d_function(&self) -> Result<PPower, ParamError> {
        self.d_d(self.degree())
    }

    /// `D^d(xi)`: the Weyl discriminant of `xi` placed in a unitary group of rank `d`, i.e.
    /// `|prod (1 - lambda_j / lambda_k)|_F` over ordered pairs of distinct eigenvalues of the
    /// multiset `{lambda_j} + {1 x (d - d_xi)}`.
    pub fn d_d(&self, d: usize) -> Result<PPower, ParamError> {
        let dxi = self.degree();
        if d < dxi {
            return Err(ParamError::InvalidComponent(format!("d = {d} below d_xi = {dxi}")));
        }
        let mut eig = self.eigenvalues()?;
        let one = self.field.e_one();
        if d > dxi {
            if eig.iter().any(|x| (*x - one).is_zero()) {
                return Err(ParamError::SingularParameter("1 is an eigenvalue".into()));
            }
            eig.extend(std::iter::repeat_n(one, d - dxi));
        }
        let mut prod = one;
        for (j, x) in eig.iter().enumerate() {
            for (k, y) in eig.iter().enumerate() {
                if j == k || (*x - *y).is_zero() {
                    continue;
                }
                prod = prod * (one - x.checked_div(y)?);
            }
        }
        let f = prod
            .in_base_field()
            .ok_or_else(|| ParamError::GaloisStabilityViolation("discriminant has an omega component".into()))?;
        Ok(PPower { p: self.field.p(), exponent: -f.val()? })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.components.iter().map(component_json).collect())
    }

    pub fn from_json(field: Arc<QuadraticExtension>, v: &Value) -> Result<Self, ParamError> {
        let items = v.as_array().ok_or_else(|| ParamError::Parse("parameter must be a JSON list".into()))?;
        let mut components = Vec::new();
        for item in items {
            let kind = item.get("kind").and_then(Value::as_str).unwrap_or_default();
            let c = match kind {
                "dihedral" => match item.get("z") {
                    Some(z) => {
                        let z = element_e_from_json(&field, z)?;
                        XiComponent::Dihedral { y: z.checked_div(&z.conj())? }
                    }
                    None => XiComponent::Dihedral { y: element_e_from_json(&field, field_of(item, "y")?)? },
                },
                "split" => XiComponent::Split { a: element_e_from_json(&field, field_of(item, "a")?)? },
                other => return Err(ParamError::Parse(format!("unknown component kind {other:?}"))),
            };
            components.push(c);
        }
        Self::new(field, components)
    }
}

fn field_of<'a>(item: &'a Value, key: &str) -> Result<&'a Value, ParamError> {
    item.get(key).ok_or_else(|| ParamError::Parse(format!("missing key {key:?}")))
}

fn component_json(c: &XiComponent) -> Value {
    match c {
        XiComponent::Dihedral { y } => serde_json::json!({"kind": "dihedral", "y": element_e_json(y)}),
        XiComponent::Split { a } => serde_json::json!({"kind": "split", "a": element_e_json(a)}),
    }
}

/// Digit form `{"val": v, "digits": [d0, d1, ...]}` of an element of `F`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DigitForm {
    pub val: i64,
    pub digits: Vec<u64>,
}

impl DigitForm {
    pub fn of(x: &ElementF) -> Self {
        Self { val: x.valuation().unwrap_or(0), digits: x.digits() }
    }

    pub fn to_element(&self, field: &QuadraticExtension) -> Result<ElementF, ParamError> {
        Ok(field.base().from_digits(self.val, &self.digits)?)
    }
}

pub fn element_e_json(x: &ElementE) -> Value {
    serde_json::json!({"a": DigitForm::of(&x.a()), "b": DigitForm::of(&x.b())})
}

/// Reads `{"a": .., "b": ..}` where each coordinate is a digit form or a plain integer.
pub fn element_e_from_json(field: &QuadraticExtension, v: &Value) -> Result<ElementE, ParamError> {
    let coord = |k: &str| -> Result<ElementF, ParamError> {
        if let Some(n) = field_of(v, k)?.as_i64() {
            return Ok(field.base().int(n));
        }
        let form: DigitForm = serde_json::from_value(field_of(v, k)?.clone()).map_err(|e| ParamError::Parse(e.to_string()))?;
        form.to_element(field)
    };
    Ok(field.elem(coord("a")?, coord("b")?))
}

/// An element of `C(xi) = {+-1}^{I*}`, one sign per dihedral component in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CClass {
    pub signs: Vec<i8>,
}

impl CClass {
    pub fn trivial(xi: &XiParameter) -> Self {
        Self { signs: vec![1; xi.dihedral_count()] }
    }

    pub fn new(signs: Vec<i8>) -> Result<Self, ParamError> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(ParamError::InvalidComponent("C(xi) coordinates are +-1".into()));
        }
        Ok(Self { signs })
    }

    /// Every element of `C(xi)` for `n` dihedral components.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1u64 << n)
            .map(|mask| Self { signs: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }

    /// `+1` on `C(xi)^1`, `-1` on `C(xi)^{-1}`.
    pub fn parity(&self) -> i8 {
        self.signs.iter().product()
    }

    /// The representative `c_i` in `F^x`: `1` or the fixed non-norm.
    pub fn representative(&self, field: &QuadraticExtension, i: usize) -> ElementF {
        if self.signs[i] == 1 {
            field.base().one()
        } else {
            field.non_norm()
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self { signs: self.signs.iter().chain(&other.signs).copied().collect() }
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut signs = self.signs.clone();
        signs[i] = -signs[i];
        Self { signs }
    }
}

/// An element of `Gamma(xi)`: `gamma_i` with `gamma_i / conj(gamma_i) = y_i` for each dihedral
/// component (split components carry no data).
#[derive(Clone, Debug)]
pub struct GammaClass {
    pub gammas: Vec<ElementE>,
}

impl GammaClass {
    /// `gamma_i = 1 + y_i` (or `delta` at `y_i = -1`).
    pub fn canonical(xi: &XiParameter) -> Result<Self, ParamError> {
        let field = xi.field();
        let gammas = xi
            .components()
            .iter()
            .filter_map(|c| match c {
                XiComponent::Dihedral { y } => Some(field.hilbert90_any(y)),
                XiComponent::Split { .. } => None,
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { gammas })
    }

    /// Checks `gamma_i conj(gamma_i)^-1 = y_i` for every dihedral component.
    pub fn new(xi: &XiParameter, gammas: Vec<ElementE>) -> Result<Self, ParamError> {
        let ys: Vec<ElementE> = xi
            .components()
            .iter()
            .filter_map(|c| match c {
                XiComponent::Dihedral { y } => Some(*y),
                XiComponent::Split { .. } => None,
            })
            .collect();
        if ys.len() != gammas.len() {
            return Err(ParamError::DegenerateGamma(format!("{} entries for {} dihedral components", gammas.len(), ys.len())));
        }
        for (g, y) in gammas.iter().zip(&ys) {
            let ratio = g.checked_div(&g.conj())?;
            if !ratio.approx_eq(y) {
                return Err(ParamError::DegenerateGamma("gamma / conj(gamma) differs from y".into()));
            }
        }
        Ok(Self { gammas })
    }

    /// Multiplies `gamma_i` by `f` in `F^x`; moves along the `C(xi)`-torsor when `f` is a non-norm.
    pub fn twisted(&self, i: usize, f: ElementF) -> Self {
        let mut gammas = self.gammas.clone();
        gammas[i] = gammas[i].scale(f);
        Self { gammas }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self { gammas: self.gammas.iter().chain(&other.gammas).copied().collect() }
    }
}

/// `w(d) = 2^{floor(d/2)} floor(d/2)!`.
pub fn w(d: u64) -> u64 {
    let h = d / 2;
    (1..=h).product::<u64>() << h
}
