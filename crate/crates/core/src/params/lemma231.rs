//! Behaviour of the transfer-factor formulas when a component `zeta_a(lambda)` or
//! `zeta_b(lambda)` close to the identity is added to `xi+` or `xi-`.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::transfer::{sgn_power, sgn_rational, twisted_formula, unitary_formula};
use super::xi::{CClass, GammaClass, XiComponent, XiParameter};
use super::ParamError;
use crate::character::{enumerate_characters, FieldTag, MultiplicativeCharacter, Phase};
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// Number of consecutive `lambda = p^k` at which the limit cases are evaluated.
pub const STABILIZATION_WINDOW: i64 = 4;

/// `zeta_a(lambda) = (E, E x E, (e^{lambda a}, e^{-lambda conj(a)}))`.
pub fn zeta_a(field: &Arc<QuadraticExtension>, a: &ElementE, lambda: &ElementF) -> Result<XiParameter, ParamError> {
    if a.trace().is_zero() {
        return Err(ParamError::InvalidComponent("zeta_a needs Tr(a) != 0".into()));
    }
    let x = a.scale(*lambda).exp()?;
    XiParameter::new(field.clone(), vec![XiComponent::Split { a: x }])
}

/// `zeta_b(lambda) = (F, E, e^{lambda b})` for `b` of trace zero.
pub fn zeta_b(field: &Arc<QuadraticExtension>, b: &ElementE, lambda: &ElementF) -> Result<XiParameter, ParamError> {
    if b.is_zero() || !b.trace().is_zero() {
        return Err(ParamError::InvalidComponent("zeta_b needs a nonzero element of trace zero".into()));
    }
    let y = b.scale(*lambda).exp()?;
    XiParameter::new(field.clone(), vec![XiComponent::Dihedral { y }])
}

/// The eight identities of the lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Lemma231Case {
    AI,
    AII,
    AIII,
    AIV,
    BI,
    BII,
    C,
    D,
}

impl Lemma231Case {
    pub const ALL: [Lemma231Case; 8] = [
        Lemma231Case::AI,
        Lemma231Case::AII,
        Lemma231Case::AIII,
        Lemma231Case::AIV,
        Lemma231Case::BI,
        Lemma231Case::BII,
        Lemma231Case::C,
        Lemma231Case::D,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Lemma231Case::AI => "A_i",
            Lemma231Case::AII => "A_ii",
            Lemma231Case::AIII => "A_iii",
            Lemma231Case::AIV => "A_iv",
            Lemma231Case::BI => "B_i",
            Lemma231Case::BII => "B_ii",
            Lemma231Case::C => "C",
            Lemma231Case::D => "D",
        }
    }

    /// Cases stated as limits `lambda -> 0`.
    pub fn is_limit(&self) -> bool {
        matches!(self, Lemma231Case::BI | Lemma231Case::BII | Lemma231Case::C | Lemma231Case::D)
    }

    fn is_twisted(&self) -> bool {
        matches!(self, Lemma231Case::AIII | Lemma231Case::AIV | Lemma231Case::BII | Lemma231Case::D)
    }

    /// Whether the new component joins `xi+` (otherwise `xi-`).
    fn adds_to_plus(&self) -> bool {
        matches!(self, Lemma231Case::AI | Lemma231Case::AIII | Lemma231Case::BI | Lemma231Case::BII)
    }
}

impl fmt::Display for Lemma231Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Lemma231Case {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParamError::Parse(format!("unknown case {s:?}")))
    }
}

/// Inputs of one check: `xi+-`, `mu+-`, `nu`, `c` and `gamma` on `xi+ ⊔ xi-`, the elements
/// `a`, `b` and the class `c_b` (`+1` for norms, `-1` for the non-norm representative).
#[derive(Clone, Debug)]
pub struct Lemma231Scenario {
    pub xi_plus: XiParameter,
    pub xi_minus: XiParameter,
    pub mu_plus: MultiplicativeCharacter,
    pub mu_minus: MultiplicativeCharacter,
    pub nu: ElementF,
    pub c: CClass,
    pub gamma: GammaClass,
    pub a: ElementE,
    pub b: ElementE,
    pub c_b: i8,
}

impl Lemma231Scenario {
    fn field(&self) -> &Arc<QuadraticExtension> {
        self.xi_plus.field()
    }

    fn c_b_element(&self) -> ElementF {
        let field = self.field();
        if self.c_b == 1 {
            field.base().one()
        } else {
            field.non_norm()
        }
    }

    /// Checks the hypothesis of `case` on `mu+-`.
    pub fn check_hypotheses(&self, case: Lemma231Case) -> Result<(), ParamError> {
        let field = self.field();
        let d_plus = self.xi_plus.degree();
        let d_minus = self.xi_minus.degree();
        let restrict = |mu: &MultiplicativeCharacter| mu.restrict_to_f();
        let trivial_on_norms = |mu: &MultiplicativeCharacter| -> Result<bool, ParamError> {
            let r = restrict(mu)?;
            Ok(r == sgn_power(field, 0) || r == sgn_power(field, 1))
        };
        let ok = match case {
            Lemma231Case::AI | Lemma231Case::AII | Lemma231Case::AIII | Lemma231Case::AIV => {
                trivial_on_norms(&self.mu_plus)? && trivial_on_norms(&self.mu_minus)?
            }
            Lemma231Case::BI | Lemma231Case::BII => restrict(&self.mu_plus)? == sgn_power(field, d_minus),
            Lemma231Case::C => restrict(&self.mu_minus)? == sgn_power(field, d_plus),
            Lemma231Case::D => restrict(&self.mu_minus)? == sgn_power(field, d_plus + 1),
        };
        if !ok {
            return Err(ParamError::HypothesisViolation(format!(
                "case {case}: mu+ = {}, mu- = {} with d+ = {d_plus}, d- = {d_minus}",
                self.mu_plus.to_text(),
                self.mu_minus.to_text()
            )));
        }
        if self.c.signs.len() != self.xi_plus.dihedral_count() + self.xi_minus.dihedral_count() {
            return Err(ParamError::InvalidComponent("c does not match xi".into()));
        }
        if case.is_twisted() && self.gamma.gammas.len() != self.c.signs.len() {
            return Err(ParamError::DegenerateGamma("gamma does not match xi".into()));
        }
        Ok(())
    }

    /// First exponent `k` such that `lambda = p^k` is small enough for every character value
    /// and square class in the identity of `case` to be locally constant.
    pub fn first_exponent(&self, case: Lemma231Case) -> Result<i64, ParamError> {
        let field = self.field();
        let e = field.ramification() as i64;
        let mut needed = e.max(self.mu_plus.conductor() as i64).max(self.mu_minus.conductor() as i64);
        let one = field.e_one();
        for lam in self.xi_plus.eigenvalues()?.into_iter().chain(self.xi_minus.eigenvalues()?) {
            needed = needed.max((one - lam).val()? + e).max((one + lam).val()? + e);
        }
        needed += e;
        let element = if matches!(case, Lemma231Case::AI | Lemma231Case::AII | Lemma231Case::AIII | Lemma231Case::AIV) {
            self.a
        } else {
            self.b
        };
        let v = element.val()?;
        Ok(((needed - v + e - 1).div_euclid(e)).max(0))
    }
}

/// Result of checking one case on one scenario.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma231Outcome {
    pub case: Lemma231Case,
    pub exponents: Vec<i64>,
    pub lhs: Vec<Phase>,
    pub rhs: Vec<Phase>,
    pub pass: bool,
}

fn split_c(c: &CClass, n_plus: usize) -> (CClass, CClass) {
    (CClass { signs: c.signs[..n_plus].to_vec() }, CClass { signs: c.signs[n_plus..].to_vec() })
}

fn split_gamma(g: &GammaClass, n_plus: usize) -> (GammaClass, GammaClass) {
    (GammaClass { gammas: g.gammas[..n_plus].to_vec() }, GammaClass { gammas: g.gammas[n_plus..].to_vec() })
}

/// `sgn(delta^{-d} P_xi(1) / P_xi(-1))` for `d = d_xi`.
fn endpoint_sign(xi: &XiParameter) -> Result<Phase, ParamError> {
    let field = xi.field();
    let p = xi.p_xi()?;
    let one = field.e_one();
    let num = p.eval(&one);
    let den = p.eval(&-one);
    if num.is_zero() || den.is_zero() {
        return Err(ParamError::SingularParameter("+-1 is an eigenvalue".into()));
    }
    let x = field.delta().pow(-(xi.degree() as i64))? * num.checked_div(&den)?;
    sgn_rational(field, &x, "delta^-d P(1)/P(-1)")
}

fn base_value(s: &Lemma231Scenario, twisted: bool) -> Result<Phase, ParamError> {
    if twisted {
        twisted_formula(&s.xi_plus, &s.xi_minus, &s.gamma, &s.mu_plus, &s.mu_minus)
    } else {
        unitary_formula(&s.xi_plus, &s.xi_minus, &s.c, &s.mu_plus, &s.mu_minus, s.nu)
    }
}

/// Both sides of `case` at `lambda = p^k`.
fn evaluate_at(s: &Lemma231Scenario, case: Lemma231Case, k: i64) -> Result<(Phase, Phase), ParamError> {
    let field = s.field();
    let lambda = field.base().p_power(k);
    let twisted = case.is_twisted();
    let base = base_value(s, twisted)?;
    let n_plus = s.xi_plus.dihedral_count();
    if !case.is_limit() {
        let zeta = zeta_a(field, &s.a, &lambda)?;
        let x = s.a.scale(lambda).exp()?;
        let (xp, xm, mu) = if case.adds_to_plus() {
            (s.xi_plus.disjoint_union(&zeta)?, s.xi_minus.clone(), &s.mu_plus)
        } else {
            (s.xi_plus.clone(), s.xi_minus.disjoint_union(&zeta)?, &s.mu_minus)
        };
        let lhs = if twisted {
            twisted_formula(&xp, &xm, &s.gamma, &s.mu_plus, &s.mu_minus)?
        } else {
            unitary_formula(&xp, &xm, &s.c, &s.mu_plus, &s.mu_minus, s.nu)?
        };
        return Ok((lhs, base + mu.eval_e(&x)?));
    }

    let zeta = zeta_b(field, &s.b, &lambda)?;
    let c_b = s.c_b_element();
    let half = field.base().rational(1, 2)?;
    let gamma_b = s.b.scale(lambda * half).exp()?.scale(c_b);
    let (c_plus, c_minus) = split_c(&s.c, n_plus);
    let (g_plus, g_minus) = split_gamma(&s.gamma, n_plus);
    let c_new = CClass { signs: vec![s.c_b] };
    let g_new = GammaClass::new(&zeta, vec![gamma_b])?;
    let d_bar = (s.xi_plus.degree() + s.xi_minus.degree()) as i64;
    let minus_one_pow = |k: i64| if k % 2 == 0 { field.base().one() } else { -field.base().one() };

    let (lhs, rhs) = if case.adds_to_plus() {
        let xp = s.xi_plus.disjoint_union(&zeta)?;
        let lhs = if twisted {
            let g = g_plus.concat(&g_new).concat(&g_minus);
            twisted_formula(&xp, &s.xi_minus, &g, &s.mu_plus, &s.mu_minus)?
        } else {
            let c = c_plus.concat(&c_new).concat(&c_minus);
            unitary_formula(&xp, &s.xi_minus, &c, &s.mu_plus, &s.mu_minus, s.nu)?
        };
        (lhs, base + endpoint_sign(&s.xi_minus)?)
    } else {
        let xm = s.xi_minus.disjoint_union(&zeta)?;
        let extra = if twisted { minus_one_pow(d_bar) * c_b } else { minus_one_pow(d_bar + 1) * c_b * s.nu };
        let extra = Phase::from_sign(field.sgn(&extra)?);
        let lhs = if twisted {
            let g = s.gamma.concat(&g_new);
            twisted_formula(&s.xi_plus, &xm, &g, &s.mu_plus, &s.mu_minus)?
        } else {
            let c = s.c.concat(&c_new);
            unitary_formula(&s.xi_plus, &xm, &c, &s.mu_plus, &s.mu_minus, s.nu)?
        };
        (lhs, base + endpoint_sign(&s.xi_plus)? + extra)
    };
    Ok((lhs, rhs))
}

/// Checks `case` on `scenario` at `lambda = p^k`, `k = k0 .. k0 + STABILIZATION_WINDOW - 1`.
/// Exact cases compare both sides at every `k`; limit cases require the left side to be
/// constant over the window and equal to the closed form.
pub fn verify_lemma_231(case: Lemma231Case, scenario: &Lemma231Scenario) -> Result<Lemma231Outcome, ParamError> {
    scenario.check_hypotheses(case)?;
    let k0 = scenario.first_exponent(case)?;
    let limit = scenario.field().precision() as i64 - super::xi::COLLISION_MARGIN;
    let e = scenario.field().ramification() as i64;
    // the two eigenvalues of zeta_a differ by about lambda Tr(a)
    let depth = if case.is_limit() { scenario.b.val()? } else { e * scenario.a.trace().val()? };
    let last = k0 + STABILIZATION_WINDOW - 1;
    if e * last + depth >= e * limit {
        return Err(ParamError::StabilizationFailure(format!("window ends at k = {last}, beyond working precision")));
    }
    let mut exponents = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for k in k0..=last {
        let (l, r) = evaluate_at(scenario, case, k)?;
        exponents.push(k);
        lhs.push(l);
        rhs.push(r);
    }
    if case.is_limit() && lhs.windows(2).any(|w| w[0] != w[1]) {
        return Err(ParamError::StabilizationFailure(format!("case {case}: left side {lhs:?} over k = {k0}..={last}")));
    }
    let pass = lhs.iter().zip(&rhs).all(|(l, r)| l == r);
    Ok(Lemma231Outcome { case, exponents, lhs, rhs, pass })
}

/// Seeded source of admissible scenarios.
pub struct ScenarioGenerator {
    field: Arc<QuadraticExtension>,
    rng: ChaCha8Rng,
    characters: Vec<MultiplicativeCharacter>,
    anticyclotomic: Vec<MultiplicativeCharacter>,
    max_components: usize,
}

const CHARACTER_CONDUCTOR: u32 = 2;
const CHARACTER_ORDER: u64 = 6;
const DIGIT_RANGE: i64 = 81;

impl ScenarioGenerator {
    pub fn new(field: Arc<QuadraticExtension>, seed: u64) -> Result<Self, ParamError> {
        let characters = enumerate_characters(&field, FieldTag::E, CHARACTER_CONDUCTOR, CHARACTER_ORDER, None)?;
        let trivial = sgn_power(&field, 0);
        let anticyclotomic = enumerate_characters(&field, FieldTag::E, CHARACTER_CONDUCTOR, CHARACTER_ORDER, Some(&trivial))?;
        Ok(Self { field, rng: ChaCha8Rng::seed_from_u64(seed), characters, anticyclotomic, max_components: 2 })
    }

    /// Caps the number of components of each of `xi+` and `xi-`.
    pub fn with_max_components(mut self, n: usize) -> Self {
        self.max_components = n;
        self
    }

    fn random_f(&mut self, min_val: i64, max_val: i64) -> ElementF {
        let base = self.field.base();
        let p = self.field.p() as i64;
        loop {
            let u = self.rng.gen_range(1..DIGIT_RANGE);
            if u % p != 0 {
                return base.int(u).shift(self.rng.gen_range(min_val..=max_val));
            }
        }
    }

    fn random_e(&mut self) -> ElementE {
        let base = self.field.base();
        loop {
            let x = self.field.elem(base.int(self.rng.gen_range(0..DIGIT_RANGE)), base.int(self.rng.gen_range(0..DIGIT_RANGE)));
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Eigenvalues kept at distance at least `|uniformizer|^e` from `+-1`.
    fn tame(&self, x: &ElementE) -> Result<bool, ParamError> {
        let one = self.field.e_one();
        let e = self.field.ramification() as i64;
        let near = |y: ElementE| -> Result<bool, ParamError> { Ok(y.is_zero() || y.val()? > e) };
        Ok(!near(*x - one)? && !near(*x + one)? && x.val()? == 0)
    }

    fn random_component(&mut self) -> Result<XiComponent, ParamError> {
        loop {
            let z = self.random_e();
            let comp = if self.rng.gen_bool(0.5) {
                XiComponent::Dihedral { y: z.checked_div(&z.conj())? }
            } else {
                XiComponent::Split { a: z }
            };
            let mut ok = true;
            for x in comp.eigenvalues()? {
                ok &= self.tame(&x)?;
            }
            if ok {
                return Ok(comp);
            }
        }
    }

    fn random_xi(&mut self, n: usize, avoid: &XiParameter) -> Result<XiParameter, ParamError> {
        loop {
            let mut comps = Vec::new();
            for _ in 0..n {
                comps.push(self.random_component()?);
            }
            let Ok(xi) = XiParameter::new(self.field.clone(), comps) else { continue };
            if avoid.disjoint_union(&xi).is_ok() {
                return Ok(xi);
            }
        }
    }

    /// A character with `mu|F^x = sgn^k` built as `extend_character(sgn^k)` times a random
    /// character trivial on `F^x`, or any character from the pool.
    fn pick_character(&mut self, restriction: Option<usize>) -> Result<MultiplicativeCharacter, ParamError> {
        let pool: &[MultiplicativeCharacter] = if restriction.is_some() { &self.anticyclotomic } else { &self.characters };
        let twist = pool.choose(&mut self.rng).expect("character pool is nonempty").clone();
        match restriction {
            Some(k) => Ok(MultiplicativeCharacter::extend_character(&sgn_power(&self.field, k))?.try_mul(&twist)?),
            None => Ok(twist),
        }
    }

    /// A regular parameter with `n` components and eigenvalues kept away from `+-1`.
    pub fn parameter(&mut self, n: usize) -> Result<XiParameter, ParamError> {
        let empty = XiParameter::empty(self.field.clone());
        self.random_xi(n, &empty)
    }

    /// A character with restriction `sgn^k` to `F^x`, or unconstrained for `None`.
    pub fn character(&mut self, restriction: Option<usize>) -> Result<MultiplicativeCharacter, ParamError> {
        self.pick_character(restriction)
    }

    /// A nonzero element of `E` with small integer coordinates.
    pub fn element(&mut self) -> ElementE {
        self.random_e()
    }

    /// A scenario satisfying the hypotheses of `case`.
    pub fn scenario(&mut self, case: Lemma231Case) -> Result<Lemma231Scenario, ParamError> {
        let empty = XiParameter::empty(self.field.clone());
        let n_plus = self.rng.gen_range(0..=self.max_components);
        let n_minus = self.rng.gen_range(0..=self.max_components);
        let xi_plus = self.random_xi(n_plus, &empty)?;
        let xi_minus = self.random_xi(n_minus, &xi_plus)?;
        let (d_plus, d_minus) = (xi_plus.degree(), xi_minus.degree());
        let (mu_plus, mu_minus) = match case {
            Lemma231Case::AI | Lemma231Case::AII | Lemma231Case::AIII | Lemma231Case::AIV => {
                let kp = self.rng.gen_range(0..2);
                let km = self.rng.gen_range(0..2);
                (self.pick_character(Some(kp))?, self.pick_character(Some(km))?)
            }
            Lemma231Case::BI | Lemma231Case::BII => (self.pick_character(Some(d_minus))?, self.pick_character(None)?),
            Lemma231Case::C => (self.pick_character(None)?, self.pick_character(Some(d_plus))?),
            Lemma231Case::D => (self.pick_character(None)?, self.pick_character(Some(d_plus + 1))?),
        };
        let nu = self.random_f(0, 1);
        let n = xi_plus.dihedral_count() + xi_minus.dihedral_count();
        let c = CClass::new((0..n).map(|_| if self.rng.gen_bool(0.5) { 1 } else { -1 }).collect())?;
        let mut gamma = GammaClass::canonical(&xi_plus.disjoint_union(&xi_minus)?)?;
        for i in 0..n {
            let f = self.random_f(0, 1);
            gamma = gamma.twisted(i, f);
        }
        let a = loop {
            let a = self.random_e();
            if a.trace().valuation().is_some_and(|v| v <= 1) {
                break a;
            }
        };
        let b = self.field.omega().scale(self.random_f(0, 1));
        let c_b = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        Ok(Lemma231Scenario { xi_plus, xi_minus, mu_plus, mu_minus, nu, c, gamma, a, b, c_b })
    }
}
