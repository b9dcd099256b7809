//! The characters `epsilon^G_{phi,phi'}`, `epsilon^{G'}_{phi,phi'}`, the dichotomy and the
//! multiplicity pairing with its Fourier inversion over `S_phi x S_phi'`.

use num_complex::Complex64;
use serde::Serialize;

use super::parameter::{component_group, ComponentGroupElement, LParameter, SignCharacter};
use super::LanglandsError;
use crate::character::{AdditiveCharacter, MultiplicativeCharacter};
use crate::epsilon::epsilon_pair;

/// Allowed distance of a computed epsilon product from `+-1`.
pub const SIGN_TOLERANCE: f64 = 1e-6;

fn as_sign(z: Complex64, what: &str) -> Result<i8, LanglandsError> {
    for s in [1i8, -1] {
        if (z - Complex64::new(s as f64, 0.0)).norm() <= SIGN_TOLERANCE {
            return Ok(s);
        }
    }
    Err(LanglandsError::EpsilonNotSign { what: what.to_string(), value: format!("{z:.8}") })
}

/// `epsilon(mu x phi') = prod_k epsilon(mu mu'_k)^{l'_k}` as a complex number.
fn epsilon_against(mu: &MultiplicativeCharacter, phi_prime: &LParameter, psi: &AdditiveCharacter) -> Result<Complex64, LanglandsError> {
    let mut z = Complex64::new(1.0, 0.0);
    for e in phi_prime.entries() {
        let eps = epsilon_pair(mu, &e.mu, psi)?.value.value();
        z *= eps.powi(e.multiplicity as i32);
    }
    Ok(z)
}

fn check_parities(phi: &LParameter, phi_prime: &LParameter) -> Result<(), LanglandsError> {
    if (phi.dimension() + phi_prime.dimension()).is_multiple_of(2) {
        return Err(LanglandsError::ParityMismatch(format!(
            "dimensions {} and {} must have opposite parity",
            phi.dimension(),
            phi_prime.dimension()
        )));
    }
    Ok(())
}

/// `epsilon(phi x phi') = prod_{j,k} epsilon(mu_j mu'_k)^{l_j l'_k}`, required to be a sign.
pub fn epsilon_tensor(phi: &LParameter, phi_prime: &LParameter, psi: &AdditiveCharacter) -> Result<i8, LanglandsError> {
    let mut z = Complex64::new(1.0, 0.0);
    for e in phi.entries() {
        z *= epsilon_against(&e.mu, phi_prime, psi)?.powi(e.multiplicity as i32);
    }
    as_sign(z, "epsilon(phi x phi')")
}

/// `epsilon^G_{phi,phi'}(s) = epsilon(phi^{s=-1} x phi')`. A lift of `s` with `s^2 = 1` acts by
/// `-1` on an odd-dimensional subspace of `l_j mu_j` exactly when `s_j = -1`, so the value on
/// the `j`-th generator is `epsilon(mu_j x phi')`.
pub fn epsilon_character(phi: &LParameter, phi_prime: &LParameter, psi: &AdditiveCharacter) -> Result<SignCharacter, LanglandsError> {
    check_parities(phi, phi_prime)?;
    let mut generators = Vec::new();
    for j in phi.j_epsilon() {
        let mu = &phi.entries()[j].mu;
        generators.push(as_sign(epsilon_against(mu, phi_prime, psi)?, &format!("epsilon({} x phi')", mu.to_text()))?);
    }
    Ok(SignCharacter { generators })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GgpKind {
    AllZero,
    Distinguished { eps_g: SignCharacter, eps_gprime: SignCharacter },
}

#[derive(Clone, Debug, Serialize)]
pub struct GgpOutcome {
    #[serde(flatten)]
    pub kind: GgpKind,
    pub epsilon_product: i8,
    pub mu_g: i8,
}

fn check_mu_g(mu_g: i8) -> Result<(), LanglandsError> {
    if mu_g != 1 && mu_g != -1 {
        return Err(LanglandsError::InvalidParameter(format!("mu(G) = {mu_g} must be +-1")));
    }
    Ok(())
}

fn check_even_odd(phi: &LParameter, phi_prime: &LParameter) -> Result<(), LanglandsError> {
    if !phi.dimension().is_multiple_of(2) || phi_prime.dimension() % 2 != 1 {
        return Err(LanglandsError::ParityMismatch(format!(
            "need d even and d' odd, got {} and {}",
            phi.dimension(),
            phi_prime.dimension()
        )));
    }
    Ok(())
}

/// The dichotomy for `phi` of even and `phi'` of odd dimension.
pub fn ggp_dichotomy(phi: &LParameter, phi_prime: &LParameter, mu_g: i8, psi: &AdditiveCharacter) -> Result<GgpOutcome, LanglandsError> {
    check_mu_g(mu_g)?;
    check_even_odd(phi, phi_prime)?;
    let epsilon_product = epsilon_tensor(phi, phi_prime, psi)?;
    let kind = if epsilon_product != mu_g {
        GgpKind::AllZero
    } else {
        GgpKind::Distinguished {
            eps_g: epsilon_character(phi, phi_prime, psi)?,
            eps_gprime: epsilon_character(phi_prime, phi, psi)?,
        }
    };
    Ok(GgpOutcome { kind, epsilon_product, mu_g })
}

/// Characters and the sign entering the pairing, computed once.
#[derive(Clone, Debug, Serialize)]
pub struct PairingData {
    pub eps_g: SignCharacter,
    pub eps_gprime: SignCharacter,
    pub epsilon_product: i8,
    pub mu_g: i8,
}

impl PairingData {
    pub fn new(phi: &LParameter, phi_prime: &LParameter, mu_g: i8, psi: &AdditiveCharacter) -> Result<Self, LanglandsError> {
        check_mu_g(mu_g)?;
        check_even_odd(phi, phi_prime)?;
        Ok(Self {
            eps_g: epsilon_character(phi, phi_prime, psi)?,
            eps_gprime: epsilon_character(phi_prime, phi, psi)?,
            epsilon_product: epsilon_tensor(phi, phi_prime, psi)?,
            mu_g,
        })
    }

    /// `m(phi, s; phi', s') = eps^G(s) eps^{G'}(s') (1 + epsilon(phi x phi') mu(G)) / 2`.
    pub fn pairing(&self, s: &ComponentGroupElement, s_prime: &ComponentGroupElement) -> i64 {
        let factor = (1 + self.epsilon_product as i64 * self.mu_g as i64) / 2;
        self.eps_g.eval(s) as i64 * self.eps_gprime.eval(s_prime) as i64 * factor
    }

    /// `m(eta, eta') = |S|^-1 |S'|^-1 sum_{s,s'} m(phi, s; phi', s') eta(s) eta'(s')` for every
    /// pair of characters, rows indexed like `SignCharacter::all(rank S)`.
    pub fn fourier_inversion(&self) -> Result<MultiplicityMatrix, LanglandsError> {
        let n = self.eps_g.generators.len();
        let n_prime = self.eps_gprime.generators.len();
        let g = component_group_of_rank(n);
        let g_prime = component_group_of_rank(n_prime);
        let order = (g.len() * g_prime.len()) as i64;
        let chars = SignCharacter::all(n);
        let chars_prime = SignCharacter::all(n_prime);
        let mut rows = Vec::with_capacity(chars.len());
        for eta in &chars {
            let mut row = Vec::with_capacity(chars_prime.len());
            for eta_prime in &chars_prime {
                let mut total = 0i64;
                for s in &g {
                    for sp in &g_prime {
                        total += self.pairing(s, sp) * eta.eval(s) as i64 * eta_prime.eval(sp) as i64;
                    }
                }
                if total % order != 0 {
                    return Err(LanglandsError::InversionNotIntegral(format!("{total} / {order}")));
                }
                row.push(total / order);
            }
            rows.push(row);
        }
        Ok(MultiplicityMatrix { rows, characters: chars, characters_prime: chars_prime })
    }
}

fn component_group_of_rank(n: usize) -> Vec<ComponentGroupElement> {
    (0..1u64 << n)
        .map(|mask| ComponentGroupElement { bits: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect() })
        .collect()
}

/// Multiplicities recovered by Fourier inversion.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityMatrix {
    pub rows: Vec<Vec<i64>>,
    #[serde(skip)]
    pub characters: Vec<SignCharacter>,
    #[serde(skip)]
    pub characters_prime: Vec<SignCharacter>,
}

impl MultiplicityMatrix {
    pub fn total(&self) -> i64 {
        self.rows.iter().flatten().sum()
    }

    /// Whether every entry is `0` or `1` with at most one `1`.
    pub fn is_selection(&self) -> bool {
        self.rows.iter().flatten().all(|&m| m == 0 || m == 1) && self.total() <= 1
    }

    /// The pair of characters carrying the unit mass, if any.
    pub fn support(&self) -> Option<(SignCharacter, SignCharacter)> {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m != 0 {
                    return Some((self.characters[i].clone(), self.characters_prime[j].clone()));
                }
            }
        }
        None
    }
}

/// `m(phi, s; phi', s')` in one call.
pub fn multiplicity_pairing(
    phi: &LParameter,
    s: &ComponentGroupElement,
    phi_prime: &LParameter,
    s_prime: &ComponentGroupElement,
    mu_g: i8,
    psi: &AdditiveCharacter,
) -> Result<i64, LanglandsError> {
    let (g, gp) = (component_group(phi), component_group(phi_prime));
    if s.bits.len() != g.rank() || s_prime.bits.len() != gp.rank() {
        return Err(LanglandsError::InvalidParameter("component group element of the wrong rank".into()));
    }
    Ok(PairingData::new(phi, phi_prime, mu_g, psi)?.pairing(s, s_prime))
}
