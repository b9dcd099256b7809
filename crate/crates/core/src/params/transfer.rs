//! The functions `Delta_{mu+,mu-,nu}` (unitary) and `Delta_{mu+,mu-}` (twisted) on parameters.

use super::xi::{CClass, GammaClass, XiComponent, XiParameter};
use super::ParamError;
use crate::character::{FieldTag, MultiplicativeCharacter, Phase};
use crate::epsilon::UnitComplex;
use crate::padic::{ElementE, ElementF, QuadraticExtension};

/// `sgn_{E/F}^k` as a character of `F^x`.
pub(crate) fn sgn_power(field: &std::sync::Arc<QuadraticExtension>, k: usize) -> MultiplicativeCharacter {
    if k % 2 == 1 {
        MultiplicativeCharacter::sgn(field.clone())
    } else {
        MultiplicativeCharacter::trivial(field.clone(), FieldTag::F)
    }
}

fn check_restriction(mu: &MultiplicativeCharacter, k: usize, label: &str) -> Result<(), ParamError> {
    let want = sgn_power(mu.field(), k);
    if mu.restrict_to_f()? != want {
        return Err(ParamError::RestrictionMismatch(format!("{label} = {} must restrict to sgn^{k}", mu.to_text())));
    }
    Ok(())
}

/// Which of the two formulas is evaluated.
#[derive(Clone, Copy, Debug)]
enum Flavor<'a> {
    Unitary { c: &'a CClass, nu: ElementF },
    Twisted { gamma: &'a GammaClass },
}

/// `P(-1)` of a factor, `1` for the empty parameter.
fn p_at_minus_one(xi: &XiParameter) -> Result<ElementE, ParamError> {
    let field = xi.field();
    let v = xi.p_xi()?.eval(&-field.e_one());
    if v.is_zero() {
        return Err(ParamError::SingularParameter("-1 is an eigenvalue".into()));
    }
    Ok(v)
}

/// `sgn_{E/F}(x)` for `x` that must lie in `F^x`.
pub(crate) fn sgn_rational(field: &QuadraticExtension, x: &ElementE, what: &str) -> Result<Phase, ParamError> {
    let f = x.in_base_field().ok_or_else(|| ParamError::RationalityFailure(format!("{what} is not in F")))?;
    Ok(Phase::from_sign(field.sgn(&f)?))
}

/// The constants `C_i` of the formula for every dihedral component of `xi_minus`.
fn constants(xi_plus: &XiParameter, xi_minus: &XiParameter, flavor: Flavor<'_>) -> Result<Vec<ElementE>, ParamError> {
    let field = xi_plus.field();
    let xi = xi_plus.disjoint_union(xi_minus)?;
    let d = xi.degree() as i64;
    let eig = xi.eigenvalues()?;
    let p_minus_one = p_at_minus_one(&xi)?;
    let delta_pow = field.delta().pow(-d - 1)?;
    let one = field.e_one();
    let offset_dihedral = xi_plus.dihedral_count();
    let mut offset_eig = xi_plus.degree();
    let mut out = Vec::new();
    let mut dihedral_seen = 0usize;
    for comp in xi_minus.components() {
        let own = offset_eig;
        offset_eig += comp.degree();
        let XiComponent::Dihedral { y } = comp else { continue };
        let idx = offset_dihedral + dihedral_seen;
        dihedral_seen += 1;
        // P'(y_i) = prod over the other roots
        let mut deriv = one;
        for (k, lam) in eig.iter().enumerate() {
            if k != own {
                deriv = deriv * (*y - *lam);
            }
        }
        let mut c = -(delta_pow * deriv).checked_div(&p_minus_one)?;
        match flavor {
            Flavor::Unitary { c: cls, .. } => {
                c = c.scale(cls.representative(field, idx));
                if d % 2 == 0 {
                    c = c * y.pow(1 - d / 2)?;
                } else {
                    c = c * y.pow((1 - d) / 2)? * (one + *y);
                }
            }
            Flavor::Twisted { gamma } => {
                c = c.checked_div(&gamma.gammas[idx])?;
                if d % 2 == 0 {
                    c = c * y.pow(1 - d / 2)? * (one + *y);
                } else {
                    c = c * y.pow((3 - d) / 2)?;
                }
            }
        }
        out.push(c);
    }
    Ok(out)
}

fn evaluate(
    xi_plus: &XiParameter,
    xi_minus: &XiParameter,
    mu_plus: &MultiplicativeCharacter,
    mu_minus: &MultiplicativeCharacter,
    flavor: Flavor<'_>,
) -> Result<Phase, ParamError> {
    let field = xi_plus.field();
    let n = xi_plus.dihedral_count() + xi_minus.dihedral_count();
    match flavor {
        Flavor::Unitary { c, .. } if c.signs.len() != n => {
            return Err(ParamError::InvalidComponent(format!("C(xi) class has {} signs for {n} components", c.signs.len())))
        }
        Flavor::Twisted { gamma } if gamma.gammas.len() != n => {
            return Err(ParamError::DegenerateGamma(format!("{} entries for {n} components", gamma.gammas.len())))
        }
        _ => {}
    }
    let mut phase = mu_minus.eval_e(&p_at_minus_one(xi_minus)?)? + mu_plus.eval_e(&p_at_minus_one(xi_plus)?)?;
    for c in constants(xi_plus, xi_minus, flavor)? {
        let arg = match flavor {
            Flavor::Unitary { nu, .. } => c.scale(nu),
            Flavor::Twisted { .. } => c,
        };
        phase += sgn_rational(field, &arg, "C_i")?;
    }
    Ok(phase)
}

/// The unitary transfer factor without the restriction hypotheses on `mu+-`.
pub fn unitary_formula(
    xi_plus: &XiParameter,
    xi_minus: &XiParameter,
    c: &CClass,
    mu_plus: &MultiplicativeCharacter,
    mu_minus: &MultiplicativeCharacter,
    nu: ElementF,
) -> Result<Phase, ParamError> {
    if nu.is_zero() {
        return Err(ParamError::InvalidComponent("nu must be nonzero".into()));
    }
    evaluate(xi_plus, xi_minus, mu_plus, mu_minus, Flavor::Unitary { c, nu })
}

/// The twisted transfer factor without the restriction hypotheses on `mu+-`.
pub fn twisted_formula(
    xi_plus: &XiParameter,
    xi_minus: &XiParameter,
    gamma: &GammaClass,
    mu_plus: &MultiplicativeCharacter,
    mu_minus: &MultiplicativeCharacter,
) -> Result<Phase, ParamError> {
    evaluate(xi_plus, xi_minus, mu_plus, mu_minus, Flavor::Twisted { gamma })
}

/// `Delta_{mu+,mu-,nu}(xi+, xi-, c)`; needs `mu+|F = sgn^{d-}` and `mu-|F = sgn^{d+}`.
pub fn transfer_factor_unitary(
    xi_plus: &XiParameter,
    xi_minus: &XiParameter,
    c: &CClass,
    mu_plus: &MultiplicativeCharacter,
    mu_minus: &MultiplicativeCharacter,
    nu: ElementF,
) -> Result<UnitComplex, ParamError> {
    check_restriction(mu_plus, xi_minus.degree(), "mu+")?;
    check_restriction(mu_minus, xi_plus.degree(), "mu-")?;
    Ok(UnitComplex::from_phase(unitary_formula(xi_plus, xi_minus, c, mu_plus, mu_minus, nu)?))
}

/// `Delta_{mu+,mu-}(xi+, xi-, gamma)`; needs `mu+|F = sgn^{d-}` and `mu-|F = sgn^{d+ + 1}`.
pub fn transfer_factor_twisted(
    xi_plus: &XiParameter,
    xi_minus: &XiParameter,
    gamma: &GammaClass,
    mu_plus: &MultiplicativeCharacter,
    mu_minus: &MultiplicativeCharacter,
) -> Result<UnitComplex, ParamError> {
    check_restriction(mu_plus, xi_minus.degree(), "mu+")?;
    check_restriction(mu_minus, xi_plus.degree() + 1, "mu-")?;
    Ok(UnitComplex::from_phase(twisted_formula(xi_plus, xi_minus, gamma, mu_plus, mu_minus)?))
}

/// The constants `C_i` of formula (1), exposed for the rationality invariant.
pub fn unitary_constants(xi_plus: &XiParameter, xi_minus: &XiParameter, c: &CClass, nu: ElementF) -> Result<Vec<ElementE>, ParamError> {
    constants(xi_plus, xi_minus, Flavor::Unitary { c, nu })
}

/// The constants `C_i` of formula (2).
pub fn twisted_constants(xi_plus: &XiParameter, xi_minus: &XiParameter, gamma: &GammaClass) -> Result<Vec<ElementE>, ParamError> {
    constants(xi_plus, xi_minus, Flavor::Twisted { gamma })
}
