//! The individual suites. Each one runs on a single `(p, ext)` and returns its items in a
//! fixed order; failures of individual computations become `Error` items.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{RunConfig, Status, Suite, VerificationReport};
use crate::character::{enumerate_characters, AdditiveCharacter, FieldTag, MultiplicativeCharacter};
use crate::epsilon::{
    epsilon_functional_equation, epsilon_gauss_sum, gamma_norm_form, s_mu_11_with_margin, tate_epsilon, verify_lemma_a, weil_constant,
    QuadraticFormF, SHELL_MARGIN,
};
use crate::langlands::{
    component_group, constants_table, epsilon_character, epsilon_tensor, ggp_dichotomy, z_phi, ConstantQuery, GgpKind, LParameter,
    PairingData,
};
use crate::padic::{ElementF, ExtKind, FieldConfig, QuadraticExtension};
use crate::params::{
    transfer_factor_twisted, transfer_factor_unitary, twisted_constants, twisted_formula, unitary_constants, verify_lemma_231,
    Lemma231Case, ScenarioGenerator,
};

const WEIL_FORM: &str = "Weil constant: multiplicativity, negation and order eight";
const WEIL_HYPERBOLIC: &str = "Weil constant: hyperbolic plane";
const WEIL_NORM_SCALING: &str = "Weil constant: scaling the norm form by lambda multiplies by sgn(lambda)";
const EPS_PLUS: &str = "epsilon factor: conjugate-orthogonal characters";
const EPS_DUAL: &str = "epsilon factor: conjugate-dual characters";
const EPS_CROSS: &str = "epsilon factor: Gauss sum against the functional equation";
const LEMMA_A: &str = "torus integral: proportional to epsilon by a positive real";
const LEMMA_231: &str = "transfer factors: descent to a smaller parameter";
const PARAMS: &str = "parameter space: Delta, D, rational constants, unit transfer factors, gamma classes";
const GGP_PAIR: &str = "epsilon characters: value at z, dichotomy and multiplicity pairing";
const GGP_CONSTANTS: &str = "constants c(phi, phi') and gamma^G";

struct Ctx<'a> {
    config: &'a RunConfig,
    suite: Suite,
    p: u64,
    ext: ExtKind,
}

impl Ctx<'_> {
    fn item(&self, check: &'static str, anchor: &'static str, item: String, result: Result<(bool, Value), String>) -> VerificationReport {
        let (status, detail, error) = match result {
            Ok((true, d)) => (Status::Pass, d, None),
            Ok((false, d)) => (Status::Fail, d, None),
            Err(e) => (Status::Error, Value::Null, Some(e)),
        };
        VerificationReport { suite: self.suite, check, anchor, p: self.p, ext: self.ext, item, status, detail, error, elapsed_ms: None }
    }

    fn error(&self, check: &'static str, anchor: &'static str, e: impl ToString) -> Vec<VerificationReport> {
        vec![self.item(check, anchor, "setup".into(), Err(e.to_string()))]
    }

    /// Seed depending on the run seed, the suite, the field and a stream label only.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let suite = Suite::EACH.iter().position(|&s| s == self.suite).unwrap_or(0) as u64;
        let ext = ExtKind::ALL.iter().position(|&e| e == self.ext).unwrap_or(0) as u64;
        ChaCha8Rng::seed_from_u64(self.seed(stream) ^ (suite << 40) ^ (self.p << 8) ^ (ext << 4))
    }

    fn seed(&self, stream: u64) -> u64 {
        self.config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9))
    }
}

pub(super) fn run(config: &RunConfig, suite: Suite, p: u64, ext: ExtKind) -> Vec<VerificationReport> {
    let ctx = Ctx { config, suite, p, ext };
    let field = match FieldConfig::new(p, config.precision, ext) {
        Ok(c) => QuadraticExtension::new(c),
        Err(e) => return ctx.error("field", "setup", e),
    };
    match suite {
        Suite::Weil => weil(&ctx, &field),
        Suite::Epsilon => epsilon(&ctx, &field),
        Suite::LemmaA => lemma_a(&ctx, &field),
        Suite::Lemma231 => lemma_231(&ctx, &field),
        Suite::Params => params(&ctx, &field),
        Suite::Ggp => ggp(&ctx, &field),
        Suite::All => Vec::new(),
    }
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Evenly spaced sample of at most `n` entries, in the original order.
fn spread<T: Clone>(list: &[T], n: usize) -> Vec<T> {
    if list.len() <= n {
        return list.to_vec();
    }
    (0..n).map(|i| list[i * list.len() / n].clone()).collect()
}

// ---------- Weil constants ----------

/// `u p^k` with `u` a unit below `p^2` and `k <= 2`, with random sign.
fn random_f(rng: &mut ChaCha8Rng, field: &QuadraticExtension) -> ElementF {
    let p = field.p() as i64;
    let u = loop {
        let u = rng.gen_range(1..p * p);
        if u % p != 0 {
            break u;
        }
    };
    let x = field.base().int(u).shift(rng.gen_range(0..=2));
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

fn random_form(rng: &mut ChaCha8Rng, field: &QuadraticExtension) -> Result<QuadraticFormF, String> {
    let n = rng.gen_range(1..=4);
    QuadraticFormF::new((0..n).map(|_| random_f(rng, field)).collect()).map_err(|e| e.to_string())
}

fn weil(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let tol = ctx.config.tolerance;
    let psi = AdditiveCharacter::standard(field.clone());
    let mut rng = ctx.rng(0);
    let mut out = Vec::new();

    let h = weil_constant(&QuadraticFormF::hyperbolic_plane(field.base()), &psi).map_err(|e| e.to_string());
    out.push(ctx.item("hyperbolic", WEIL_HYPERBOLIC, "H".into(), h.map(|g| ((g.value() - one()).norm() <= tol, json!({ "gamma": c_json(g.value()) })))));

    for i in 0..ctx.config.weil_forms {
        let result = (|| -> Result<(bool, Value), String> {
            let q = random_form(&mut rng, field)?;
            let q2 = random_form(&mut rng, field)?;
            let w = |f: &QuadraticFormF| weil_constant(f, &psi).map(|g| g.value()).map_err(|e| e.to_string());
            let (g, g2, gs, gn) = (w(&q)?, w(&q2)?, w(&q.direct_sum(&q2))?, w(&q.negate())?);
            let residuals = [(gs - g * g2).norm(), (g * gn - one()).norm(), (g.powi(8) - one()).norm()];
            Ok((
                residuals.iter().all(|&r| r <= tol),
                json!({
                    "q": q.to_string(),
                    "q2": q2.to_string(),
                    "gamma": c_json(g),
                    "multiplicativity": residuals[0],
                    "negation": residuals[1],
                    "order_eight": residuals[2],
                }),
            ))
        })();
        out.push(ctx.item("form_identities", WEIL_FORM, format!("form {i}"), result));
    }

    let base = gamma_norm_form(field, &psi, None);
    for i in 0..ctx.config.weil_lambdas {
        let lambda = random_f(&mut rng, field);
        let result = (|| -> Result<(bool, Value), String> {
            let g0 = base.clone().map_err(|e| e.to_string())?.value();
            let g = gamma_norm_form(field, &psi, Some(lambda)).map_err(|e| e.to_string())?.value();
            let s = field.sgn(&lambda).map_err(|e| e.to_string())?;
            let r = (g - g0 * f64::from(s)).norm();
            Ok((r <= tol, json!({ "lambda": lambda.to_string(), "sgn": s, "gamma": c_json(g), "residual": r })))
        })();
        out.push(ctx.item("norm_scaling", WEIL_NORM_SCALING, format!("lambda {i}"), result));
    }
    out
}

// ---------- epsilon factors ----------

struct Pools {
    all: Vec<MultiplicativeCharacter>,
    plus: Vec<MultiplicativeCharacter>,
    minus: Vec<MultiplicativeCharacter>,
}

fn pools(config: &RunConfig, field: &Arc<QuadraticExtension>, with_all: bool) -> Result<Pools, String> {
    let (c, o) = (config.max_conductor, config.max_order);
    let trivial = MultiplicativeCharacter::trivial(field.clone(), FieldTag::F);
    let sgn = MultiplicativeCharacter::sgn(field.clone());
    let e = |r: Option<&MultiplicativeCharacter>| enumerate_characters(field, FieldTag::E, c, o, r).map_err(|e| e.to_string());
    Ok(Pools { all: if with_all { e(None)? } else { Vec::new() }, plus: e(Some(&trivial))?, minus: e(Some(&sgn))? })
}

fn epsilon(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let tol = ctx.config.tolerance;
    let n = ctx.config.epsilon_samples;
    let psi = AdditiveCharacter::standard(field.clone());
    let pools = match pools(ctx.config, field, true) {
        Ok(p) => p,
        Err(e) => return ctx.error("characters", EPS_PLUS, e),
    };
    let mut out = Vec::new();
    for mu in spread(&pools.plus, n) {
        let r = tate_epsilon(&mu, &psi).map_err(|e| e.to_string()).map(|v| {
            let z = v.value.value();
            ((z - one()).norm() <= tol, json!({ "epsilon": c_json(z) }))
        });
        out.push(ctx.item("sign_plus_is_one", EPS_PLUS, mu.to_text(), r));
    }
    let dual: Vec<MultiplicativeCharacter> = pools.plus.iter().zip(&pools.minus).flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    for mu in spread(&dual, n) {
        let r = tate_epsilon(&mu, &psi).map_err(|e| e.to_string()).map(|v| {
            let z = v.value.value();
            ((z * z - one()).norm() <= tol, json!({ "epsilon": c_json(z) }))
        });
        out.push(ctx.item("conjugate_dual_square", EPS_DUAL, mu.to_text(), r));
    }
    for mu in spread(&pools.all, ctx.config.cross_check_samples) {
        let r = (|| -> Result<(bool, Value), String> {
            let g = epsilon_gauss_sum(&mu, &psi.on_e_delta()).map_err(|e| e.to_string())?;
            let f = epsilon_functional_equation(&mu, &psi).map_err(|e| e.to_string())?;
            let d = (g - f).norm();
            Ok((d <= tol, json!({ "gauss": c_json(g), "functional": c_json(f), "difference": d })))
        })();
        out.push(ctx.item("gauss_vs_functional", EPS_CROSS, mu.to_text(), r));
    }
    out
}

fn lemma_a(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let psi = AdditiveCharacter::standard(field.clone());
    let pools = match pools(ctx.config, field, false) {
        Ok(p) => p,
        Err(e) => return ctx.error("characters", LEMMA_A, e),
    };
    pools
        .minus
        .iter()
        .map(|mu| {
            let r = (|| -> Result<(bool, Value), String> {
                let o = verify_lemma_a(mu, &psi).map_err(|e| e.to_string())?;
                let wider = s_mu_11_with_margin(mu, SHELL_MARGIN + 1).map_err(|e| e.to_string())?.limit_at_s0;
                let drift = (wider - o.s_value).norm();
                let pass = o.pass && drift <= ctx.config.tolerance;
                let mut detail = serde_json::to_value(&o).map_err(|e| e.to_string())?;
                detail["margin_drift"] = json!(drift);
                Ok((pass, detail))
            })();
            ctx.item("ratio_positive", LEMMA_A, mu.to_text(), r)
        })
        .collect()
}

// ---------- parameter space ----------

fn lemma_231(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for (k, case) in Lemma231Case::ALL.into_iter().enumerate() {
        let mut gen = match ScenarioGenerator::new(field.clone(), ctx.seed(k as u64) ^ (ctx.p << 8)) {
            Ok(g) => g,
            Err(e) => return ctx.error("scenarios", LEMMA_231, e),
        };
        for i in 0..ctx.config.lemma_231_instances {
            let r = gen
                .scenario(case)
                .and_then(|s| verify_lemma_231(case, &s))
                .map_err(|e| e.to_string())
                .and_then(|o| Ok((o.pass, serde_json::to_value(&o).map_err(|e| e.to_string())?)));
            out.push(ctx.item("case", LEMMA_231, format!("{case} #{i}"), r));
        }
    }
    out
}

fn params(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let mut gen = match ScenarioGenerator::new(field.clone(), ctx.seed(0) ^ (ctx.p << 8)) {
        Ok(g) => g.with_max_components(3),
        Err(e) => return ctx.error("scenarios", PARAMS, e),
    };
    (0..ctx.config.params_samples)
        .map(|i| {
            let r = (|| -> Result<(bool, Value), crate::params::ParamError> {
                let s = gen.scenario(Lemma231Case::ALL[i % 4])?;
                let (xp, xm) = (&s.xi_plus, &s.xi_minus);
                let u = xp.disjoint_union(xm)?;
                let delta_mult = u.delta()? == xp.delta()?.mul(xm.delta()?);
                let mut d_relation = true;
                for extra in 0..3 {
                    d_relation &= u.d_d(u.degree() + extra)? == u.delta()?.pow(extra as i64).mul(u.d_function()?);
                }
                let rational = unitary_constants(xp, xm, &s.c, s.nu)?.iter().all(|c| c.in_base_field().is_some())
                    && twisted_constants(xp, xm, &s.gamma)?.iter().all(|c| c.in_base_field().is_some());
                let mu_plus = gen.character(Some(xm.degree()))?;
                let mu_minus_u = gen.character(Some(xp.degree()))?;
                let mu_minus_t = gen.character(Some(xp.degree() + 1))?;
                let tu = transfer_factor_unitary(xp, xm, &s.c, &mu_plus, &mu_minus_u, s.nu)?;
                let tt = transfer_factor_twisted(xp, xm, &s.gamma, &mu_plus, &mu_minus_t)?;
                let unit = (tu.value().norm() - 1.0).abs() <= ctx.config.tolerance && (tt.value().norm() - 1.0).abs() <= ctx.config.tolerance;
                let base = twisted_formula(xp, xm, &s.gamma, &mu_plus, &mu_minus_t)?;
                let z = gen.element();
                let mut norm_invariant = true;
                for k in 0..s.gamma.gammas.len() {
                    norm_invariant &= twisted_formula(xp, xm, &s.gamma.twisted(k, z.norm()), &mu_plus, &mu_minus_t)? == base;
                }
                let pass = delta_mult && d_relation && rational && unit && norm_invariant;
                Ok((
                    pass,
                    json!({
                        "d_plus": xp.degree(),
                        "d_minus": xm.degree(),
                        "delta": u.delta()?.to_string(),
                        "delta_multiplicative": delta_mult,
                        "d_relation": d_relation,
                        "constants_rational": rational,
                        "transfer_unitary": tu.exact().map(|p| p.to_string()),
                        "transfer_twisted": tt.exact().map(|p| p.to_string()),
                        "unit_modulus": unit,
                        "gamma_norm_invariant": norm_invariant,
                    }),
                ))
            })();
            ctx.item("invariants", PARAMS, format!("xi #{i}"), r.map_err(|e| e.to_string()))
        })
        .collect()
}

// ---------- component groups and epsilon characters ----------

const GGP_SHAPES: [(usize, usize); 10] = [(0, 1), (2, 1), (2, 3), (4, 1), (4, 3), (6, 5), (4, 5), (2, 5), (6, 1), (6, 3)];

fn ggp_pair(phi: &LParameter, phi_prime: &LParameter, psi: &AdditiveCharacter) -> Result<(bool, Value), crate::langlands::LanglandsError> {
    let eps = epsilon_tensor(phi, phi_prime, psi)?;
    let chi = epsilon_character(phi, phi_prime, psi)?;
    let chi_prime = epsilon_character(phi_prime, phi, psi)?;
    let at_z = chi.eval(&z_phi(phi)) == eps && chi_prime.eval(&z_phi(phi_prime)) == eps;
    let mut consistent = true;
    let mut outcomes = Vec::new();
    for mu_g in [1i8, -1] {
        let matrix = PairingData::new(phi, phi_prime, mu_g, psi)?.fourier_inversion()?;
        let out = ggp_dichotomy(phi, phi_prime, mu_g, psi)?;
        consistent &= matrix.is_selection();
        match &out.kind {
            GgpKind::AllZero => consistent &= eps != mu_g && matrix.total() == 0,
            GgpKind::Distinguished { eps_g, eps_gprime } => {
                consistent &= eps == mu_g
                    && matrix.total() == 1
                    && matrix.support() == Some((eps_g.clone(), eps_gprime.clone()))
                    && eps_g.eval(&z_phi(phi)) == mu_g
                    && eps_gprime.eval(&z_phi(phi_prime)) == mu_g;
            }
        }
        outcomes.push(json!({ "mu_g": mu_g, "outcome": out, "multiplicities": matrix.rows }));
    }
    Ok((
        at_z && consistent,
        json!({
            "phi": phi.to_json(),
            "phi_prime": phi_prime.to_json(),
            "s_phi_rank": component_group(phi).rank(),
            "s_phi_prime_rank": component_group(phi_prime).rank(),
            "epsilon": eps,
            "value_at_z": at_z,
            "outcomes": outcomes,
        }),
    ))
}

fn ggp(ctx: &Ctx<'_>, field: &Arc<QuadraticExtension>) -> Vec<VerificationReport> {
    let psi = AdditiveCharacter::standard(field.clone());
    let pools = match pools(ctx.config, field, false) {
        Ok(p) => p,
        Err(e) => return ctx.error("characters", GGP_PAIR, e),
    };
    let shapes: Vec<(usize, usize)> =
        GGP_SHAPES.into_iter().filter(|&(d, dp)| d <= pools.minus.len() && dp <= pools.plus.len()).collect();
    let mut rng = ctx.rng(0);
    let mut out = Vec::new();
    for i in 0..ctx.config.ggp_pairs {
        let (d, dp) = shapes[i % shapes.len()];
        let minus: Vec<MultiplicativeCharacter> = pools.minus.choose_multiple(&mut rng, d).cloned().collect();
        let plus: Vec<MultiplicativeCharacter> = pools.plus.choose_multiple(&mut rng, dp).cloned().collect();
        let r = LParameter::multiplicity_free(field.clone(), minus)
            .and_then(|phi| Ok((phi, LParameter::multiplicity_free(field.clone(), plus)?)))
            .and_then(|(phi, phi_prime)| ggp_pair(&phi, &phi_prime, &psi))
            .map_err(|e| e.to_string());
        out.push(ctx.item("pair", GGP_PAIR, format!("pair {i} ({d}, {dp})"), r));
    }

    let r = (|| -> Result<(bool, Value), String> {
        let tol = ctx.config.tolerance;
        let gamma = gamma_norm_form(field, &psi, None).map_err(|e| e.to_string())?.value();
        let sgn2 = field.sgn(&field.base().int(2)).map_err(|e| e.to_string())?;
        let mut modulus_ok = true;
        let mut table = Vec::new();
        for d in 0..4u32 {
            for dp in 0..4u32 {
                let mut queries = vec![ConstantQuery::CPair { d, d_prime: dp }];
                for quasi_split in [true, false] {
                    queries.push(ConstantQuery::GammaTe { d_plus: d, d_minus: dp, quasi_split });
                }
                for q in queries {
                    let v = constants_table(&psi, q).map_err(|e| e.to_string())?.value();
                    modulus_ok &= (v.norm() - 1.0).abs() <= tol;
                    table.push(json!({ "query": q, "value": c_json(v) }));
                }
            }
        }
        let two_odd = constants_table(&psi, ConstantQuery::CPair { d: 1, d_prime: 1 }).map_err(|e| e.to_string())?.value();
        let live = f64::from(sgn2) / gamma;
        let agree = (two_odd - live).norm() <= tol;
        Ok((modulus_ok && agree, json!({ "gamma_norm_form": c_json(gamma), "sgn_2": sgn2, "two_odd": c_json(two_odd), "table": table })))
    })();
    out.push(ctx.item("constants", GGP_CONSTANTS, "table".into(), r));
    out
}
