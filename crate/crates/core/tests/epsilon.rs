use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use localfactors::character::{enumerate_characters, AdditiveCharacter, FieldTag, MultiplicativeCharacter, Phase};
use localfactors::epsilon::*;
use localfactors::padic::{ExtKind, FieldConfig, QuadraticExtension};

fn field(p: u64, ext: ExtKind) -> Arc<QuadraticExtension> {
    QuadraticExtension::new(FieldConfig::new(p, 16, ext).unwrap())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn unit(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * phase)
}

fn sign_characters(e: &Arc<QuadraticExtension>, restriction: &MultiplicativeCharacter) -> Vec<MultiplicativeCharacter> {
    enumerate_characters(e, FieldTag::E, 2, 12, Some(restriction)).unwrap()
}

// ---------- Weil constants ----------

/// `p^k p^-j sum_{t mod p^j} exp(2 pi i {a t^2 / (2 p^2k)})` for a unit integer `a`, `psi` standard.
fn coordinate_oracle(p: u64, a: i64, k: u32, j: u32) -> Complex64 {
    let modulus = (p as i128).pow(2 * k);
    let inv2 = (modulus + 1) / 2;
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 0..(p as i128).pow(j) {
        let num = ((a as i128 * t * t % modulus) * inv2).rem_euclid(modulus);
        sum += unit(num as f64 / modulus as f64);
    }
    sum * (p as f64).powi(k as i32) / (p as f64).powi(j as i32)
}

#[test]
fn one_dimensional_integral_matches_direct_sum() {
    let e = field(5, ExtKind::Unramified);
    let psi = AdditiveCharacter::standard(e.clone());
    for a in [1i64, 2, 3, 4, 7] {
        for k in 1..=3u32 {
            let q = QuadraticFormF::from_integers(e.base(), &[a]).unwrap();
            let got = weil_lattice_integral(k as i64, &q, &psi).unwrap();
            let want = coordinate_oracle(5, a, k, 2 * k + 1);
            assert!(close(got, want, 1e-9), "a={a} k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn small_lattice_integral_is_its_volume() {
    let e = field(5, ExtKind::RamifiedP);
    let psi = AdditiveCharacter::standard(e.clone());
    let q = QuadraticFormF::from_integers(e.base(), &[1, 3]).unwrap();
    let got = weil_lattice_integral(0, &q, &psi).unwrap();
    assert!(close(got, Complex64::new(1.0, 0.0), 1e-12));
}

#[test]
fn hyperbolic_plane_constant_is_one() {
    for p in [3u64, 5, 7] {
        let e = field(p, ExtKind::Unramified);
        for n in [0i64, 1, -1] {
            let psi = AdditiveCharacter::with_conductor(e.clone(), n);
            let g = weil_constant(&QuadraticFormF::hyperbolic_plane(e.base()), &psi).unwrap();
            assert!(close(g.value(), Complex64::new(1.0, 0.0), 1e-9));
            assert_eq!(g.exact(), Some(Phase::ZERO));
        }
    }
}

#[test]
fn unramified_norm_form_matches_two_dimensional_sum() {
    let p = 5u64;
    let e = field(p, ExtKind::Unramified);
    let psi = AdditiveCharacter::standard(e.clone());
    let u = e.non_residue() as i128;
    let k = 3u32;
    let modulus = (p as i128).pow(2 * k);
    let inv2 = (modulus + 1) / 2;
    let mut sum = Complex64::new(0.0, 0.0);
    let side = (p as i128).pow(2 * k);
    for x in 0..side {
        for y in 0..side {
            let v = ((x * x - u * y * y).rem_euclid(modulus) * inv2).rem_euclid(modulus);
            sum += unit(v as f64 / modulus as f64);
        }
    }
    let want = sum / sum.norm();
    let got = gamma_norm_form(&e, &psi, None).unwrap();
    assert!(close(got.value(), want, 1e-9), "{} vs {want}", got.value());
}

#[test]
fn weil_constants_are_eighth_roots_and_invert_under_negation() {
    for p in [3u64, 5, 7] {
        let e = field(p, ExtKind::Unramified);
        let psi = AdditiveCharacter::standard(e.clone());
        for coeffs in [[1i64, 1], [1, 3], [2, 5], [p as i64, 1], [p as i64 * 2, 3]] {
            let q = QuadraticFormF::from_integers(e.base(), &coeffs).unwrap();
            let g = weil_constant(&q, &psi).unwrap();
            let gm = weil_constant(&q.negate(), &psi).unwrap();
            assert!(close(g.value() * gm.value(), Complex64::new(1.0, 0.0), 1e-9));
            assert!(close(g.value().powi(8), Complex64::new(1.0, 0.0), 1e-8));
            assert!(g.exact().is_some());
        }
    }
}

#[test]
fn norm_form_twist_law() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let psi = AdditiveCharacter::standard(e.clone());
            let g = gamma_norm_form(&e, &psi, None).unwrap();
            assert!(close(g.value().powi(8), Complex64::new(1.0, 0.0), 1e-8));
            for lam in [2i64, 3, 5, 6, 10, 15, -1, -3] {
                let l = e.base().int(lam);
                let twisted = gamma_norm_form(&e, &psi, Some(l)).unwrap();
                let sign = f64::from(e.sgn(&l).unwrap());
                assert!(close(twisted.value(), g.value() * sign, 1e-9), "p={p} {ext} lambda={lam}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weil_constant_is_multiplicative(a in 1i64..50, b in 1i64..50, c in 1i64..50, ext_ix in 0usize..3) {
        let e = field(5, ExtKind::ALL[ext_ix]);
        let psi = AdditiveCharacter::standard(e.clone());
        let q1 = QuadraticFormF::from_integers(e.base(), &[a]).unwrap();
        let q2 = QuadraticFormF::from_integers(e.base(), &[b, -c]).unwrap();
        let g1 = weil_constant(&q1, &psi).unwrap();
        let g2 = weil_constant(&q2, &psi).unwrap();
        let g12 = weil_constant(&q1.direct_sum(&q2), &psi).unwrap();
        prop_assert!(close(g12.value(), g1.value() * g2.value(), 1e-8));
    }

    #[test]
    fn weil_integral_stable_past_threshold(a in 1i64..200, shift in 0i64..3) {
        let e = field(3, ExtKind::Unramified);
        let psi = AdditiveCharacter::standard(e.clone());
        let q = QuadraticFormF::from_integers(e.base(), &[a, 1]).unwrap();
        let va = e.base().int(a).val().unwrap();
        let k = (va + 2) / 2 + 1 + shift;
        let x = weil_lattice_integral(k, &q, &psi).unwrap();
        let y = weil_lattice_integral(k + 1, &q, &psi).unwrap();
        prop_assert!(close(x / x.norm(), y / y.norm(), 1e-9));
    }

    #[test]
    fn norm_form_twist_by_random_lambda(num in 1i64..2000, neg in any::<bool>(), ext_ix in 0usize..3) {
        let e = field(3, ExtKind::ALL[ext_ix]);
        let psi = AdditiveCharacter::standard(e.clone());
        let lam = e.base().int(if neg { -num } else { num });
        let g = gamma_norm_form(&e, &psi, None).unwrap();
        let t = gamma_norm_form(&e, &psi, Some(lam)).unwrap();
        prop_assert!(close(t.value(), g.value() * f64::from(e.sgn(&lam).unwrap()), 1e-9));
    }
}

// ---------- L-factors and zeta integrals ----------

#[test]
fn l_factor_values() {
    let e = field(5, ExtKind::Unramified);
    let q = 25.0f64;
    let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::E);
    let l = l_factor(&triv, 1.0).unwrap();
    assert!(close(l, Complex64::new(1.0 / (1.0 - 1.0 / q), 0.0), 1e-12));
    let quad = MultiplicativeCharacter::unramified(e.clone(), FieldTag::E, Phase::HALF);
    let l = l_factor(&quad, 0.5).unwrap();
    assert!(close(l, Complex64::new(1.0 / (1.0 + q.powf(-0.5)), 0.0), 1e-12));
    assert!(matches!(l_factor(&triv, 0.0), Err(EpsilonError::Pole(_))));
    let ram = enumerate_characters(&e, FieldTag::E, 1, 24, None).unwrap().into_iter().find(|m| m.conductor() == 1).unwrap();
    assert_eq!(l_factor(&ram, 0.3).unwrap(), Complex64::new(1.0, 0.0));
}

#[test]
fn phi_nn_integral_is_independent_of_s() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let chars = enumerate_characters(&e, FieldTag::E, 2, 6, None).unwrap();
            for mu in chars.iter().step_by(5).take(12) {
                let a = mu.conductor() as i64;
                let ee = e.ramification() as i64;
                let n = ((a + ee - 1) / ee).max(1);
                for (nn, np) in [(n, n), (n + 1, n)] {
                    for s in [0.25, 0.5, 1.5] {
                        let z = zeta_integral(TestFunction::PhiNN { n: nn, n_prime: np }, mu, s).unwrap();
                        let want = (p as f64).powi(-(nn + np) as i32);
                        assert!(close(z, Complex64::new(want, 0.0), 1e-12), "{} N={nn},{np}: {z}", mu.to_text());
                    }
                }
            }
        }
    }
}

#[test]
fn unit_annulus_of_trivial_character_is_unit_volume() {
    for ext in ExtKind::ALL {
        let e = field(3, ext);
        let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::E);
        let z = zeta_integral(TestFunction::Annulus { val: 0 }, &triv, 0.7).unwrap();
        let q = e.q_e() as f64;
        assert!(close(z, Complex64::new(1.0 - 1.0 / q, 0.0), 1e-12));
    }
}

#[test]
fn annulus_integral_matches_geometric_term() {
    let e = field(5, ExtKind::Unramified);
    let q = 25.0f64;
    for phase in [Phase::HALF, Phase::new(1, 3), Phase::new(3, 8)] {
        let mu = MultiplicativeCharacter::unramified(e.clone(), FieldTag::E, phase);
        for v in [-2i64, 0, 1, 3] {
            let s = 0.6;
            let z = zeta_integral(TestFunction::Annulus { val: v }, &mu, s).unwrap();
            let want = phase.to_complex().powi(v as i32) * (1.0 - 1.0 / q) * q.powf(-(v as f64) * s);
            assert!(close(z, want, 1e-12), "{v}: {z} vs {want}");
        }
        let ball = zeta_integral(TestFunction::Ball { radius: 2 }, &mu, 0.6).unwrap();
        let shells: Complex64 = (2..60).map(|v| zeta_integral(TestFunction::Annulus { val: v }, &mu, 0.6).unwrap()).sum();
        assert!(close(ball, shells, 1e-9));
    }
}

// ---------- Tate epsilon ----------

#[test]
fn gauss_sum_of_unramified_character() {
    let e = field(5, ExtKind::Unramified);
    let psi = AdditiveCharacter::standard(e.clone());
    let n_prime = psi.on_e_delta().conductor().unwrap();
    let phase = Phase::new(1, 5);
    let mu = MultiplicativeCharacter::unramified(e.clone(), FieldTag::E, phase);
    let eps = tate_epsilon(&mu, &psi).unwrap();
    assert!(close(eps.value.value(), phase.times(-n_prime).to_complex(), 1e-12));
}

/// `epsilon` from the functional equation for the balls `uniformizer^r O_E`, whose Fourier
/// transform is `C q^-r 1_{uniformizer^(n'-r) O_E}` with `C = q^(n'/2)` (double transform).
fn ball_oracle(mu: &MultiplicativeCharacter, n_prime: i64, r: i64) -> Complex64 {
    let q = mu.field().q_e() as f64;
    let zeta_ball = |phase: Complex64, radius: i64| (1.0 - 1.0 / q) * (phase * q.powf(-0.5)).powi(radius as i32) / (1.0 - phase * q.powf(-0.5));
    let mu_pi = mu.uniformizer_phase().to_complex();
    let c = q.powf(n_prime as f64 / 2.0);
    let lhs = c * q.powf(-(r as f64)) * zeta_ball(mu_pi.inv(), n_prime - r);
    let rhs = zeta_ball(mu_pi, r);
    let l_ratio = (1.0 - mu_pi.inv() * q.powf(-0.5)) / (1.0 - mu_pi * q.powf(-0.5));
    lhs / rhs * l_ratio
}

#[test]
fn unramified_epsilon_matches_functional_equation_oracle() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            for n in [0i64, 1, 2] {
                let psi = AdditiveCharacter::with_conductor(e.clone(), n);
                let n_prime = psi.on_e_delta().conductor().unwrap();
                for phase in [Phase::HALF, Phase::new(1, 3), Phase::new(2, 7)] {
                    let mu = MultiplicativeCharacter::unramified(e.clone(), FieldTag::E, phase);
                    let eps = tate_epsilon(&mu, &psi).unwrap().value.value();
                    let a = ball_oracle(&mu, n_prime, 0);
                    let b = ball_oracle(&mu, n_prime, 1);
                    assert!(close(a, b, 1e-10));
                    assert!(close(eps, a, 1e-9), "p={p} {ext} n={n}: {eps} vs {a}");
                }
            }
        }
    }
}

#[test]
fn sign_plus_characters_have_epsilon_one() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let psi = AdditiveCharacter::standard(e.clone());
            let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::F);
            for mu in sign_characters(&e, &triv) {
                let eps = tate_epsilon(&mu, &psi).unwrap();
                assert!(close(eps.value.value(), Complex64::new(1.0, 0.0), 1e-8), "{}: {}", mu.to_text(), eps.value.value());
            }
        }
    }
}

#[test]
fn conjugate_dual_characters_have_epsilon_squared_one() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let psi = AdditiveCharacter::standard(e.clone());
            let sgn = MultiplicativeCharacter::sgn(e.clone());
            for mu in sign_characters(&e, &sgn) {
                let eps = tate_epsilon(&mu, &psi).unwrap().value.value();
                assert!(close(eps * eps, Complex64::new(1.0, 0.0), 1e-8), "{}", mu.to_text());
            }
        }
    }
}

#[test]
fn cross_check_sweep_of_one_hundred_characters() {
    let mut count = 0;
    for (p, ext) in [(3u64, ExtKind::Unramified), (5, ExtKind::RamifiedP), (3, ExtKind::RamifiedUp), (5, ExtKind::Unramified)] {
        let e = field(p, ext);
        let psi = AdditiveCharacter::with_conductor(e.clone(), 1);
        for mu in enumerate_characters(&e, FieldTag::E, 2, 12, None).unwrap().into_iter().step_by(3).take(25) {
            let v = tate_epsilon(&mu, &psi).unwrap();
            assert!((v.gauss - v.functional).norm() <= CROSS_CHECK_TOLERANCE);
            assert!((v.gauss.norm() - 1.0).abs() <= 1e-8);
            count += 1;
        }
    }
    assert_eq!(count, 100);
}

#[test]
fn epsilon_pair_properties() {
    let e = field(5, ExtKind::RamifiedUp);
    let psi = AdditiveCharacter::standard(e.clone());
    let chars = enumerate_characters(&e, FieldTag::E, 2, 4, None).unwrap();
    let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::E);
    for mu in chars.iter().take(8) {
        let single = tate_epsilon(mu, &psi).unwrap().value.value();
        assert!(close(epsilon_pair(mu, &triv, &psi).unwrap().value.value(), single, 1e-12));
        for nu in chars.iter().skip(3).take(4) {
            let x = epsilon_pair(mu, nu, &psi).unwrap().value.value();
            let y = epsilon_pair(nu, mu, &psi).unwrap().value.value();
            assert!(close(x, y, 1e-12));
        }
    }
}

#[test]
fn epsilon_nu1_swap_and_norm_twist() {
    for ext in ExtKind::ALL {
        let e = field(3, ext);
        let psi = AdditiveCharacter::standard(e.clone());
        let sgn = MultiplicativeCharacter::sgn(e.clone());
        let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::F);
        let minus = sign_characters(&e, &sgn);
        let plus = sign_characters(&e, &triv);
        let one = e.base().one();
        let mu = &minus[0];
        let unit = MultiplicativeCharacter::trivial(e.clone(), FieldTag::E);
        assert!(close(epsilon_nu1(mu, &unit, &one, &psi).unwrap(), tate_epsilon(mu, &psi).unwrap().value.value(), 1e-12));
        let minus_one = e.base().int(-1);
        for nu in plus.iter().chain(minus.iter()).take(6) {
            let product = mu.try_mul(nu).unwrap();
            // the swap changes the value by (mu nu)(-1); symmetric exactly when that is 1
            let swap_sign = product.eval_f(&minus_one).unwrap().to_complex();
            for nu1 in [1i64, 2, 3, -6] {
                let n1 = e.base().int(nu1);
                let a = epsilon_nu1(mu, nu, &n1, &psi).unwrap();
                let b = epsilon_nu1(nu, mu, &n1, &psi).unwrap();
                assert!(close(a, swap_sign * b, 1e-9), "{ext} {} {}", mu.to_text(), nu.to_text());
                if close(swap_sign, Complex64::new(1.0, 0.0), 1e-12) {
                    assert!(close(a, b, 1e-9));
                }
                let z = e.e_int(1, 1);
                let n1z = n1 * z.norm();
                let twisted = epsilon_nu1(mu, nu, &n1z, &psi).unwrap();
                let direct = product.eval_e(&e.embed(z.norm())).unwrap().to_complex();
                assert!(close(twisted, a * direct, 1e-9));
            }
        }
    }
}

#[test]
fn epsilon_nu1_is_symmetric_for_same_sign_pairs() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let psi = AdditiveCharacter::standard(e.clone());
            for restriction in [MultiplicativeCharacter::sgn(e.clone()), MultiplicativeCharacter::trivial(e.clone(), FieldTag::F)] {
                let chars = sign_characters(&e, &restriction);
                for (mu, nu) in chars.iter().zip(chars.iter().rev()).take(4) {
                    for nu1 in [1i64, 2, 5, -7] {
                        let n1 = e.base().int(nu1);
                        let a = epsilon_nu1(mu, nu, &n1, &psi).unwrap();
                        let b = epsilon_nu1(nu, mu, &n1, &psi).unwrap();
                        assert!(close(a, b, 1e-9));
                    }
                }
            }
        }
    }
}

// ---------- S_mu(1,1) ----------

/// Shell sums of `int_{Ker N} mu(delta^-1 (1-x)) dx` by enumerating the torus modulo the
/// congruence subgroup of the given depth; exact for shells `v <= depth - a(mu)`.
fn riemann_shells(mu: &MultiplicativeCharacter, depth: u32) -> Vec<Complex64> {
    let e = mu.field();
    let reps = e.norm_one_reps(depth).unwrap();
    assert_eq!(reps.len() as u64, e.norm_one_index(depth));
    let mass = 1.0 / reps.len() as f64;
    let exact = depth as i64 - mu.conductor().max(1) as i64;
    let mut shells = vec![Complex64::new(0.0, 0.0); exact as usize + 1];
    let delta = e.delta();
    for x in reps {
        let y = e.e_one() - x;
        if y.is_zero() {
            continue;
        }
        let v = y.val().unwrap();
        if v > exact {
            continue;
        }
        let arg = y.checked_div(&delta).unwrap();
        shells[v as usize] += mu.eval_e(&arg).unwrap().to_complex() * mass;
    }
    shells
}

fn riemann_limit(mu: &MultiplicativeCharacter, depth: u32) -> Complex64 {
    // partial sums at s = 0 alternate once the unramified tail is reached; average the last two
    let shells = riemann_shells(mu, depth);
    let x = (mu.field().q_e() as f64).sqrt();
    let mut partial = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    for (v, c) in shells.iter().enumerate() {
        acc += c * x.powi(v as i32);
        partial.push(acc * 2.0);
    }
    let n = partial.len();
    (partial[n - 1] + partial[n - 2]) / 2.0
}

#[test]
fn shells_match_torus_enumeration() {
    for (p, ext, depth) in [(3u64, ExtKind::Unramified, 5u32), (5, ExtKind::Unramified, 4), (5, ExtKind::RamifiedP, 7), (3, ExtKind::RamifiedUp, 8)] {
        let e = field(p, ext);
        let sgn = MultiplicativeCharacter::sgn(e.clone());
        for mu in sign_characters(&e, &sgn).into_iter().take(4) {
            let oracle = riemann_shells(&mu, depth);
            let shells = torus_shell_integral(&mu, oracle.len() as i64).unwrap();
            for (v, want) in oracle.iter().enumerate() {
                let got = shells.get(&(v as i64)).map_or(Complex64::new(0.0, 0.0), |c| c.to_complex());
                assert!(close(got, *want, 1e-9), "{} shell {v}: {got} vs {want}", mu.to_text());
            }
        }
    }
}

#[test]
fn s_mu_matches_riemann_sum_oracle() {
    for (p, ext, depth) in [(5u64, ExtKind::Unramified, 4u32), (3, ExtKind::Unramified, 6), (5, ExtKind::RamifiedUp, 8)] {
        let e = field(p, ext);
        let sgn = MultiplicativeCharacter::sgn(e.clone());
        for mu in sign_characters(&e, &sgn).into_iter().filter(|m| m.conductor() <= 1).take(3) {
            let s = s_mu_11(&mu).unwrap();
            let want = riemann_limit(&mu, depth);
            assert!(close(s.limit_at_s0, want, 1e-5), "{}: {} vs {want}", mu.to_text(), s.limit_at_s0);
        }
    }
}

#[test]
fn torus_has_total_mass_one() {
    for p in [3u64, 5, 7] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let m = torus_mass(&e).unwrap();
            assert!(close(m.limit_at_s0, Complex64::new(1.0, 0.0), 1e-12));
            assert_eq!(torus_mass_exact(&e).unwrap(), num_rational::BigRational::from_integer(1.into()));
        }
    }
}

#[test]
fn one_more_shell_does_not_move_the_limit() {
    for ext in ExtKind::ALL {
        let e = field(5, ext);
        let sgn = MultiplicativeCharacter::sgn(e.clone());
        for mu in sign_characters(&e, &sgn).into_iter().take(4) {
            let a = s_mu_11(&mu).unwrap().limit_at_s0;
            let b = s_mu_11_with_margin(&mu, SHELL_MARGIN + 1).unwrap().limit_at_s0;
            assert!(close(a, b, 1e-10));
        }
    }
}

#[test]
fn ramified_shells_vanish_past_conductor() {
    for p in [3u64, 5] {
        for ext in [ExtKind::RamifiedP, ExtKind::RamifiedUp] {
            let e = field(p, ext);
            let sgn = MultiplicativeCharacter::sgn(e.clone());
            for mu in sign_characters(&e, &sgn) {
                let s = s_mu_11(&mu).unwrap();
                assert!(matches!(s.tail, TailShape::Zero));
                for c in s.shells.iter().filter(|c| c.shell > mu.conductor() as i64) {
                    assert!(c.exact.is_zero(), "{} shell {}", mu.to_text(), c.shell);
                }
            }
        }
    }
}

#[test]
fn s_mu_rejects_wrong_restriction() {
    let e = field(5, ExtKind::RamifiedP);
    let triv = MultiplicativeCharacter::trivial(e.clone(), FieldTag::F);
    let mu = &sign_characters(&e, &triv)[0];
    assert!(matches!(s_mu_11(mu), Err(EpsilonError::Precondition(_))));
    let psi = AdditiveCharacter::standard(e.clone());
    assert!(matches!(verify_lemma_a(mu, &psi), Err(EpsilonError::Precondition(_))));
}

#[test]
fn lemma_a_holds_across_conductors() {
    for p in [3u64, 5] {
        for ext in ExtKind::ALL {
            let e = field(p, ext);
            let psi = AdditiveCharacter::standard(e.clone());
            let sgn = MultiplicativeCharacter::sgn(e.clone());
            let chars = sign_characters(&e, &sgn);
            let conductors: std::collections::BTreeSet<u32> = chars.iter().map(|m| m.conductor()).collect();
            assert!(conductors.len() >= 2 || ext.is_ramified(), "{ext}");
            for mu in &chars {
                let out = verify_lemma_a(mu, &psi).unwrap();
                assert!(out.pass, "{}: ratio {}", out.character, out.ratio);
                assert!(out.ratio.im.abs() <= IMAGINARY_TOLERANCE * out.ratio.norm());
            }
        }
    }
}
