mod common;

use logtm::admissibility::{hessian_flux_derivative, radial_laplacian, smooth, smoothing_difference};
use logtm::constants::{alpha_nb, gamma_nb, Params, Weight};
use logtm::hardy::{decide, numeric_batch, HardyQuery, Regime};
use logtm::optimizer::beta_change;
use logtm::par::Execution;
use logtm::profiles::{
    make_family, moser_functional, oscillation_check, radial_bound_check, transport, verify_transport, weighted_norm,
    Family, RadialProfile,
};
use logtm::quadrature::LogKind;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn even_n() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(4), Just(6)]
}

fn random_sampled(seed: u64, p: &Params) -> RadialProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RadialProfile::Sampled(common::random_profile(&mut rng, p, 400))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moser_w0_has_unit_norm(n in even_n(), beta in 0.0..0.9f64, ell in 1.0..20.0f64) {
        let p = Params::tm(n, beta, Weight::W0);
        let v = make_family(Family::MoserW0(ell), p).unwrap();
        prop_assert!((weighted_norm(&v, &p).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn moser_w1_has_unit_norm(n in even_n(), beta in 0.0..0.9f64, extra in 0.5..15.0f64) {
        let p = Params::tm(n, beta, Weight::W1);
        let v = make_family(Family::MoserW1(n as f64 + extra), p).unwrap();
        prop_assert!((weighted_norm(&v, &p).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn functional_never_below_trivial_value(n in even_n(), beta in 0.0..0.9f64, seed in any::<u64>()) {
        let p = Params::tm(n, beta, Weight::W0);
        let v = random_sampled(seed, &p);
        let j = moser_functional(&v, alpha_nb(n, n / 2, beta), gamma_nb(n, beta), n).unwrap();
        prop_assert!(j >= 1.0 / n as f64);
    }

    #[test]
    fn radial_bound_holds(n in prop_oneof![Just(2u32), Just(4)], beta in 0.0..0.9f64, w1 in any::<bool>(), seed in any::<u64>()) {
        let p = Params::tm(n, beta, if w1 { Weight::W1 } else { Weight::W0 });
        let v = random_sampled(seed, &p);
        prop_assert!(radial_bound_check(&v, &p).unwrap().max_ratio <= 1.0 + 1e-6);
    }

    #[test]
    fn oscillation_bound_holds(
        n in prop_oneof![Just(2u32), Just(4)],
        beta in 0.0..0.9f64,
        w1 in any::<bool>(),
        seed in any::<u64>(),
        t0 in 0.0..5.0f64,
        len in 0.01..8.0f64,
    ) {
        let p = Params::tm(n, beta, if w1 { Weight::W1 } else { Weight::W0 });
        let v = random_sampled(seed, &p);
        let (lhs, rhs) = oscillation_check(&v, &p, t0, t0 + len).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-6) + 1e-12, "{} > {}", lhs, rhs);
    }

    #[test]
    fn transported_profile_stays_below_diagonal(n in prop_oneof![Just(2u32), Just(4)], beta in 0.0..0.9f64, seed in any::<u64>()) {
        let p = Params::tm(n, beta, Weight::W0);
        let v = random_sampled(seed, &p);
        let r = verify_transport(&transport(&v, &p, alpha_nb(n, n / 2, beta)).unwrap()).unwrap();
        prop_assert!(r.psi_gamma_over_s_max <= 1.0 + 1e-9);
        prop_assert!(r.norm_residual <= 1e-6 * r.norm_lhs.max(1.0));
        prop_assert_eq!(r.adopted_factor, 1.0 / n as f64);
    }

    #[test]
    fn beta_change_contracts_and_preserves_functional(
        n in prop_oneof![Just(2u32), Just(4)],
        beta in 0.05..0.9f64,
        frac in 0.0..1.0f64,
        seed in any::<u64>(),
    ) {
        let beta_to = frac * beta * 0.999;
        let p = Params::tm(n, beta, Weight::W0);
        let v = random_sampled(seed, &p);
        let z = beta_change(&v, beta, beta_to, &p).unwrap();
        let q = Params { beta: beta_to, ..p };
        let lhs = weighted_norm(&z, &q).unwrap().powf(1.0 / (1.0 - beta_to));
        prop_assert!(lhs <= 1.0 + 1e-6);
        let j0 = moser_functional(&v, alpha_nb(n, n / 2, beta), gamma_nb(n, beta), n).unwrap();
        let j1 = moser_functional(&z, alpha_nb(n, n / 2, beta_to), gamma_nb(n, beta_to), n).unwrap();
        prop_assert!(((j1 - j0) / j0).abs() < 1e-6);
    }

    #[test]
    fn j1_check_is_the_laplacian(n in even_n(), beta in 0.0..0.9f64, ell in 1.0..10.0f64, frac in 0.05..0.9f64, t in 0.01..6.0f64) {
        let p = Params::tm(n, beta, Weight::W0);
        let v = make_family(Family::MoserW0(ell), p).unwrap();
        let eps = frac * ell / n as f64 / 4.0;
        let s = smooth(&v, eps).unwrap();
        let r = (-t).exp();
        let lhs = hessian_flux_derivative(&s, n, 1, t).unwrap();
        let rhs = r.powi(n as i32 - 1) * radial_laplacian(&s, n, t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-300));
    }

    #[test]
    fn smoothing_is_idempotent_and_local(n in even_n(), ell in 1.0..10.0f64, frac in 0.01..0.9f64) {
        let p = Params::tm(n, 0.0, Weight::W0);
        let v = make_family(Family::MoserW0(ell), p).unwrap();
        let b = ell / n as f64;
        let eps = frac * b / 4.0;
        let s = smooth(&v, eps).unwrap();
        prop_assert_eq!(smooth(&s, eps).unwrap(), s.clone());
        for &t in &[0.5 * (b - eps), b + 1.5 * eps, 3.0 * b] {
            prop_assert!((s.value(t) - v.value(t)).abs() <= 1e-12 * v.value(t).abs().max(1.0));
        }
        let d = weighted_norm(&smoothing_difference(&v, eps).unwrap(), &p).unwrap();
        prop_assert!(d.is_finite() && d < 1.0);
    }

    #[test]
    fn hardy_verdicts_are_coherent(
        alpha in -0.9..3.0f64, theta in -3.0..1.0f64, nu in -1.0..4.0f64, mu in -2.0..3.0f64,
        pi in 0usize..4, qi in 0usize..4, e_over_r in any::<bool>(),
    ) {
        let pq = [1.0, 1.5, 2.0, 3.0];
        let h = HardyQuery {
            alpha, theta, nu, mu, p: pq[pi], q: pq[qi], r: 1.0,
            logkind: if e_over_r { LogKind::EOverR } else { LogKind::OneOverR },
        };
        let v = decide(&h);
        prop_assert_eq!(v.holds, v.matched_condition.is_some());
        prop_assert_eq!(v.printed_holds, v.printed_condition.is_some());
        prop_assert_eq!(v.regime, Regime::of(h.p, h.q));
        prop_assert_eq!(decide(&h), v);
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let qs = common::random_queries(48, 5);
    let a = numeric_batch(&qs, Execution::Parallel);
    let b = numeric_batch(&qs, Execution::Sequential);
    assert_eq!(a, b);
}
