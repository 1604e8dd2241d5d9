use logtm::constants::{digamma_bound, Params, Weight};
use logtm::optimizer::{concentration_probe, maximize, maximize_sweep, MaximizerProblem};
use logtm::par::Execution;
use logtm::profiles::{partial_dirichlet, weighted_norm, RadialProfile};

fn small(beta: f64) -> MaximizerProblem {
    let mut p = MaximizerProblem::new(Params::tm(2, beta, Weight::W0)).unwrap();
    p.grid_size = 1024;
    p.t_max = 30.0;
    p
}

#[test]
fn maximizer_is_normalized_and_spread_out() {
    let prob = small(0.0);
    let r = maximize(&prob, 1).unwrap();
    assert!((r.norm - 1.0).abs() < 1e-10, "norm {}", r.norm);
    let v = RadialProfile::Sampled(r.profile.clone());
    assert!((weighted_norm(&v, &prob.params).unwrap() - 1.0).abs() < 1e-6);
    // a maximizer does not concentrate: some energy sits on r ∈ (1/2, 1)
    let outer = partial_dirichlet(&v, &prob.params, 0.0, std::f64::consts::LN_2).unwrap();
    assert!(outer > 0.01, "outer Dirichlet mass {outer}");
    assert!(r.monotone_decreasing);
    // and the maximum beats every concentrating sequence
    assert!(r.value > digamma_bound(2).unwrap(), "J = {}", r.value);
}

#[test]
fn start_jitter_does_not_move_the_maximum() {
    let mut flat = small(0.0);
    flat.jitter = 0.0;
    let a = maximize(&small(0.0), 42).unwrap();
    let b = maximize(&flat, 42).unwrap();
    assert!((a.value - b.value).abs() < 1e-4 * b.value, "{} vs {}", a.value, b.value);
}

#[test]
fn same_seed_same_report() {
    let a = maximize(&small(0.3), 9).unwrap();
    let b = maximize(&small(0.3), 9).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.profile, b.profile);
}

/// The maxima approach the `β = 0` maximum with shrinking gaps.
#[test]
fn maxima_are_continuous_as_beta_vanishes() {
    let betas = [0.0, 0.2, 0.1, 0.05, 0.025];
    let probs: Vec<MaximizerProblem> = betas.iter().map(|&b| small(b)).collect();
    let rs: Vec<f64> = maximize_sweep(&probs, 0, Execution::Parallel).into_iter().map(|r| r.unwrap().value).collect();
    let gaps: Vec<f64> = rs[1..].iter().map(|v| (v - rs[0]).abs()).collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "gaps {gaps:?}");
    }
    assert!(gaps[3] < 2e-3, "gaps {gaps:?}");
}

#[test]
fn sweep_is_execution_independent() {
    let probs = [small(0.0), small(0.5)];
    let a = maximize_sweep(&probs, 3, Execution::Parallel);
    let b = maximize_sweep(&probs, 3, Execution::Sequential);
    assert_eq!(a, b);
}

#[test]
fn concentrating_sequence_stays_between_floor_and_bound() {
    for n in [2u32, 4] {
        let r = concentration_probe(&Params::tm(n, 0.0, Weight::W0), &[1.0, 4.0, 16.0, 64.0, 256.0]).unwrap();
        assert!(r.above_floor && r.below_bound, "{r:?}");
    }
}
