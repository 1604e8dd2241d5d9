#![allow(dead_code)]

use logtm::constants::Params;
use logtm::hardy::{HardyQuery, HessianHardyQuery};
use logtm::profiles::{normalize, uniform_grid, RadialProfile, Sampled};
use logtm::quadrature::LogKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random non-positive profile, non-increasing in `t` (so `|v|` decreases in `r`), with
/// slope a positive mix of decaying exponentials; normalized to unit norm for `p`.
pub fn random_profile(rng: &mut ChaCha8Rng, p: &Params, points: usize) -> Sampled {
    let terms = rng.random_range(1..=4);
    let mix: Vec<(f64, f64)> = (0..terms).map(|_| (rng.random_range(0.05..1.0), rng.random_range(0.1..3.0))).collect();
    let t_max = rng.random_range(10.0..30.0);
    let t = uniform_grid(points, t_max);
    let h = t[1];
    let mut v = vec![0.0; points];
    for i in 1..points {
        let mid = t[i] - 0.5 * h;
        let slope: f64 = mix.iter().map(|(a, b)| a * (-b * mid).exp()).sum();
        v[i] = v[i - 1] - slope * h;
    }
    let s = Sampled::new(t, v).unwrap();
    normalize(&s, p).unwrap().0
}

pub fn random_profiles(seed: u64, count: usize, p: &Params, points: usize) -> Vec<RadialProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| RadialProfile::Sampled(random_profile(&mut rng, p, points))).collect()
}

/// `(lo, hi)` → `|a − b| ≤ tol·max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Random Hardy tuples over the documented ranges, alternating the log kind.
pub fn random_queries(count: usize, seed: u64) -> Vec<HardyQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pq = [1.0, 1.5, 2.0, 3.0];
    (0..count)
        .map(|i| {
            let p = pq[rng.random_range(0..4)];
            let q = pq[rng.random_range(0..4)];
            HardyQuery {
                alpha: rng.random_range(-0.9..3.0),
                theta: rng.random_range(-3.0..1.0),
                nu: rng.random_range(-1.0..q + 1.0),
                mu: rng.random_range(-2.0..q),
                p,
                q,
                r: 1.0,
                logkind: if i % 2 == 0 { LogKind::OneOverR } else { LogKind::EOverR },
            }
        })
        .collect()
}

/// Discrete Hessian-Hardy grid; a third of the draws sit on a critical exponent.
pub fn hessian_grid(count: usize, seed: u64) -> Vec<HessianHardyQuery> {
    use logtm::constants::Weight;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: [f64; 6] = [-1.0, -0.5, 0.0, 1.0, 2.0, 5.0];
    let betas = [-0.5, 0.0, 0.25, 0.5, 1.0, 1.5];
    let ns = [-1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 6.0, 9.0];
    let ks = [0.0, 1.0, 2.0, 3.0];
    let ps = [1.0, 1.5, 2.0, 3.0, 5.0];
    let mut out = Vec::new();
    while out.len() < count {
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let beta = betas[rng.random_range(0..betas.len())];
        let n = ns[rng.random_range(0..ns.len())];
        let k = ks[rng.random_range(0..ks.len())];
        let weight = if rng.random_bool(0.5) { Weight::W0 } else { Weight::W1 };
        let mut p = ps[rng.random_range(0..ps.len())];
        // land on the critical exponents a third of the time
        if rng.random_bool(1.0 / 3.0) {
            let crit: f64 = if k == 0.0 { (alpha + 1.0) / n } else { (alpha + 1.0) * (k + 1.0) / (n - 2.0 * k) };
            if crit.is_finite() && crit >= 1.0 {
                p = crit;
            }
        }
        out.push(HessianHardyQuery { alpha, beta, n, k, p, weight });
    }
    out
}
