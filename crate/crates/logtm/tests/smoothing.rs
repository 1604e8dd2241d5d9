mod common;

use logtm::admissibility::{check_admissible, max_smoothing_eps, smooth, smoothing_difference, JStatus};
use logtm::constants::{alpha_nb, gamma_nb, Params, Weight};
use logtm::profiles::{make_family, moser_functional, weighted_norm, Family, RadialProfile};

fn families(n: u32) -> Vec<(Family, Params)> {
    let g = gamma_nb(n, 0.25);
    vec![
        (Family::MoserW0(3.0), Params::tm(n, 0.0, Weight::W0)),
        (Family::MoserW0(5.0), Params::tm(n, 0.5, Weight::W0)),
        (Family::MoserW1(n as f64 + 3.0), Params::tm(n, 0.0, Weight::W1)),
        (Family::MoserW1(n as f64 + 5.0), Params::tm(n, 0.5, Weight::W1)),
        (Family::Dexp(4.0), Params::tm(n, 1.0, Weight::W1)),
        (Family::TruncLog(0.2 / g), Params::tm(n, 0.25, Weight::W0)),
    ]
}

/// Halves ε until both contracts hold: admissible, and within 1/ℓ of the original.
fn sweep(v: &RadialProfile, p: &Params, target: f64) -> Option<f64> {
    let mut eps = 0.99 * max_smoothing_eps(v);
    for _ in 0..30 {
        let s = smooth(v, eps).unwrap();
        let d = weighted_norm(&smoothing_difference(v, eps).unwrap(), p).unwrap();
        if check_admissible(&s, p).unwrap().admissible && d <= target {
            return Some(eps);
        }
        eps *= 0.5;
    }
    None
}

#[test]
fn smoothed_families_are_admissible() {
    for n in [2u32, 4] {
        for (f, p) in families(n) {
            let v = make_family(f, p).unwrap();
            let eps = sweep(&v, &p, f64::INFINITY);
            assert!(eps.is_some(), "{f:?} n={n} never became admissible");
        }
    }
}

#[test]
fn smoothed_moser_meets_both_contracts() {
    let p = Params::tm(2, 0.0, Weight::W0);
    let v = make_family(Family::MoserW0(3.0), p).unwrap();
    assert!(sweep(&v, &p, 1.0 / 3.0).is_some());
}

#[test]
fn raw_kink_is_flagged_but_pieces_are_admissible() {
    let p = Params::tm(4, 0.0, Weight::W0);
    let v = make_family(Family::MoserW0(4.0), p).unwrap();
    let r = check_admissible(&v, &p).unwrap();
    assert_eq!(r.kinks_r.len(), 1);
    assert!((r.kinks_r[0] - (-1.0f64).exp()).abs() < 1e-12);
    assert!(r.per_j.iter().all(|c| c.status == JStatus::Ok), "{r:?}");
}

#[test]
fn smoothing_barely_moves_the_functional() {
    for l in 1..=5 {
        let p = Params::tm(2, 0.0, Weight::W0);
        let v = make_family(Family::MoserW0(l as f64), p).unwrap();
        let (a, g) = (alpha_nb(2, 1, 0.0), gamma_nb(2, 0.0));
        let j0 = moser_functional(&v, a, g, 2).unwrap();
        let s = smooth(&v, 1e-3).unwrap();
        let j1 = moser_functional(&s, a, g, 2).unwrap();
        assert!((j1 - j0).abs() <= 1e-3, "ell={l}: {j0} vs {j1}");
    }
}

#[test]
fn smoothing_distance_vanishes_with_eps() {
    let p = Params::tm(2, 0.25, Weight::W0);
    let v = make_family(Family::MoserW0(3.0), p).unwrap();
    let ds: Vec<f64> = [0.2, 0.05, 0.0125, 0.003125]
        .iter()
        .map(|&e| weighted_norm(&smoothing_difference(&v, e).unwrap(), &p).unwrap())
        .collect();
    assert!(ds.windows(2).all(|w| w[1] < w[0]), "{ds:?}");
    assert!(ds[3] < 0.05);
}

#[test]
fn non_monotone_even_j_is_undefined() {
    use logtm::profiles::Sampled;
    let t = logtm::profiles::uniform_grid(512, 10.0);
    let v: Vec<f64> = t.iter().map(|&x| -(x * (-x / 3.0).exp()).sin()).collect();
    let s = RadialProfile::Sampled(Sampled::new(t, v).unwrap());
    let r = check_admissible(&s, &Params::tm(4, 0.0, Weight::W0)).unwrap();
    assert!(!r.monotone);
    assert_eq!(r.per_j[1].status, JStatus::Undefined);
    assert!(!r.admissible);
}
