//! Adaptive Gauss–Legendre quadrature on finite and semi-infinite ranges, and the
//! weighted `∫_0^1 f(r) r^a (log)^b dr` integrals evaluated in `t = ln(1/r)`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogKind {
    /// `ln(1/r)`, or `ln(R/t)` in the Hardy setting.
    #[serde(rename = "log_r")]
    OneOverR,
    /// `ln(e/r)`, or `ln(eR/t)`.
    #[serde(rename = "log_er")]
    EOverR,
}

impl LogKind {
    pub fn name(self) -> &'static str {
        match self {
            LogKind::OneOverR => "log_r",
            LogKind::EOverR => "log_er",
        }
    }
}

impl std::str::FromStr for LogKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "log_r" | "log_r_over_t" | "log_one_over_r" | "r" => Ok(LogKind::OneOverR),
            "log_er" | "log_er_over_t" | "log_e_over_r" | "er" => Ok(LogKind::EOverR),
            other => Err(format!("unknown log kind '{other}' (expected log_r or log_er)")),
        }
    }
}

/// `∫_{r_lo}^{r_hi} f(r) r^a L(r)^b dr` with `L = ln(1/r)` or `ln(e/r)`.
pub struct WeightedIntegrand<'a> {
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
    pub a: f64,
    pub b: f64,
    pub logkind: LogKind,
    pub r_lo: f64,
    pub r_hi: f64,
    /// Points in `(r_lo, r_hi)` where `f` has kinks.
    pub breakpoints: Vec<f64>,
}

impl<'a> WeightedIntegrand<'a> {
    pub fn unit(f: &'a (dyn Fn(f64) -> f64 + Sync), a: f64, b: f64, logkind: LogKind) -> Self {
        WeightedIntegrand { f, a, b, logkind, r_lo: 0.0, r_hi: 1.0, breakpoints: Vec::new() }
    }
}

pub const MAX_PANELS: usize = 20_000;
const ABS_FLOOR: f64 = 1e-15;
const T_START: f64 = 32.0;
const MAX_DOUBLINGS: usize = 48;

/// Gauss–Legendre nodes and weights on [-1, 1] via Newton iteration on P_m.
fn legendre_rule(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

pub fn gl_rule(order: usize) -> &'static [(f64, f64)] {
    static R4: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R16: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R32: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match order {
        4 => R4.get_or_init(|| legendre_rule(4)),
        16 => R16.get_or_init(|| legendre_rule(16)),
        32 => R32.get_or_init(|| legendre_rule(32)),
        _ => panic!("unsupported Gauss-Legendre order {order}"),
    }
}

/// Fixed-order Gauss–Legendre on [a, b].
pub fn gl_fixed(f: &dyn Fn(f64) -> f64, a: f64, b: f64, order: usize) -> f64 {
    let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
    h * gl_rule(order).iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
}

/// Pairwise summation; deterministic for a fixed input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a))
    }
}

fn make_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let hi = gl_fixed(f, a, b, 32);
    let lo = gl_fixed(f, a, b, 16);
    let err = if hi.is_finite() && lo.is_finite() { (hi - lo).abs() } else { f64::INFINITY };
    Panel { a, b, value: hi, err }
}

fn segments(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut lo = a;
    for p in pts {
        if p - lo > 1e-14 * p.abs().max(1.0) {
            out.push((lo, p));
            lo = p;
        }
    }
    out.push((lo, b));
    out
}

/// Globally adaptive bisection: always split the panel with the largest error estimate.
fn adaptive(f: &dyn Fn(f64) -> f64, segs: &[(f64, f64)], rel_tol: f64, abs_target: f64) -> Result<QuadResult> {
    let mut heap: BinaryHeap<Panel> = segs.iter().map(|&(a, b)| make_panel(f, a, b)).collect();
    let mut done: Vec<Panel> = Vec::new();
    loop {
        let total: f64 = heap.iter().chain(done.iter()).map(|p| p.value).sum();
        let err: f64 = heap.iter().chain(done.iter()).map(|p| p.err).sum();
        if !total.is_finite() && heap.iter().any(|p| !p.value.is_finite()) {
            return Err(Error::Divergent("non-finite integrand values".into()));
        }
        if err <= (rel_tol * total.abs()).max(abs_target) || heap.is_empty() {
            let mut all: Vec<Panel> = heap.into_vec();
            all.extend(done);
            all.sort_by(|x, y| x.a.total_cmp(&y.a));
            let vals: Vec<f64> = all.iter().map(|p| p.value).collect();
            return Ok(QuadResult { value: pairwise_sum(&vals), abs_error_estimate: err, panels_used: all.len() });
        }
        if heap.len() + done.len() >= MAX_PANELS {
            return Err(Error::NotConverged(format!(
                "quadrature error estimate {err:.3e} above target after {MAX_PANELS} panels"
            )));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; freeze the panel
            done.push(worst);
            continue;
        }
        heap.push(make_panel(f, worst.a, mid));
        heap.push(make_panel(f, mid, worst.b));
    }
}

fn check_tol(rel_tol: f64) -> Result<()> {
    ensure!(rel_tol > 1e-14 && rel_tol < 1e-2, "rel_tol must lie in (1e-14, 1e-2) (got {rel_tol})");
    Ok(())
}

/// `∫_a^b f`, with panels split exactly at `breaks`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], rel_tol: f64) -> Result<QuadResult> {
    check_tol(rel_tol)?;
    ensure!(a.is_finite() && b.is_finite(), "finite limits required");
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error_estimate: 0.0, panels_used: 1 });
    }
    if b < a {
        let r = integrate(f, b, a, breaks, rel_tol)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    adaptive(f, &segments(a, b, breaks), rel_tol, ABS_FLOOR)
}

/// `∫_a^∞ f` by truncation doubling from `a + 32`. Reports `Divergent` when the partial
/// integrals keep growing: either by a factor ≥ 1.5 over two successive doublings while
/// `ln|f|` rises ever faster, or with increments that stop shrinking while `f` stays of
/// their size at the cut (the signature of algebraic divergence such as `t^{-1/2}`). A
/// large bump that later decays is integrated, not flagged.
pub fn integrate_to_infinity(f: &dyn Fn(f64) -> f64, a: f64, breaks: &[f64], rel_tol: f64) -> Result<QuadResult> {
    check_tol(rel_tol)?;
    ensure!(a.is_finite(), "finite lower limit required");
    let mut t = a + T_START;
    let first = adaptive(f, &segments(a, t, breaks), rel_tol, ABS_FLOOR)?;
    let (mut total, mut err, mut panels) = (first.value, first.abs_error_estimate, first.panels_used);
    let mut sums = vec![total];
    let mut incs: Vec<f64> = Vec::new();
    for _ in 0..MAX_DOUBLINGS {
        let t2 = a + 2.0 * (t - a);
        let target = (0.1 * rel_tol * total.abs()).max(ABS_FLOOR);
        let inc = adaptive(f, &segments(t, t2, breaks), rel_tol, target)?;
        total += inc.value;
        err += inc.abs_error_estimate;
        panels += inc.panels_used;
        if !total.is_finite() {
            return Err(Error::Divergent(format!("partial integral overflowed by t = {t2:.3e}")));
        }
        incs.push(inc.value);
        sums.push(total);
        let tail = f(t2).abs() * (t2 - a);
        if inc.value.abs() <= rel_tol * total.abs() && tail <= rel_tol * total.abs().max(ABS_FLOOR) {
            return Ok(QuadResult { value: total, abs_error_estimate: err, panels_used: panels });
        }
        if total.abs() <= ABS_FLOOR && inc.value.abs() <= ABS_FLOOR && tail <= ABS_FLOOR {
            return Ok(QuadResult { value: total, abs_error_estimate: err, panels_used: panels });
        }
        // growth alone also fits a late, large but finite bump; divergence needs ln|f| to
        // still be rising with a non-decreasing slope
        let convex_rise = || {
            let h = 0.5 * (t - a);
            let (l0, l1, l2) = (f(t - h).abs().ln(), f(t).abs().ln(), f(t2).abs().ln());
            let (s1, s2) = ((l1 - l0) / h, (l2 - l1) / (t2 - t));
            s2 > 0.0 && s2 >= s1 - 1e-9 * s1.abs()
        };
        let m = sums.len();
        if m >= 3
            && sums[m - 3] > 0.0
            && sums[m - 2] >= 1.5 * sums[m - 3]
            && sums[m - 1] >= 1.5 * sums[m - 2]
            && convex_rise()
        {
            return Err(Error::Divergent(format!(
                "partial integrals grew by >= 1.5x over successive doublings up to t = {t2:.3e}"
            )));
        }
        let j = incs.len();
        // and the integrand at the new end must still carry the increment's scale
        if j >= 3
            && incs[j - 3] > 0.0
            && incs[j - 2] >= 0.999 * incs[j - 3]
            && incs[j - 1] >= 0.999 * incs[j - 2]
            && f(t2).abs() * (t2 - t) >= 0.01 * inc.value.abs()
        {
            return Err(Error::Divergent(format!("partial-integral increments stopped shrinking up to t = {t2:.3e}")));
        }
        t = t2;
    }
    Err(Error::NotConverged(format!("tail still significant at t = {t:.3e}")))
}

/// Weighted integral over `(r_lo, r_hi) ⊂ (0, 1]`, computed in `t = ln(1/r)`.
pub fn integrate_weighted(w: &WeightedIntegrand, rel_tol: f64) -> Result<QuadResult> {
    ensure!(w.r_lo >= 0.0 && w.r_lo < w.r_hi && w.r_hi <= 1.0, "integration range must satisfy 0 <= r_lo < r_hi <= 1");
    let shift = if w.logkind == LogKind::EOverR { 1.0 } else { 0.0 };
    let (a, b) = (w.a, w.b);
    let f = w.f;
    let g = move |t: f64| {
        let fr = f((-t).exp());
        if fr == 0.0 {
            return 0.0;
        }
        fr * (-(a + 1.0) * t + b * (t + shift).ln()).exp()
    };
    let t_lo = -w.r_hi.ln();
    let breaks: Vec<f64> = w.breakpoints.iter().filter(|&&r| r > 0.0).map(|&r| -r.ln()).collect();
    if w.r_lo == 0.0 {
        integrate_to_infinity(&g, t_lo, &breaks, rel_tol)
    } else {
        integrate(&g, t_lo, -w.r_lo.ln(), &breaks, rel_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for &m in &[4usize, 16, 32] {
            let s: f64 = gl_rule(m).iter().map(|p| p.1).sum();
            assert!((s - 2.0).abs() < 1e-14);
            let deg = 2 * m - 1;
            let v = gl_fixed(&|x: f64| x.powi(deg as i32 - 1), 0.0, 1.0, m);
            assert!((v - 1.0 / (deg as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn power_rule() {
        let one = |_: f64| 1.0;
        let r = integrate_weighted(&WeightedIntegrand::unit(&one, 3.0, 0.0, LogKind::OneOverR), 1e-12).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
    }

    #[test]
    fn log_power_on_subinterval() {
        let one = |_: f64| 1.0;
        let mut w = WeightedIntegrand::unit(&one, -1.0, -0.5, LogKind::OneOverR);
        w.r_lo = (-1.0f64).exp();
        let r = integrate_weighted(&w, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn log_power_full_range_diverges() {
        let one = |_: f64| 1.0;
        let r = integrate_weighted(&WeightedIntegrand::unit(&one, -1.0, -0.5, LogKind::OneOverR), 1e-10);
        assert!(matches!(r, Err(Error::Divergent(_))), "{r:?}");
    }

    #[test]
    fn exponential_growth_diverges() {
        let r = integrate_to_infinity(&|t: f64| (0.05 * t).exp(), 0.0, &[], 1e-10);
        assert!(matches!(r, Err(Error::Divergent(_))));
    }

    #[test]
    fn superexponential_growth_and_slow_tails_diverge() {
        let r = integrate_to_infinity(&|t: f64| (t.powf(1.2) - t).exp(), 0.0, &[], 1e-10);
        assert!(matches!(r, Err(Error::Divergent(_))), "{r:?}");
        let r = integrate_to_infinity(&|t: f64| 1.0 / (1.0 + t).sqrt(), 0.0, &[], 1e-10);
        assert!(matches!(r, Err(Error::Divergent(_))), "{r:?}");
    }

    /// `e^{t − t²/400}` peaks at `t = 200`, far beyond the first cut.
    #[test]
    fn late_bump_is_integrated() {
        let f = |t: f64| (t - t * t / 400.0).exp();
        let r = integrate_to_infinity(&f, 0.0, &[], 1e-10).unwrap();
        // ∫_0^∞ e^{100 − (t−200)²/400} dt = e^{100} · 10√π · (1 + erf(10)) and erf(10) = 1 to double precision
        let want = 100f64.exp() * 20.0 * std::f64::consts::PI.sqrt();
        assert!(((r.value - want) / want).abs() < 1e-8, "{} vs {want}", r.value);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_to_infinity(&|_| 0.0, 0.0, &[], 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn breakpoints_are_honoured() {
        let f = |t: f64| (t - 0.3).abs();
        let r = integrate(&f, 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-15);
        assert_eq!(r.panels_used, 2);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(integrate(&|x| x, 0.0, 1.0, &[], 0.5).is_err());
        assert!(integrate(&|x| x, 0.0, 1.0, &[], 1e-16).is_err());
    }
}
