//! Maximizers of the Moser functional `J(v) = ∫_0^1 r^{n−1} e^{α|v|^γ} dr` on the unit
//! sphere of the `w0`-weighted space, and the structural checks around them.
//!
//! Everything is discretized on a uniform `t`-grid with `v` piecewise linear and constant
//! past `T_max`. The functional uses a fixed 4-point Gauss–Legendre rule per cell, so the
//! gradients below are exact gradients of the discrete objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::check_admissible;
use crate::constants::{alpha_nb, c_n, digamma_bound, gamma_nb, Params, Weight};
use crate::error::{ensure, Result};
use crate::par::Execution;
use crate::profiles::{
    make_family, moser_functional, weight_integral, weighted_norm, Family, Mapped, RadialProfile, Sampled,
};
use crate::quadrature::gl_rule;

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_T_MAX: f64 = 60.0;
pub const MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximizerProblem {
    pub params: Params,
    pub grid_size: usize,
    pub t_max: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub tol: f64,
    /// Amplitude of the seeded perturbation of the strategy-A start.
    pub jitter: f64,
}

impl MaximizerProblem {
    /// Critical `α_{n,β}`, `γ_{n,β}` on the default grid.
    pub fn new(params: Params) -> Result<Self> {
        params.validate_tm()?;
        ensure!((0.0..1.0).contains(&params.beta), "beta must lie in [0, 1) (got {})", params.beta);
        Ok(MaximizerProblem {
            params,
            grid_size: DEFAULT_GRID,
            t_max: DEFAULT_T_MAX,
            alpha: alpha_nb(params.n, params.k, params.beta),
            gamma: gamma_nb(params.n, params.beta),
            tol: 1e-12,
            jitter: 0.01,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        p.validate_tm()?;
        ensure!(p.weight == Weight::W0, "the maximizer search uses the w0 weight");
        ensure!((0.0..1.0).contains(&p.beta), "beta must lie in [0, 1) (got {})", p.beta);
        ensure!(self.grid_size >= 256, "grid_size must be at least 256 (got {})", self.grid_size);
        ensure!(self.t_max >= 20.0 && self.t_max.is_finite(), "T_max must be at least 20 (got {})", self.t_max);
        ensure!(self.alpha > 0.0 && self.alpha.is_finite(), "alpha must be positive");
        ensure!(self.gamma > 1.0 && self.gamma.is_finite(), "gamma must exceed 1");
        ensure!(self.tol > 0.0 && self.tol < 1e-2, "tol must lie in (0, 1e-2)");
        ensure!((0.0..=0.5).contains(&self.jitter), "jitter must lie in [0, 0.5]");
        Ok(())
    }
}

/// The discretized problem on a fixed grid (uniform or not).
struct Discrete {
    t: Vec<f64>,
    h: Vec<f64>,
    /// `c_n ∫_cell w`
    cellw: Vec<f64>,
    n: f64,
    k: u32,
    alpha: f64,
    gamma: f64,
}

struct Eval {
    value: f64,
    grad: Vec<f64>,
    /// `∫ |v|^γ e^{−nt+α|v|^γ} dt`
    moment: f64,
}

impl Discrete {
    fn new(t: Vec<f64>, p: &Params, alpha: f64, gamma: f64) -> Self {
        let e = p.weight_exponent();
        let cn = c_n(p.n, p.k);
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let cellw = t.windows(2).map(|w| cn * weight_integral(p.weight, e, w[0], w[1])).collect();
        Discrete { t, h, cellw, n: p.n as f64, k: p.k, alpha, gamma }
    }

    fn len(&self) -> usize {
        self.t.len()
    }

    fn slope(&self, v: &[f64], i: usize) -> f64 {
        (v[i + 1] - v[i]) / self.h[i]
    }

    /// `N(v) = c_n Σ ∫_cell w · |slope|^{k+1}`, the norm to the power `k+1`.
    fn energy(&self, v: &[f64]) -> f64 {
        (0..self.h.len()).map(|i| self.cellw[i] * self.slope(v, i).abs().powi(self.k as i32 + 1)).sum()
    }

    fn energy_grad(&self, v: &[f64]) -> Vec<f64> {
        let kp = self.k as f64 + 1.0;
        let mut g = vec![0.0; self.len()];
        for i in 0..self.h.len() {
            let d = self.slope(v, i);
            let f = kp * self.cellw[i] * d.abs().powi(self.k as i32 - 1) * d / self.h[i];
            g[i] -= f;
            g[i + 1] += f;
        }
        g[0] = 0.0;
        g
    }

    fn normalize(&self, v: &mut [f64]) -> Result<()> {
        let e = self.energy(v);
        ensure!(e > 0.0 && e.is_finite(), "cannot normalize a profile with energy {e}");
        let s = e.powf(-1.0 / (self.k as f64 + 1.0));
        v.iter_mut().for_each(|x| *x *= s);
        Ok(())
    }

    fn point(&self, u: f64, x: f64) -> (f64, f64) {
        let a = u.abs();
        let ag = a.powf(self.gamma);
        ((-self.n * x + self.alpha * ag).exp(), ag)
    }

    fn value(&self, v: &[f64]) -> f64 {
        let rule = gl_rule(4);
        let mut total = 0.0;
        for i in 0..self.h.len() {
            let (t0, h) = (self.t[i], self.h[i]);
            let mut cell = 0.0;
            for &(xi, w) in rule {
                let lam = 0.5 * (1.0 + xi);
                cell += w * self.point((1.0 - lam) * v[i] + lam * v[i + 1], t0 + lam * h).0;
            }
            total += 0.5 * h * cell;
        }
        let m = self.len() - 1;
        total + self.point(v[m], self.t[m]).0 / self.n
    }

    fn eval(&self, v: &[f64]) -> Eval {
        let rule = gl_rule(4);
        let ag = self.alpha * self.gamma;
        let mut grad = vec![0.0; self.len()];
        let (mut value, mut moment) = (0.0, 0.0);
        let dfdu = |u: f64, e: f64| {
            let a = u.abs();
            if a == 0.0 {
                0.0
            } else {
                ag * a.powf(self.gamma - 1.0) * u.signum() * e
            }
        };
        for i in 0..self.h.len() {
            let (t0, h) = (self.t[i], self.h[i]);
            for &(xi, w) in rule {
                let lam = 0.5 * (1.0 + xi);
                let u = (1.0 - lam) * v[i] + lam * v[i + 1];
                let (e, a) = self.point(u, t0 + lam * h);
                let wh = 0.5 * h * w;
                value += wh * e;
                moment += wh * a * e;
                let d = wh * dfdu(u, e);
                grad[i] += (1.0 - lam) * d;
                grad[i + 1] += lam * d;
            }
        }
        let m = self.len() - 1;
        let (e, a) = self.point(v[m], self.t[m]);
        value += e / self.n;
        moment += a * e / self.n;
        grad[m] += dfdu(v[m], e) / self.n;
        grad[0] = 0.0;
        Eval { value, grad, moment }
    }

    /// Solves `P x = g` for the Sobolev metric `P` (Dirichlet at `t = 0`, free at `T_max`),
    /// linearized around `v` for `k > 1`.
    fn precondition(&self, v: &[f64], g: &[f64]) -> Vec<f64> {
        let m = self.len();
        let km1 = self.k as i32 - 1;
        let smax = (0..m - 1).map(|i| self.slope(v, i).abs()).fold(0.0, f64::max);
        let a: Vec<f64> = (0..m - 1)
            .map(|i| {
                let s = self.slope(v, i).abs().max(1e-3 * smax).max(1e-300);
                self.cellw[i] / (self.h[i] * self.h[i]) * s.powi(km1)
            })
            .collect();
        // unknowns x_1..x_{m-1}; Thomas algorithm
        let sz = m - 1;
        let diag = |j: usize| a[j - 1] + if j < m - 1 { a[j] } else { 0.0 };
        let mut cp = vec![0.0; sz];
        let mut dp = vec![0.0; sz];
        for r in 0..sz {
            let j = r + 1;
            let off_lo = if r > 0 { -a[j - 1] } else { 0.0 };
            let off_up = if j < m - 1 { -a[j] } else { 0.0 };
            let denom = diag(j) - if r > 0 { off_lo * cp[r - 1] } else { 0.0 };
            cp[r] = off_up / denom;
            dp[r] = (g[j] - if r > 0 { off_lo * dp[r - 1] } else { 0.0 }) / denom;
        }
        let mut x = vec![0.0; m];
        for r in (0..sz).rev() {
            x[r + 1] = dp[r] - if r + 1 < sz { cp[r] * x[r + 2] } else { 0.0 };
        }
        x
    }

    /// The profile maximizing `⟨∇J(v), ·⟩` on the unit sphere: the Euler–Lagrange map.
    fn el_map(&self, grad: &[f64]) -> Result<Vec<f64>> {
        let m = self.len();
        let mut suffix = vec![0.0; m + 1];
        for j in (0..m).rev() {
            suffix[j] = suffix[j + 1] + grad[j];
        }
        let inv_k = 1.0 / self.k as f64;
        let mut z = vec![0.0; m];
        for i in 0..m - 1 {
            let s = suffix[i + 1].max(0.0);
            let d = (s * self.h[i] / self.cellw[i]).powf(inv_k);
            z[i + 1] = z[i] + d * self.h[i];
        }
        self.normalize(&mut z)?;
        Ok(z)
    }

    /// Discrete Euler–Lagrange mismatch, relative to the largest right-hand side.
    fn residual(&self, v: &[f64]) -> f64 {
        let ev = self.eval(v);
        let energy = self.energy(v);
        if energy == 0.0 || ev.moment == 0.0 {
            return 0.0;
        }
        let m = self.len();
        let lambda = 1.0 / ev.moment;
        let scale = energy * lambda / (self.alpha * self.gamma);
        let mut suffix = 0.0;
        let (mut worst, mut rmax) = (0.0f64, 0.0f64);
        for i in (1..m).rev() {
            suffix += ev.grad[i];
            let d = self.slope(v, i - 1);
            let lhs = self.cellw[i - 1] * d.abs().powi(self.k as i32 - 1) * d / self.h[i - 1];
            let rhs = scale * suffix;
            worst = worst.max((lhs - rhs).abs());
            rmax = rmax.max(rhs.abs());
        }
        if rmax == 0.0 {
            0.0
        } else {
            worst / rmax
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    #[serde(rename = "A")]
    Ascent,
    #[serde(rename = "B")]
    FixedPoint,
}

#[derive(Debug, Clone)]
struct Run {
    v: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn initial(d: &Discrete, prob: &MaximizerProblem, seed: u64) -> Result<Vec<f64>> {
    let base = make_family(Family::MoserW0(2.0), prob.params)?;
    let t_end = d.t[d.len() - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut v: Vec<f64> =
        d.t.iter()
            .map(|&t| {
                let wiggle: f64 = coef
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * ((m as f64 + 1.0) * std::f64::consts::PI * t / t_end).sin())
                    .sum();
                base.value(t).abs() * (1.0 + prob.jitter * wiggle)
            })
            .collect();
    v[0] = 0.0;
    d.normalize(&mut v)?;
    Ok(v)
}

fn stalled(history: &[f64], tol: f64) -> bool {
    let n = history.len();
    n > 20 && (history[n - 1] - history[n - 21]) <= tol * history[n - 1].abs()
}

/// Projected, preconditioned gradient ascent with backtracking.
fn ascent(d: &Discrete, mut v: Vec<f64>, tol: f64) -> Result<Run> {
    let mut ev = d.eval(&v);
    let mut history = vec![ev.value];
    let mut tau = 1.0;
    for it in 1..=MAX_ITER {
        let gn = d.energy_grad(&v);
        let p1 = d.precondition(&v, &ev.grad);
        let p2 = d.precondition(&v, &gn);
        let c = dot(&gn, &p1) / dot(&gn, &p2);
        let dir: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a - c * b).collect();
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial: Vec<f64> = v.iter().zip(&dir).map(|(x, y)| x + tau * y).collect();
            if d.normalize(&mut trial).is_ok() {
                let val = d.value(&trial);
                if val > ev.value {
                    accepted = Some(trial);
                    break;
                }
            }
            tau *= 0.5;
        }
        let Some(trial) = accepted else {
            // no ascent direction left at this resolution
            return Ok(Run { value: ev.value, v, iterations: it, converged: true });
        };
        v = trial;
        ev = d.eval(&v);
        history.push(ev.value);
        tau *= 2.0;
        if stalled(&history, tol) {
            return Ok(Run { value: ev.value, v, iterations: it, converged: true });
        }
    }
    Ok(Run { value: ev.value, v, iterations: MAX_ITER, converged: false })
}

/// Euler–Lagrange fixed point `v ← EL(v)`; a conditional-gradient step, so `J` never decreases.
fn fixed_point(d: &Discrete, mut v: Vec<f64>, tol: f64) -> Result<Run> {
    let mut ev = d.eval(&v);
    for it in 1..=MAX_ITER {
        let z = d.el_map(&ev.grad)?;
        let diff: Vec<f64> = z.iter().zip(&v).map(|(a, b)| a - b).collect();
        let step = d.energy(&diff).powf(1.0 / (d.k as f64 + 1.0));
        v = z;
        ev = d.eval(&v);
        if step < tol.sqrt() * 1e-3 {
            return Ok(Run { value: ev.value, v, iterations: it, converged: true });
        }
    }
    Ok(Run { value: ev.value, v, iterations: MAX_ITER, converged: false })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub value: f64,
    pub el_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximizerReport {
    #[serde(skip)]
    pub profile: Sampled,
    pub value: f64,
    pub norm: f64,
    pub lambda: f64,
    pub el_residual: f64,
    /// `|v|` is non-increasing in `r`.
    pub monotone_decreasing: bool,
    /// `|v′(r)|` at the smallest grid radius.
    pub derivative_at_zero: f64,
    /// `max |v′(r)|` at the three smallest grid radii, relative to `max_r |v′(r)|`.
    pub derivative_ratio_near_zero: f64,
    pub admissible: bool,
    pub converged: bool,
    pub strategy: Strategy,
    pub strategies: Vec<StrategyOutcome>,
    pub t_max: f64,
    pub grid_size: usize,
}

fn solve_on(prob: &MaximizerProblem, seed: u64) -> Result<(Discrete, Run, Vec<StrategyOutcome>, Strategy)> {
    let t = crate::profiles::uniform_grid(prob.grid_size, prob.t_max);
    let d = Discrete::new(t, &prob.params, prob.alpha, prob.gamma);
    let start = initial(&d, prob, seed)?;
    let a = ascent(&d, start.clone(), prob.tol)?;
    let b = fixed_point(&d, start, prob.tol)?;
    let (ra, rb) = (d.residual(&a.v), d.residual(&b.v));
    let outcomes = vec![
        StrategyOutcome {
            strategy: Strategy::Ascent,
            value: a.value,
            el_residual: ra,
            iterations: a.iterations,
            converged: a.converged,
        },
        StrategyOutcome {
            strategy: Strategy::FixedPoint,
            value: b.value,
            el_residual: rb,
            iterations: b.iterations,
            converged: b.converged,
        },
    ];
    // tie-break by value, then by residual
    let close = (a.value - b.value).abs() <= 1e-12 * a.value.abs();
    let pick_a = if close { ra <= rb } else { a.value > b.value };
    Ok(if pick_a { (d, a, outcomes, Strategy::Ascent) } else { (d, b, outcomes, Strategy::FixedPoint) })
}

/// Runs both strategies and returns the better maximizer. `seed` only drives the
/// strategy-A start. Budget exhaustion is reported through `converged = false`.
pub fn maximize(prob: &MaximizerProblem, seed: u64) -> Result<MaximizerReport> {
    prob.validate()?;
    let mut prob = *prob;
    let (mut d, mut run, mut outcomes, mut strategy) = solve_on(&prob, seed)?;
    // the profile must have flattened out by T_max; otherwise extend once
    let flat = |d: &Discrete, v: &[f64]| {
        let m = d.len();
        let smax = (0..m - 1).map(|i| d.slope(v, i).abs()).fold(0.0, f64::max);
        d.slope(v, m - 2).abs() < 1e-8 * smax
    };
    if !flat(&d, &run.v) {
        prob.t_max *= 2.0;
        prob.grid_size *= 2;
        (d, run, outcomes, strategy) = solve_on(&prob, seed)?;
    }
    let converged = outcomes.iter().any(|o| o.converged) && flat(&d, &run.v);
    let v = &run.v;
    let m = d.len();
    let ev = d.eval(v);
    let el_residual = d.residual(v);
    let monotone_decreasing = v.windows(2).all(|w| w[1] >= w[0]);
    let dr: Vec<f64> = (0..m - 1).map(|i| (0.5 * (d.t[i] + d.t[i + 1])).exp() * d.slope(v, i).abs()).collect();
    let dmax = dr.iter().copied().fold(0.0, f64::max);
    let near = dr[m - 4..].iter().copied().fold(0.0, f64::max);
    // exported in the non-positive cone convention of the families
    let profile = Sampled::new(d.t.clone(), v.iter().map(|x| -x).collect())?;
    let prof = RadialProfile::Sampled(profile.clone());
    let admissible = check_admissible(&prof, &prob.params)?.admissible;
    Ok(MaximizerReport {
        profile,
        value: run.value,
        norm: d.energy(v).powf(1.0 / (d.k as f64 + 1.0)),
        lambda: 1.0 / ev.moment,
        el_residual,
        monotone_decreasing,
        derivative_at_zero: dr[m - 2],
        derivative_ratio_near_zero: if dmax > 0.0 { near / dmax } else { 0.0 },
        admissible,
        converged,
        strategy,
        strategies: outcomes,
        t_max: prob.t_max,
        grid_size: prob.grid_size,
    })
}

/// Independent maximizations (e.g. over `β` or `n`), in input order.
pub fn maximize_sweep(problems: &[MaximizerProblem], seed: u64, exec: Execution) -> Vec<Result<MaximizerReport>> {
    crate::par::map(exec, problems, |p| maximize(p, seed))
}

/// Relative mismatch of the Euler–Lagrange equation
/// `c_n w(t) |v_t|^{k−1} v_t = λ ∫_t^∞ |v|^{γ−1} e^{−ns+α|v|^γ} ds`, `λ = (∫|v|^γ e^{…})^{−1}`,
/// in its discrete (cell-by-cell) form, relative to the largest right-hand side.
/// Closed-form profiles are sampled on a 4096-point grid first.
pub fn el_residual(v: &RadialProfile, p: &Params, alpha: f64, gamma: f64) -> Result<f64> {
    p.validate_tm()?;
    ensure!(alpha > 0.0 && gamma > 1.0, "need alpha > 0 and gamma > 1");
    let t = match v {
        RadialProfile::Sampled(s) => s.t().to_vec(),
        _ => {
            let mut t = crate::profiles::uniform_grid(DEFAULT_GRID, v.t_span(p.n));
            t.extend(v.breakpoints());
            t.sort_by(f64::total_cmp);
            t.dedup();
            t
        }
    };
    let vals: Vec<f64> = t.iter().map(|&x| v.value(x)).collect();
    let d = Discrete::new(t, p, alpha, gamma);
    Ok(d.residual(&vals))
}

/// `z = (α_{n,β}/α_{n,β̃})^{n(1−β̃)/(n+2)} · v|v|^{(β−β̃)/(1−β)}`, which carries the
/// critical functional at `β` to the one at `β̃ < β` unchanged and does not increase the
/// norm (in the `1/(1−β)` power).
pub fn beta_change(v: &RadialProfile, beta_from: f64, beta_to: f64, p: &Params) -> Result<RadialProfile> {
    p.validate_tm()?;
    ensure!(
        0.0 <= beta_to && beta_to < beta_from && beta_from < 1.0,
        "need 0 <= beta_to < beta_from < 1 (got {beta_to}, {beta_from})"
    );
    let from = Params { beta: beta_from, weight: Weight::W0, ..*p };
    let norm = weighted_norm(v, &from)?;
    ensure!(norm <= 1.0 + 1e-6, "the profile must lie in the unit ball at beta_from (norm {norm})");
    let nf = p.n as f64;
    let coef = (alpha_nb(p.n, p.k, beta_from) / alpha_nb(p.n, p.k, beta_to)).powf(nf * (1.0 - beta_to) / (nf + 2.0));
    let power = 1.0 + (beta_from - beta_to) / (1.0 - beta_from);
    Ok(RadialProfile::Mapped(Mapped { base: Box::new(v.clone()), coef, power }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub ell: Vec<f64>,
    pub values: Vec<f64>,
    /// `(2 − e^{−ℓ})/n`, the floor each value must exceed.
    pub floors: Vec<f64>,
    pub limsup_estimate: f64,
    pub digamma_bound: f64,
    pub above_floor: bool,
    pub below_bound: bool,
}

/// `J_{n,β}` along the concentrating Moser sequence, against the concentration-level bound.
pub fn concentration_probe(p: &Params, ells: &[f64]) -> Result<ConcentrationReport> {
    p.validate_tm()?;
    ensure!(!ells.is_empty(), "need at least one ell");
    ensure!((0.0..1.0).contains(&p.beta), "beta must lie in [0, 1)");
    let params = Params { weight: Weight::W0, ..*p };
    let (alpha, gamma) = (alpha_nb(p.n, p.k, p.beta), gamma_nb(p.n, p.beta));
    let nf = p.n as f64;
    let mut values = Vec::with_capacity(ells.len());
    for &l in ells {
        let v = make_family(Family::MoserW0(l), params)?;
        values.push(moser_functional(&v, alpha, gamma, p.n)?);
    }
    let floors: Vec<f64> = ells.iter().map(|l| (2.0 - (-l).exp()) / nf).collect();
    let bound = digamma_bound(p.n)?;
    let limsup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConcentrationReport {
        above_floor: values.iter().zip(&floors).all(|(v, f)| v > f),
        below_bound: limsup < bound,
        ell: ells.to_vec(),
        values,
        floors,
        limsup_estimate: limsup,
        digamma_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(beta: f64) -> MaximizerProblem {
        let mut p = MaximizerProblem::new(Params::tm(2, beta, Weight::W0)).unwrap();
        p.grid_size = 1024;
        p.t_max = 30.0;
        p
    }

    #[test]
    fn discrete_gradient_matches_differences() {
        let prob = small(0.2);
        let d = Discrete::new(crate::profiles::uniform_grid(300, 30.0), &prob.params, prob.alpha, prob.gamma);
        let v = initial(&d, &prob, 3).unwrap();
        let ev = d.eval(&v);
        for &i in &[1usize, 17, 150, 299] {
            let h = 1e-6;
            let mut vp = v.clone();
            vp[i] += h;
            let mut vm = v.clone();
            vm[i] -= h;
            let fd = (d.value(&vp) - d.value(&vm)) / (2.0 * h);
            assert!((fd - ev.grad[i]).abs() < 1e-6 * fd.abs().max(1e-3), "{i}: {fd} vs {}", ev.grad[i]);
        }
    }

    #[test]
    fn moser_profile_is_not_stationary() {
        let p = Params::tm(2, 0.0, Weight::W0);
        let v = make_family(Family::MoserW0(3.0), p).unwrap();
        let r = el_residual(&v, &p, alpha_nb(2, 1, 0.0), 2.0).unwrap();
        assert!(r > 0.1, "{r}");
        assert_eq!(el_residual(&RadialProfile::zero(), &p, 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn maximizer_small_grid() {
        let r = maximize(&small(0.0), 1).unwrap();
        assert!(r.converged);
        assert!((r.norm - 1.0).abs() < 1e-10);
        assert!(r.value > 1.859, "{}", r.value);
        assert!(r.el_residual < 1e-4, "{}", r.el_residual);
        assert!(r.monotone_decreasing);
    }

    #[test]
    fn beta_change_invariance() {
        let p = Params::tm(2, 0.3, Weight::W0);
        let v = make_family(Family::MoserW0(3.0), p).unwrap();
        let z = beta_change(&v, 0.3, 0.1, &p).unwrap();
        let q = Params { beta: 0.1, ..p };
        assert!(weighted_norm(&z, &q).unwrap() <= 1.0 + 1e-6);
        let j0 = moser_functional(&v, alpha_nb(2, 1, 0.3), gamma_nb(2, 0.3), 2).unwrap();
        let j1 = moser_functional(&z, alpha_nb(2, 1, 0.1), gamma_nb(2, 0.1), 2).unwrap();
        assert!(((j0 - j1) / j0).abs() < 1e-6, "{j0} {j1}");
        assert!(beta_change(&v, 0.1, 0.3, &p).is_err());
    }

    #[test]
    fn concentration_values() {
        let ells: Vec<f64> = (1..=10).map(f64::from).collect();
        let r = concentration_probe(&Params::tm(2, 0.0, Weight::W0), &ells).unwrap();
        assert!(r.above_floor && r.below_bound, "{r:?}");
    }
}
