//! Radial profiles `v` on `(0,1]`, parametrized by `t = ln(1/r)`, with their weighted
//! norms, Moser-type functionals and pointwise radial bounds.

mod family;
mod io;
mod sampled;
mod smoothed;
mod transport;

pub use family::{ClosedForm, Family, Side};
pub use io::{profile_from_csv, profile_from_json, profile_to_csv, profile_to_json, ProfileSpec};
pub use sampled::{Sampled, MIN_POINTS};
pub use smoothed::{bump_cdf, Smoothed};
pub use transport::{transport, verify_transport, TransportPair, TransportResiduals};

use serde::Serialize;

use crate::constants::{c_n, Params, Weight};
use crate::error::{ensure, Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity};

pub(crate) const NORM_TOL: f64 = 1e-12;
pub(crate) const FUNCTIONAL_TOL: f64 = 1e-11;

/// `z = coef · v |v|^{power-1}`; the image of `v` under a change of the weight exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapped {
    pub base: Box<RadialProfile>,
    pub coef: f64,
    pub power: f64,
}

impl Mapped {
    fn apply(&self, (v, d, d2): (f64, f64, f64)) -> (f64, f64, f64) {
        let (c, p) = (self.coef, self.power);
        let a = v.abs();
        if a == 0.0 {
            let d1 = if p == 1.0 { c * d } else { 0.0 };
            return (0.0, d1, if p == 1.0 { c * d2 } else { 0.0 });
        }
        let ap = a.powf(p - 1.0);
        let z = c * v * ap;
        let z1 = c * p * ap * d;
        let z2 = c * p * ((p - 1.0) * ap / v * d * d + ap * d2);
        (z, z1, z2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    Closed(ClosedForm),
    Sampled(Sampled),
    Mapped(Mapped),
    Smoothed(Smoothed),
}

impl From<ClosedForm> for RadialProfile {
    fn from(c: ClosedForm) -> Self {
        RadialProfile::Closed(c)
    }
}
impl From<Sampled> for RadialProfile {
    fn from(s: Sampled) -> Self {
        RadialProfile::Sampled(s)
    }
}

/// Closed-form family member.
pub fn make_family(family: Family, params: Params) -> Result<RadialProfile> {
    ClosedForm::new(family, params).map(RadialProfile::Closed)
}

impl RadialProfile {
    pub fn zero() -> Self {
        RadialProfile::Closed(ClosedForm::new(Family::Zero, Params::tm(2, 0.0, Weight::W0)).expect("zero profile"))
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Closed(c) => c.value(t),
            RadialProfile::Sampled(s) => s.value(t),
            RadialProfile::Mapped(m) => m.apply((m.base.value(t), 0.0, 0.0)).0,
            RadialProfile::Smoothed(s) => s.value(t),
        }
    }

    pub fn value_at_r(&self, r: f64) -> f64 {
        self.value(-r.ln())
    }

    pub fn dvdt(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Closed(c) => c.dvdt(t),
            RadialProfile::Sampled(s) => s.dvdt(t),
            RadialProfile::Mapped(m) => m.apply((m.base.value(t), m.base.dvdt(t), 0.0)).1,
            RadialProfile::Smoothed(s) => s.dvdt(t),
        }
    }

    /// Second `t`-derivative; `None` for sampled profiles (piecewise linear).
    pub fn d2vdt2(&self, t: f64) -> Option<f64> {
        match self {
            RadialProfile::Closed(c) => Some(c.d2vdt2(t)),
            RadialProfile::Sampled(_) => None,
            RadialProfile::Mapped(m) => {
                let d2 = m.base.d2vdt2(t)?;
                Some(m.apply((m.base.value(t), m.base.dvdt(t), d2)).2)
            }
            RadialProfile::Smoothed(s) => s.d2vdt2(t),
        }
    }

    /// Value and derivatives of the piece on `side` of the kink at `b`, continued to `t`.
    pub fn branch(&self, b: f64, side: Side, t: f64) -> (f64, f64, f64) {
        match self {
            RadialProfile::Closed(c) => c.branch(side, t),
            RadialProfile::Sampled(s) => {
                let probe = if side == Side::Left { b - 1e-12 * b.max(1.0) } else { b };
                let slope = s.dvdt(probe);
                (s.value(b) + slope * (t - b), slope, 0.0)
            }
            RadialProfile::Mapped(m) => m.apply(m.base.branch(b, side, t)),
            RadialProfile::Smoothed(_) => (self.value(t), self.dvdt(t), self.d2vdt2(t).unwrap_or(0.0)),
        }
    }

    /// Kinks in `t`, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialProfile::Closed(c) => c.breakpoint().into_iter().collect(),
            RadialProfile::Sampled(s) => s.breakpoints().to_vec(),
            RadialProfile::Mapped(m) => m.base.breakpoints(),
            RadialProfile::Smoothed(_) => Vec::new(),
        }
    }

    /// Points where the integrand should be split: kinks plus, for sampled profiles, every node.
    pub(crate) fn quadrature_breaks(&self) -> Vec<f64> {
        match self {
            RadialProfile::Sampled(s) => s.t().to_vec(),
            RadialProfile::Mapped(m) => m.base.quadrature_breaks(),
            RadialProfile::Smoothed(s) => s.quadrature_breaks(),
            RadialProfile::Closed(_) => self.breakpoints(),
        }
    }

    /// First `t` from which `v` is constant, if any.
    pub fn plateau_start(&self) -> Option<f64> {
        match self {
            RadialProfile::Closed(c) => c.plateau_start(),
            RadialProfile::Sampled(s) => Some(s.t_last()),
            RadialProfile::Mapped(m) => m.base.plateau_start(),
            RadialProfile::Smoothed(s) => s.plateau_start(),
        }
    }

    /// A `t` range that contains all the structure of the profile.
    pub fn t_span(&self, n: u32) -> f64 {
        let last = self.breakpoints().last().copied().unwrap_or(0.0).max(self.plateau_start().unwrap_or(0.0));
        (1.5 * last + 1.0).max(40.0 / n as f64)
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, RadialProfile::Sampled(_))
    }

    /// Samples the profile on `t`, keeping its kinks as metadata.
    pub fn sample(&self, t: Vec<f64>) -> Result<Sampled> {
        Sampled::from_fn(t, |x| self.value(x), self.breakpoints())
    }
}

/// Uniform grid on `[0, t_max]` with `m` points.
pub fn uniform_grid(m: usize, t_max: f64) -> Vec<f64> {
    (0..m).map(|i| t_max * i as f64 / (m - 1) as f64).collect()
}

fn log_weight(weight: Weight, t: f64) -> f64 {
    match weight {
        Weight::W0 => t,
        Weight::W1 => 1.0 + t,
    }
}

/// `∫_{t0}^{t1} w(t) dt` for `w = L(t)^e`.
pub(crate) fn weight_integral(weight: Weight, e: f64, t0: f64, t1: f64) -> f64 {
    let (a, b) = (log_weight(weight, t0), log_weight(weight, t1));
    if e == 0.0 {
        t1 - t0
    } else if e == -1.0 {
        (b / a).ln()
    } else {
        (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
    }
}

/// `c_n ∫_{t0}^{t1} e^{(2k−n)t} |v_t|^{k+1} w(t) dt` — the weighted Dirichlet energy.
pub fn partial_dirichlet(v: &RadialProfile, p: &Params, t0: f64, t1: f64) -> Result<f64> {
    p.validate()?;
    let (n, k) = (p.n as f64, p.k as f64);
    let e = p.weight_exponent();
    let cn = c_n(p.n, p.k);
    if p.weight == Weight::W0 && e <= -1.0 && t0 == 0.0 && v.dvdt(1e-300) != 0.0 {
        return Err(Error::Divergent(format!("weight t^{e} is not integrable at t = 0")));
    }
    if let RadialProfile::Sampled(s) = v {
        if p.n == 2 * p.k && t0 == 0.0 && t1 >= s.t_last() {
            return Ok(cn * s.dirichlet_sum(p.k, |a, b| weight_integral(p.weight, e, a, b)));
        }
    }
    let g = |t: f64| {
        let d = v.dvdt(t).abs();
        if d == 0.0 {
            return 0.0;
        }
        ((2.0 * k - n) * t + (k + 1.0) * d.ln() + e * log_weight(p.weight, t).ln()).exp()
    };
    let breaks = v.quadrature_breaks();
    let upper = match v.plateau_start() {
        Some(ts) => ts.min(t1),
        None => t1,
    };
    let r = if upper.is_finite() {
        if upper <= t0 {
            return Ok(0.0);
        }
        integrate(&g, t0, upper, &breaks, NORM_TOL)?
    } else {
        integrate_to_infinity(&g, t0, &breaks, NORM_TOL)?
    };
    Ok(cn * r.value)
}

pub fn dirichlet_integral(v: &RadialProfile, p: &Params) -> Result<f64> {
    partial_dirichlet(v, p, 0.0, f64::INFINITY)
}

/// `‖v‖ = (c_n ∫_0^1 r^{n−k} |v′|^{k+1} w dr)^{1/(k+1)}`.
pub fn weighted_norm(v: &RadialProfile, p: &Params) -> Result<f64> {
    Ok(dirichlet_integral(v, p)?.powf(1.0 / (p.k as f64 + 1.0)))
}

/// `∫_0^∞ exp(−nt + φ(|v(t)|)) dt = ∫_0^1 r^{n−1} e^{φ(|v|)} dr`.
fn exp_functional(v: &RadialProfile, n: u32, phi: &(dyn Fn(f64) -> f64 + Sync)) -> Result<f64> {
    let nf = n as f64;
    let g = |t: f64| (-nf * t + phi(v.value(t).abs())).exp();
    let breaks = v.quadrature_breaks();
    match v.plateau_start() {
        Some(ts) => {
            let tail = (-nf * ts + phi(v.value(ts).abs())).exp() / nf;
            let head = if ts > 0.0 { integrate(&g, 0.0, ts, &breaks, FUNCTIONAL_TOL)?.value } else { 0.0 };
            let total = head + tail;
            if !total.is_finite() {
                return Err(Error::Divergent("functional overflowed".into()));
            }
            Ok(total)
        }
        None => Ok(integrate_to_infinity(&g, 0.0, &breaks, FUNCTIONAL_TOL)?.value),
    }
}

/// Moser functional `∫_0^1 r^{n−1} e^{α|v|^γ} dr`.
pub fn moser_functional(v: &RadialProfile, alpha: f64, gamma: f64, n: u32) -> Result<f64> {
    ensure!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive (got {alpha})");
    ensure!(gamma > 1.0 && gamma.is_finite(), "gamma must exceed 1 (got {gamma})");
    ensure!(n >= 1, "n must be positive");
    exp_functional(v, n, &|a: f64| alpha * a.powf(gamma))
}

/// Double-exponential functional `∫_0^1 r^{n−1} exp(a e^{c_n^{2/n} |v|^{(n+2)/n}}) dr`.
pub fn double_exp_functional(v: &RadialProfile, a: f64, n: u32) -> Result<f64> {
    ensure!(a > 0.0 && a.is_finite(), "a must be positive (got {a})");
    ensure!(n >= 2 && n.is_multiple_of(2), "n must be even (got {n})");
    let nf = n as f64;
    let cc = c_n(n, n / 2).powf(2.0 / nf);
    let e = (nf + 2.0) / nf;
    exp_functional(v, n, &|x: f64| a * (cc * x.powf(e)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialBoundReport {
    pub max_ratio: f64,
    pub argmax_r: f64,
    pub norm: f64,
    pub points: usize,
}

/// Pointwise radial bound `|v(r)| ≤ B(r)·‖v‖` for the `w0`/`w1` norms.
pub fn radial_bound(p: &Params, t: f64) -> f64 {
    let nf = p.n as f64;
    let cfac = c_n(p.n, p.k).powf(-2.0 / (nf + 2.0));
    let ex = nf / (nf + 2.0);
    let beta = p.beta;
    match p.weight {
        Weight::W0 => cfac * (1.0 - beta).powf(-ex) * t.powf((1.0 - beta) * ex),
        Weight::W1 => {
            if beta == 1.0 {
                cfac * t.ln_1p().powf(ex)
            } else {
                cfac * ((((1.0 - beta) * t.ln_1p()).exp_m1()) / (1.0 - beta)).abs().powf(ex)
            }
        }
    }
}

pub fn radial_bound_check(v: &RadialProfile, p: &Params) -> Result<RadialBoundReport> {
    p.validate_tm()?;
    if p.weight == Weight::W0 {
        ensure!(p.beta < 1.0, "the w0 radial bound needs beta < 1 (got {})", p.beta);
    }
    let norm = weighted_norm(v, p)?;
    let hi = v.t_span(p.n).max(4.0 * v.breakpoints().last().copied().unwrap_or(0.0));
    let (lo, m) = (1e-6f64, 512usize);
    let mut ts: Vec<f64> = (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect();
    ts.extend(v.breakpoints());
    let mut best = (0.0f64, 1.0f64);
    for &t in &ts {
        let a = v.value(t).abs();
        if a == 0.0 {
            continue;
        }
        let ratio = a / (radial_bound(p, t) * norm);
        if ratio > best.0 || ratio.is_nan() {
            best = (ratio, (-t).exp());
        }
    }
    Ok(RadialBoundReport { max_ratio: best.0, argmax_r: best.1, norm, points: ts.len() })
}

/// `A_w` between `t0 < t1`: `c_n^{−2/n} ∫_{t0}^{t1} w(τ)^{−2/n} dτ` (in log variables).
pub fn oscillation_weight(p: &Params, t0: f64, t1: f64) -> f64 {
    let nf = p.n as f64;
    let e = -2.0 / nf * p.weight_exponent();
    c_n(p.n, p.k).powf(-2.0 / nf) * weight_integral(p.weight, e, t0, t1)
}

/// Both sides of `|v(t1) − v(t0)| ≤ A_w^{n/(n+2)} · (partial energy)^{2/(n+2)}`.
pub fn oscillation_check(v: &RadialProfile, p: &Params, t0: f64, t1: f64) -> Result<(f64, f64)> {
    p.validate_tm()?;
    ensure!(0.0 <= t0 && t0 < t1, "need 0 <= t0 < t1");
    let nf = p.n as f64;
    let lhs = (v.value(t1) - v.value(t0)).abs();
    let energy = partial_dirichlet(v, p, t0, t1)?;
    let rhs = oscillation_weight(p, t0, t1).powf(nf / (nf + 2.0)) * energy.powf(2.0 / (nf + 2.0));
    Ok((lhs, rhs))
}

/// Rescales a profile to unit norm (returns the scale used).
pub fn normalize(v: &Sampled, p: &Params) -> Result<(Sampled, f64)> {
    let prof = RadialProfile::Sampled(v.clone());
    let nrm = weighted_norm(&prof, p)?;
    ensure!(nrm > 0.0, "cannot normalize the zero profile");
    Ok((v.map_values(|x| x / nrm), 1.0 / nrm))
}

/// Functional scanned by [`sharpness_table`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ScanFunctional {
    /// `∫ r^{n−1} e^{α|v|^γ}`, with `α = ᾱ α_{n,β}`.
    Moser { alpha_ratio: f64, gamma: f64 },
    /// `∫ r^{n−1} exp(a e^{c_n^{2/n}|v|^{(n+2)/n}})`.
    DoubleExp { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub ell: f64,
    pub norm: f64,
    /// `None` when the functional diverges or overflows.
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Closed-form lower bound from the plateau region alone.
    pub floor: f64,
}

/// Plateau-only lower bound of the scanned functional for `family`.
pub fn sharpness_floor(family: Family, p: &Params, f: ScanFunctional) -> f64 {
    let nf = p.n as f64;
    let k = p.k as f64;
    match (family, f) {
        (Family::MoserW0(l), ScanFunctional::Moser { alpha_ratio, .. }) => (l * (alpha_ratio - 1.0)).exp() / nf,
        (Family::MoserW1(l), ScanFunctional::Moser { alpha_ratio, gamma }) => {
            let pw = 1.0 - p.beta;
            let rho = l.powf(pw) / (l.powf(pw) - nf.powf(pw));
            (nf + l * (alpha_ratio * rho.powf(-k * gamma / (k + 1.0)) - 1.0)).exp() / nf
        }
        (Family::Dexp(l), ScanFunctional::DoubleExp { a }) => (a + l * (a - nf)).exp() / nf,
        _ => 1.0 / nf,
    }
}

/// Norm and functional along a family, one row per index, in input order.
pub fn sharpness_table(
    make: impl Fn(f64) -> Family + Sync + Send,
    p: &Params,
    f: ScanFunctional,
    ells: &[f64],
    exec: crate::par::Execution,
) -> Result<Vec<SharpnessRow>> {
    p.validate_tm()?;
    let rows = crate::par::map(exec, ells, |&ell| -> Result<SharpnessRow> {
        let family = make(ell);
        let v = make_family(family, *p)?;
        let norm = weighted_norm(&v, p)?;
        let j = match f {
            ScanFunctional::Moser { alpha_ratio, gamma } => {
                let alpha = alpha_ratio * crate::constants::alpha_nb(p.n, p.k, p.beta);
                moser_functional(&v, alpha, gamma, p.n)
            }
            ScanFunctional::DoubleExp { a } => double_exp_functional(&v, a, p.n),
        };
        let j = match j {
            Ok(x) if x.is_finite() => Some(x),
            Ok(_) | Err(Error::Divergent(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(SharpnessRow { ell, norm, j, floor: sharpness_floor(family, p, f) })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::compute_constants;

    #[test]
    fn moser_w0_has_unit_norm() {
        for &(n, beta) in &[(2u32, 0.0), (4, 0.5), (6, 0.75)] {
            let p = Params::tm(n, beta, Weight::W0);
            let v = make_family(Family::MoserW0(3.0), p).unwrap();
            assert!((weighted_norm(&v, &p).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_profile_functionals() {
        let z = RadialProfile::zero();
        assert_eq!(weighted_norm(&z, &Params::tm(2, 0.0, Weight::W0)).unwrap(), 0.0);
        assert!((moser_functional(&z, 1.0, 2.0, 4).unwrap() - 0.25).abs() < 1e-15);
        assert!((double_exp_functional(&z, 1.5, 2).unwrap() - 1.5f64.exp() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn moser_w0_saturation_point() {
        let p = Params::tm(2, 0.0, Weight::W0);
        let s = compute_constants(&p).unwrap();
        let v = make_family(Family::MoserW0(3.0), p).unwrap();
        let expect = -(3.0 / s.alpha_nb).powf(1.0 / s.gamma_nb);
        assert!((v.value(1.5) - expect).abs() < 1e-15);
        assert_eq!(v.value(0.0), 0.0);
    }

    #[test]
    fn incompatible_families_rejected() {
        assert!(make_family(Family::MoserW1(2.0), Params::tm(2, 0.0, Weight::W1)).is_err());
        assert!(make_family(Family::MoserW0(2.0), Params::tm(2, 0.0, Weight::W1)).is_err());
        assert!(make_family(Family::Dexp(2.0), Params::tm(2, 0.5, Weight::W1)).is_err());
        assert!(make_family(Family::MoserW0(0.5), Params::tm(2, 0.0, Weight::W0)).is_err());
    }
}
