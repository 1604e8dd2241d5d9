//! Kink repair: near each kink `b` the derivative is blended between the two one-sided
//! pieces with a C³ step built from the bump `(1−x²)³`, plus a small interior bump that
//! restores the value at `b + ε`. The result is C², equals `v` outside `(b−ε, b+ε)`,
//! and stays convex in `t` whenever both pieces are convex and the slope jumps upward.

use super::{RadialProfile, Side};
use crate::quadrature::gl_fixed;

const KC: f64 = 35.0 / 32.0;

/// Normalized bump `(35/32)(1−x²)³` on `[−1, 1]`.
fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - x * x;
        KC * s * s * s
    }
}

fn bump_prime(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - x * x;
        -6.0 * KC * x * s * s
    }
}

/// Cumulative integral of the bump: 0 below −1, 1 above 1.
pub fn bump_cdf(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let x2 = x * x;
        0.5 + KC * x * (1.0 - x2 + x2 * x2 * (0.6 - x2 / 7.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct KinkFix {
    b: f64,
    /// Mass of the value-restoring bump.
    c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    base: Box<RadialProfile>,
    eps: f64,
    kinks: Vec<KinkFix>,
    correction_only: bool,
}

impl Smoothed {
    /// Caller guarantees `eps` is below a quarter of every kink gap (and of the first kink).
    pub(crate) fn new(base: RadialProfile, eps: f64) -> Self {
        let mut s = Smoothed { base: Box::new(base), eps, kinks: Vec::new(), correction_only: false };
        let kinks: Vec<KinkFix> = s
            .base
            .breakpoints()
            .into_iter()
            .map(|b| {
                let fix = KinkFix { b, c: 0.0 };
                let open = s.integral_of(&fix, s.eps, 0.0);
                KinkFix { b, c: -open }
            })
            .collect();
        s.kinks = kinks;
        s
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn base(&self) -> &RadialProfile {
        &self.base
    }

    /// The difference `smooth(v) − v` as a profile of its own.
    pub fn correction(&self) -> RadialProfile {
        RadialProfile::Smoothed(Smoothed { correction_only: true, ..self.clone() })
    }

    /// Slope gap `D(τ)` between the right and left pieces at `b + τ`.
    fn gap(&self, b: f64, tau: f64) -> (f64, f64) {
        let (_, rd, rd2) = self.base.branch(b, Side::Right, b + tau);
        let (_, ld, ld2) = self.base.branch(b, Side::Left, b + tau);
        (rd - ld, rd2 - ld2)
    }

    /// `C′(τ) = D(τ)(S(τ/ε) − H(τ)) + c φ(τ/ε)/ε` with `φ(u) = 2K(2u)`.
    fn correction_slope(&self, fix: &KinkFix, c: f64, tau: f64) -> f64 {
        let e = self.eps;
        if tau.abs() >= e {
            return 0.0;
        }
        let u = tau / e;
        let h = if tau >= 0.0 { 1.0 } else { 0.0 };
        let (d, _) = self.gap(fix.b, tau);
        d * (bump_cdf(u) - h) + c * 2.0 * bump(2.0 * u) / e
    }

    fn correction_curvature(&self, fix: &KinkFix, tau: f64) -> f64 {
        let e = self.eps;
        if tau.abs() >= e {
            return 0.0;
        }
        let u = tau / e;
        let h = if tau >= 0.0 { 1.0 } else { 0.0 };
        let (d, d1) = self.gap(fix.b, tau);
        d1 * (bump_cdf(u) - h) + d * bump(u) / e + fix.c * 4.0 * bump_prime(2.0 * u) / (e * e)
    }

    /// `∫_{−ε}^{τ} C′` with bump mass `c`, split at the smoothness seams.
    fn integral_of(&self, fix: &KinkFix, tau: f64, c: f64) -> f64 {
        let e = self.eps;
        let tau = tau.min(e);
        if tau <= -e {
            return 0.0;
        }
        let f = |s: f64| self.correction_slope(fix, c, s);
        let seams = [-e, -0.5 * e, 0.0, 0.5 * e, e];
        let mut acc = 0.0;
        for w in seams.windows(2) {
            if tau <= w[0] {
                break;
            }
            acc += gl_fixed(&f, w[0], tau.min(w[1]), 32);
        }
        acc
    }

    fn base_part(&self) -> f64 {
        if self.correction_only {
            0.0
        } else {
            1.0
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let mut v = if self.correction_only { 0.0 } else { self.base.value(t) };
        for fix in &self.kinks {
            v += self.integral_of(fix, t - fix.b, fix.c);
        }
        v
    }

    pub fn dvdt(&self, t: f64) -> f64 {
        let mut d = self.base_part() * self.base.dvdt(t);
        for fix in &self.kinks {
            d += self.correction_slope(fix, fix.c, t - fix.b);
        }
        d
    }

    pub fn d2vdt2(&self, t: f64) -> Option<f64> {
        let mut d = self.base_part() * self.base.d2vdt2(t)?;
        for fix in &self.kinks {
            d += self.correction_curvature(fix, t - fix.b);
        }
        Some(d)
    }

    pub(crate) fn quadrature_breaks(&self) -> Vec<f64> {
        let mut out = self.base.quadrature_breaks();
        for fix in &self.kinks {
            let e = self.eps;
            out.extend([fix.b - e, fix.b - 0.5 * e, fix.b + 0.5 * e, fix.b + e]);
        }
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn plateau_start(&self) -> Option<f64> {
        if self.correction_only {
            return self.kinks.last().map(|k| k.b + self.eps).or(Some(0.0));
        }
        let p = self.base.plateau_start()?;
        Some(self.kinks.iter().fold(p, |m, k| if k.b + self.eps > p { m.max(k.b + self.eps) } else { m }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_matches_bump() {
        assert_eq!(bump_cdf(0.0), 0.5);
        assert!((bump_cdf(1.0 - 1e-12) - 1.0).abs() < 1e-12);
        let h = 1e-6;
        for &x in &[-0.7, -0.1, 0.3, 0.9] {
            let num = (bump_cdf(x + h) - bump_cdf(x - h)) / (2.0 * h);
            assert!((num - bump(x)).abs() < 1e-8);
            let num2 = (bump(x + h) - bump(x - h)) / (2.0 * h);
            assert!((num2 - bump_prime(x)).abs() < 1e-7);
        }
    }
}
