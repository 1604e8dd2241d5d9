//! The change of variables `s = n ln(1/r)`, `ψ(s) = K v(e^{−s/n})`, which turns the
//! weighted norm into `(1−β)^{−n/2} ∫ s^{βn/2} |ψ′|^{k+1} ds` and the Moser functional
//! into `(1/n) ∫ e^{ᾱ|ψ|^γ − s} ds`.

use serde::Serialize;

use super::{dirichlet_integral, moser_functional, RadialProfile, FUNCTIONAL_TOL, NORM_TOL};
use crate::constants::{compute_constants, Params, Weight};
use crate::error::{ensure, Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity};

#[derive(Debug, Clone)]
pub struct TransportPair {
    pub v: RadialProfile,
    pub params: Params,
    pub alpha: f64,
    pub gamma: f64,
    /// `ᾱ = α/α_{n,β}`.
    pub alpha_ratio: f64,
    /// `K = c_n^{2/(n+2)} n^{n(1−β)/(n+2)} (1−β)^{n/(n+2)}`.
    pub scale: f64,
}

impl TransportPair {
    pub fn psi(&self, s: f64) -> f64 {
        self.scale * self.v.value(s / self.params.n as f64)
    }

    pub fn dpsi(&self, s: f64) -> f64 {
        let nf = self.params.n as f64;
        self.scale * self.v.dvdt(s / nf) / nf
    }

    fn s_breaks(&self) -> Vec<f64> {
        let nf = self.params.n as f64;
        self.v.quadrature_breaks().into_iter().map(|t| nf * t).collect()
    }
}

pub fn transport(v: &RadialProfile, p: &Params, alpha: f64) -> Result<TransportPair> {
    p.validate_tm()?;
    ensure!(p.weight == Weight::W0, "transport is defined for the w0 weight");
    ensure!((0.0..1.0).contains(&p.beta), "transport needs 0 <= beta < 1 (got {})", p.beta);
    ensure!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive (got {alpha})");
    let s = compute_constants(p)?;
    let nf = p.n as f64;
    let ex = nf / (nf + 2.0);
    let scale = s.c_n.powf(2.0 / (nf + 2.0)) * nf.powf(ex * (1.0 - p.beta)) * (1.0 - p.beta).powf(ex);
    Ok(TransportPair { v: v.clone(), params: *p, alpha, gamma: s.gamma_nb, alpha_ratio: alpha / s.alpha_nb, scale })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportResiduals {
    /// `c_n ∫ |v_t|^{k+1} w dt`.
    pub norm_lhs: f64,
    /// `(1−β)^{−n/2} ∫ s^{βn/2} |ψ′|^{k+1} ds`.
    pub norm_rhs: f64,
    pub norm_residual: f64,
    pub functional_lhs: f64,
    /// `∫_0^∞ e^{ᾱ|ψ|^γ − s} ds` without any prefactor.
    pub functional_rhs_raw: f64,
    pub measured_factor: f64,
    /// Whichever of `1` and `1/n` the measurement selects.
    pub adopted_factor: f64,
    pub functional_residual: f64,
    /// `max_s |ψ(s)|^γ / s` on a grid; at most 1 for unit-norm profiles.
    pub psi_gamma_over_s_max: f64,
}

pub fn verify_transport(tp: &TransportPair) -> Result<TransportResiduals> {
    let p = &tp.params;
    let nf = p.n as f64;
    let k = p.k as f64;
    let e = p.weight_exponent();
    let norm_lhs = dirichlet_integral(&tp.v, p)?;

    let breaks = tp.s_breaks();
    let plateau = tp.v.plateau_start().map(|t| nf * t);
    let g = |s: f64| {
        let d = tp.dpsi(s).abs();
        if d == 0.0 {
            0.0
        } else {
            ((k + 1.0) * d.ln() + e * s.ln()).exp()
        }
    };
    let raw = match plateau {
        Some(sp) if sp > 0.0 => integrate(&g, 0.0, sp, &breaks, NORM_TOL)?.value,
        Some(_) => 0.0,
        None => integrate_to_infinity(&g, 0.0, &breaks, NORM_TOL)?.value,
    };
    let norm_rhs = (1.0 - p.beta).powf(-nf / 2.0) * raw;

    let functional_lhs = moser_functional(&tp.v, tp.alpha, tp.gamma, p.n)?;
    let h = |s: f64| (tp.alpha_ratio * tp.psi(s).abs().powf(tp.gamma) - s).exp();
    let functional_rhs_raw = match plateau {
        Some(sp) => {
            let head = if sp > 0.0 { integrate(&h, 0.0, sp, &breaks, FUNCTIONAL_TOL)?.value } else { 0.0 };
            head + h(sp)
        }
        None => integrate_to_infinity(&h, 0.0, &breaks, FUNCTIONAL_TOL)?.value,
    };
    if !functional_rhs_raw.is_finite() {
        return Err(Error::Divergent("transported functional overflowed".into()));
    }
    let measured_factor = functional_lhs / functional_rhs_raw;
    let adopted_factor =
        if (measured_factor - 1.0).abs() <= (measured_factor - 1.0 / nf).abs() { 1.0 } else { 1.0 / nf };
    let functional_residual = (functional_lhs - adopted_factor * functional_rhs_raw).abs();

    let span = nf * tp.v.t_span(p.n);
    let m = 2048;
    let psi_gamma_over_s_max = (1..=m)
        .map(|i| {
            let s = 1e-6 * (span / 1e-6f64).powf(i as f64 / m as f64);
            tp.psi(s).abs().powf(tp.gamma) / s
        })
        .chain(breaks.iter().filter(|&&s| s > 0.0).map(|&s| tp.psi(s).abs().powf(tp.gamma) / s))
        .fold(0.0f64, f64::max);

    Ok(TransportResiduals {
        norm_lhs,
        norm_rhs,
        norm_residual: (norm_lhs - norm_rhs).abs(),
        functional_lhs,
        functional_rhs_raw,
        measured_factor,
        adopted_factor,
        functional_residual,
        psi_gamma_over_s_max,
    })
}
