//! Sharp constants of the log-weighted Trudinger–Moser inequality.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::special::digamma;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    /// `(ln 1/r)^{βn/2}`
    W0,
    /// `(ln e/r)^{βn/2}`
    W1,
}

impl Weight {
    pub fn name(self) -> &'static str {
        match self {
            Weight::W0 => "w0",
            Weight::W1 => "w1",
        }
    }
}

impl std::str::FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "w0" => Ok(Weight::W0),
            "w1" => Ok(Weight::W1),
            other => Err(format!("unknown weight '{other}' (expected w0 or w1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub k: u32,
    pub beta: f64,
    pub weight: Weight,
}

impl Params {
    /// Trudinger–Moser parameters: `k = n/2`.
    pub fn tm(n: u32, beta: f64, weight: Weight) -> Self {
        Params { n, k: n / 2, beta, weight }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.n >= 2, "n must be at least 2 (got {})", self.n);
        ensure!(self.k >= 1, "k must be at least 1 (got {})", self.k);
        ensure!(self.beta.is_finite(), "beta must be finite");
        Ok(())
    }

    /// Checks the `n = 2k` constraint needed by every Trudinger–Moser operation.
    pub fn validate_tm(&self) -> Result<()> {
        self.validate()?;
        ensure!(self.n.is_multiple_of(2), "n must be even (got {})", self.n);
        ensure!(self.n == 2 * self.k, "Trudinger-Moser operations need n = 2k (got n={}, k={})", self.n, self.k);
        Ok(())
    }

    /// Exponent of the log weight, `βn/2`.
    pub fn weight_exponent(&self) -> f64 {
        self.beta * self.n as f64 / 2.0
    }

    pub fn c_n(&self) -> f64 {
        c_n(self.n, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpConstants {
    pub c_n: f64,
    pub alpha_n: f64,
    pub gamma_nb: f64,
    pub alpha_nb: f64,
}

/// Exact binomial coefficient; panics only on u128 overflow, far beyond any usable `n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Surface area of the unit sphere in R^n, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: u32) -> f64 {
    let half = n as f64 / 2.0;
    if n.is_multiple_of(2) {
        // Γ(n/2) = (n/2 - 1)! exactly
        let fact: u128 = (1..(n / 2) as u128).product();
        2.0 * PI.powf(half) / fact as f64
    } else {
        2.0 * PI.powf(half) / statrs::function::gamma::gamma(half)
    }
}

/// `c_n = ω_{n−1}/k · C(n−1, k−1)`.
pub fn c_n(n: u32, k: u32) -> f64 {
    sphere_area(n) / k as f64 * binomial(n as u64 - 1, k as u64 - 1) as f64
}

pub fn gamma_nb(n: u32, beta: f64) -> f64 {
    let n = n as f64;
    (n + 2.0) / (n * (1.0 - beta))
}

pub fn alpha_nb(n: u32, k: u32, beta: f64) -> f64 {
    let nf = n as f64;
    let base = c_n(n, k).powf(2.0 / nf) * (1.0 - beta);
    nf * base.powf(1.0 / (1.0 - beta))
}

pub fn compute_constants(p: &Params) -> Result<SharpConstants> {
    p.validate_tm()?;
    ensure!(p.beta < 1.0, "gamma_nb and alpha_nb need beta < 1 (got {})", p.beta);
    let c = p.c_n();
    let nf = p.n as f64;
    Ok(SharpConstants {
        c_n: c,
        alpha_n: nf * c.powf(2.0 / nf),
        gamma_nb: gamma_nb(p.n, p.beta),
        alpha_nb: alpha_nb(p.n, p.k, p.beta),
    })
}

/// Upper bound for the concentration level, `(1/n)(1 + e^{Ψ(n/2+1)+γ})`.
pub fn digamma_bound(n: u32) -> Result<f64> {
    ensure!(n >= 2 && n.is_multiple_of(2), "n must be an even integer >= 2 (got {n})");
    let nf = n as f64;
    Ok((1.0 + (digamma(nf / 2.0 + 1.0) + EULER_GAMMA).exp()) / nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn planar_constants() {
        let s = compute_constants(&Params::tm(2, 0.0, Weight::W0)).unwrap();
        assert!(rel(s.c_n, 2.0 * PI) < 1e-15);
        assert!(rel(s.alpha_nb, 4.0 * PI) < 1e-14);
        assert_eq!(s.gamma_nb, 2.0);
    }

    #[test]
    fn four_dim_constants() {
        let s = compute_constants(&Params::tm(4, 0.0, Weight::W0)).unwrap();
        assert!(rel(s.c_n, 3.0 * PI * PI) < 1e-15);
        assert!(rel(s.alpha_n, 4.0 * 3f64.sqrt() * PI) < 1e-14);
        assert!(rel(s.gamma_nb, 1.5) < 1e-15);
    }

    #[test]
    fn half_beta() {
        let s = compute_constants(&Params::tm(2, 0.5, Weight::W0)).unwrap();
        assert!(rel(s.gamma_nb, 4.0) < 1e-15);
        assert!(rel(s.alpha_nb, 2.0 * PI * PI) < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(compute_constants(&Params { n: 4, k: 1, beta: 0.0, weight: Weight::W0 }).is_err());
        assert!(compute_constants(&Params::tm(2, 1.0, Weight::W1)).is_err());
        assert!(digamma_bound(3).is_err());
    }

    #[test]
    fn binomials_exact() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(sphere_area(3), 4.0 * PI) < 1e-14);
        assert!(rel(sphere_area(4), 2.0 * PI * PI) < 1e-14);
    }
}
