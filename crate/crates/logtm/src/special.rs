//! Special functions: digamma and the incomplete gamma family, with log-space variants
//! for the arguments (up to ~1e10) that the Hardy criteria need.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{ensure, Result};

const EPS: f64 = 1e-17;
const TINY: f64 = 1e-300;

/// Digamma Ψ(x): reflection for x < 1/2, upward recurrence to x ≥ 10, then the
/// asymptotic Bernoulli series.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || (x <= 0.0 && x == x.floor()) {
        return f64::NAN;
    }
    if x < 0.5 {
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // B_{2j}/(2j) for j = 1..7
    let series = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0
                - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0 - x2 * (691.0 / 32760.0 - x2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

/// Lower series Σ y^m / (η(η+1)…(η+m)), so that γ(η,y) = e^{-y} y^η · sum.
fn lower_series(eta: f64, y: f64) -> f64 {
    let mut ap = eta;
    let mut del = 1.0 / eta;
    let mut sum = del;
    for _ in 0..100_000 {
        ap += 1.0;
        del *= y / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum
}

/// Modified Lentz evaluation of the continued fraction for Γ(η,y)·e^{y} y^{-η}.
fn upper_cf(eta: f64, y: f64) -> f64 {
    let mut b = y + 1.0 - eta;
    let mut c = 1.0 / TINY;
    let mut d = if b.abs() < TINY { 1.0 / TINY } else { 1.0 / b };
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - eta);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// ∫_y^1 t^{η−1} e^{−t} dt for 0 < y < 1 and any real η, by expanding e^{−t}.
fn upper_head(eta: f64, y: f64) -> f64 {
    let ly = y.ln();
    let mut fact = 1.0;
    let mut sum = 0.0;
    for k in 0..200 {
        if k > 0 {
            fact *= -1.0 / k as f64;
        }
        let s = eta + k as f64;
        let g = if s == 0.0 { -ly } else { -(s * ly).exp_m1() / s };
        let term = fact * g;
        sum += term;
        if k > 2 && term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum
}

/// ln Γ(η, y) for real η and y > 0 (or y = 0 with η > 0).
pub fn ln_gamma_upper(eta: f64, y: f64) -> Result<f64> {
    ensure!(eta.is_finite() && y.is_finite(), "gamma_upper needs finite arguments");
    ensure!(y >= 0.0, "gamma_upper needs y >= 0 (got {y})");
    if y == 0.0 {
        ensure!(eta > 0.0, "gamma_upper(eta, 0) diverges for eta <= 0 (got eta = {eta})");
        return Ok(ln_gamma(eta));
    }
    if y < 1.0 {
        if eta > 1.0 {
            return Ok(ln_gamma_minus_lower(eta, y));
        }
        let tail = (-1.0f64).exp() * upper_cf(eta, 1.0);
        return Ok((tail + upper_head(eta, y)).ln());
    }
    if y > eta - 1.0 {
        Ok(-y + eta * y.ln() + upper_cf(eta, y).ln())
    } else {
        Ok(ln_gamma_minus_lower(eta, y))
    }
}

/// ln(Γ(η) − γ(η,y)) for η > 0 where the difference does not cancel badly.
fn ln_gamma_minus_lower(eta: f64, y: f64) -> f64 {
    let lg = ln_gamma(eta);
    let ll = -y + eta * y.ln() + lower_series(eta, y).ln();
    lg + (-(ll - lg).exp()).ln_1p()
}

pub fn gamma_upper(eta: f64, y: f64) -> Result<f64> {
    ln_gamma_upper(eta, y).map(f64::exp)
}

/// ln γ(η, y) for η > 0, y ≥ 0 (−∞ at y = 0).
pub fn ln_gamma_lower(eta: f64, y: f64) -> Result<f64> {
    ensure!(eta > 0.0 && eta.is_finite(), "gamma_lower needs eta > 0 (got {eta})");
    ensure!(y >= 0.0 && y.is_finite(), "gamma_lower needs finite y >= 0 (got {y})");
    if y == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if y < eta + 1.0 {
        Ok(-y + eta * y.ln() + lower_series(eta, y).ln())
    } else {
        let lg = ln_gamma(eta);
        let lu = -y + eta * y.ln() + upper_cf(eta, y).ln();
        Ok(lg + (-(lu - lg).exp()).ln_1p())
    }
}

pub fn gamma_lower(eta: f64, y: f64) -> Result<f64> {
    ln_gamma_lower(eta, y).map(f64::exp)
}

/// ln h(η, y) with h(η,y) = ∫_0^y t^{η−1} e^{t} dt, η > 0.
pub fn ln_h_exp(eta: f64, y: f64) -> Result<f64> {
    ensure!(eta > 0.0 && eta.is_finite(), "h_exp needs eta > 0 (got {eta})");
    ensure!(y >= 0.0 && y.is_finite(), "h_exp needs finite y >= 0 (got {y})");
    if y == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if y <= 50.0 {
        // y^η Σ y^m/(m!(η+m))
        let mut pow = 1.0;
        let mut sum = 1.0 / eta;
        for m in 1..10_000 {
            pow *= y / m as f64;
            let term = pow / (eta + m as f64);
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        return Ok(eta * y.ln() + sum.ln());
    }
    // e^y y^{η−1} Σ (1−η)…(j−η)/y^j, truncated at the smallest term
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for j in 1..200 {
        let next = term * (j as f64 - eta) / y;
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    Ok(y + (eta - 1.0) * y.ln() + sum.ln())
}

pub fn h_exp(eta: f64, y: f64) -> Result<f64> {
    ln_h_exp(eta, y).map(f64::exp)
}

/// Numerically stable ln(e^a + e^b).
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// ln(e^a − e^b) for a ≥ b.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-(b - a).exp()).ln_1p()
}
