//! Closed-form extremal families, stored with the non-positive sign convention.

use serde::{Deserialize, Serialize};

use crate::constants::{alpha_nb, c_n, gamma_nb, Params, Weight};
use crate::error::{ensure, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "index", rename_all = "kebab-case")]
pub enum Family {
    /// Moser-type sequence for the `w0` weight, concentrating at `r = e^{-ℓ/n}`.
    MoserW0(f64),
    /// Moser-type sequence for the `w1` weight, needs `ℓ > n`.
    MoserW1(f64),
    /// Double-log sequence for `w1` with `β = 1`.
    Dexp(f64),
    /// Unbounded truncated power of the log, `η > 0` small.
    TruncLog(f64),
    Zero,
    /// `-(1 - r²)`.
    Paraboloid,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::MoserW0(_) => "moser-w0",
            Family::MoserW1(_) => "moser-w1",
            Family::Dexp(_) => "dexp",
            Family::TruncLog(_) => "trunc-log",
            Family::Zero => "zero",
            Family::Paraboloid => "paraboloid",
        }
    }

    pub fn index(&self) -> Option<f64> {
        match *self {
            Family::MoserW0(x) | Family::MoserW1(x) | Family::Dexp(x) | Family::TruncLog(x) => Some(x),
            Family::Zero | Family::Paraboloid => None,
        }
    }

    pub fn from_name(name: &str, index: Option<f64>) -> std::result::Result<Family, String> {
        let need = |i: Option<f64>| i.ok_or_else(|| format!("family '{name}' needs an index"));
        Ok(match name.to_ascii_lowercase().replace('_', "-").as_str() {
            "moser-w0" => Family::MoserW0(need(index)?),
            "moser-w1" => Family::MoserW1(need(index)?),
            "dexp" => Family::Dexp(need(index)?),
            "trunc-log" => Family::TruncLog(need(index)?),
            "zero" => Family::Zero,
            "paraboloid" => Family::Paraboloid,
            other => return Err(format!("unknown family '{other}'")),
        })
    }

    /// The weight the family is normalized for.
    pub fn natural_weight(&self) -> Option<Weight> {
        match self {
            Family::MoserW0(_) | Family::TruncLog(_) => Some(Weight::W0),
            Family::MoserW1(_) | Family::Dexp(_) => Some(Weight::W1),
            Family::Zero | Family::Paraboloid => None,
        }
    }
}

/// Per-family coefficients, precomputed at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `-amp (t/b)^{pw}` for `t < b`, `-amp` after.
    PowerCap {
        amp: f64,
        b: f64,
        pw: f64,
    },
    /// `-amp ((n(1+t))^{pw} - npw) / lpw` for `t < b`, constant after.
    ShiftedPowerCap {
        amp: f64,
        b: f64,
        pw: f64,
        n: f64,
        npw: f64,
        lpw: f64,
    },
    /// `-amp ln(1+t)` for `t < b`, constant after.
    LogCap {
        amp: f64,
        b: f64,
    },
    /// `-nt` for `nt < 1`, `-(nt)^a` after.
    LinearThenPower {
        n: f64,
        a: f64,
    },
    Zero,
    Paraboloid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub family: Family,
    pub params: Params,
    shape: Shape,
}

impl ClosedForm {
    pub fn new(family: Family, params: Params) -> Result<Self> {
        params.validate_tm()?;
        let nf = params.n as f64;
        let beta = params.beta;
        if let Some(w) = family.natural_weight() {
            ensure!(
                params.weight == w,
                "family {} is defined for weight {}, not {}",
                family.name(),
                w.name(),
                params.weight.name()
            );
        }
        let shape = match family {
            Family::MoserW0(ell) => {
                ensure!(ell >= 1.0 && ell.is_finite(), "moser-w0 needs index ell >= 1 (got {ell})");
                ensure!((0.0..1.0).contains(&beta), "moser-w0 needs 0 <= beta < 1 (got {beta})");
                let g = gamma_nb(params.n, beta);
                let a = alpha_nb(params.n, params.k, beta);
                Shape::PowerCap { amp: (ell / a).powf(1.0 / g), b: ell / nf, pw: 1.0 - beta }
            }
            Family::MoserW1(ell) => {
                ensure!(ell > nf && ell.is_finite(), "moser-w1 needs index ell > n = {nf} (got {ell})");
                ensure!((0.0..1.0).contains(&beta), "moser-w1 needs 0 <= beta < 1 (got {beta})");
                let g = gamma_nb(params.n, beta);
                let a = alpha_nb(params.n, params.k, beta);
                let pw = 1.0 - beta;
                let (lpw, npw) = (ell.powf(pw), nf.powf(pw));
                let rho = lpw / (lpw - npw);
                let amp = (ell / a).powf(1.0 / g) * rho.powf(1.0 / (params.k as f64 + 1.0));
                Shape::ShiftedPowerCap { amp, b: ell / nf - 1.0, pw, n: nf, npw, lpw }
            }
            Family::Dexp(ell) => {
                ensure!(ell >= 1.0 && ell.is_finite(), "dexp needs index ell >= 1 (got {ell})");
                ensure!(beta == 1.0, "dexp is defined for beta = 1 (got {beta})");
                let amp = (c_n(params.n, params.k) * ell.ln_1p()).powf(-1.0 / (params.k as f64 + 1.0));
                Shape::LogCap { amp, b: ell }
            }
            Family::TruncLog(eta) => {
                ensure!((0.0..1.0).contains(&beta), "trunc-log needs 0 <= beta < 1 (got {beta})");
                let g = gamma_nb(params.n, beta);
                ensure!(eta > 0.0 && eta < 1.0 / g, "trunc-log needs 0 < eta < 1/gamma = {} (got {eta})", 1.0 / g);
                Shape::LinearThenPower { n: nf, a: 1.0 / g - eta }
            }
            Family::Zero => Shape::Zero,
            Family::Paraboloid => Shape::Paraboloid,
        };
        Ok(ClosedForm { family, params, shape })
    }

    /// Kink location in `t`, if any.
    pub fn breakpoint(&self) -> Option<f64> {
        match self.shape {
            Shape::PowerCap { b, .. } | Shape::ShiftedPowerCap { b, .. } | Shape::LogCap { b, .. } => Some(b),
            Shape::LinearThenPower { n, .. } => Some(1.0 / n),
            Shape::Zero | Shape::Paraboloid => None,
        }
    }

    /// First `t` from which the profile is constant.
    pub fn plateau_start(&self) -> Option<f64> {
        match self.shape {
            Shape::Zero => Some(0.0),
            Shape::LinearThenPower { .. } | Shape::Paraboloid => None,
            _ => self.breakpoint(),
        }
    }

    fn side(&self, t: f64) -> Side {
        match self.breakpoint() {
            Some(b) if t >= b => Side::Right,
            _ => Side::Left,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.branch(self.side(t), t).0
    }

    pub fn dvdt(&self, t: f64) -> f64 {
        self.branch(self.side(t), t).1
    }

    pub fn d2vdt2(&self, t: f64) -> f64 {
        self.branch(self.side(t), t).2
    }

    /// Value and first two `t`-derivatives of the formula valid on `side` of the kink,
    /// continued analytically to any `t` where that formula makes sense.
    pub fn branch(&self, side: Side, t: f64) -> (f64, f64, f64) {
        match (self.shape, side) {
            (Shape::PowerCap { amp, b, pw }, Side::Left) => {
                let x = t / b;
                let p = x.powf(pw);
                (-amp * p, -amp * pw * p / t, -amp * pw * (pw - 1.0) * p / (t * t))
            }
            (Shape::PowerCap { amp, .. }, Side::Right) => (-amp, 0.0, 0.0),
            (Shape::ShiftedPowerCap { amp, pw, n, npw, lpw, .. }, Side::Left) => {
                let s = 1.0 + t;
                let p = (n * s).powf(pw);
                (-amp * (p - npw) / lpw, -amp * pw * p / (s * lpw), -amp * pw * (pw - 1.0) * p / (s * s * lpw))
            }
            (Shape::ShiftedPowerCap { amp, pw, n, npw, lpw, b }, Side::Right) => {
                let p = (n * (1.0 + b)).powf(pw);
                (-amp * (p - npw) / lpw, 0.0, 0.0)
            }
            (Shape::LogCap { amp, .. }, Side::Left) => {
                let s = 1.0 + t;
                (-amp * t.ln_1p(), -amp / s, amp / (s * s))
            }
            (Shape::LogCap { amp, b }, Side::Right) => (-amp * b.ln_1p(), 0.0, 0.0),
            (Shape::LinearThenPower { n, .. }, Side::Left) => (-n * t, -n, 0.0),
            (Shape::LinearThenPower { n, a }, Side::Right) => {
                let s = n * t;
                let p = s.powf(a);
                (-p, -n * a * p / s, -n * n * a * (a - 1.0) * p / (s * s))
            }
            (Shape::Zero, _) => (0.0, 0.0, 0.0),
            (Shape::Paraboloid, _) => {
                let e = (-2.0 * t).exp();
                (-(-(-2.0 * t).exp_m1()), -2.0 * e, 4.0 * e)
            }
        }
    }
}
