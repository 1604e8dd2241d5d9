//! Log-weighted Hardy inequalities
//!
//! ```text
//! (∫_0^R |v|^p L^θ t^α dt)^{1/p} ≤ C (∫_0^R |v'|^q L^μ t^ν dt)^{1/q},   v(R) = 0,
//! ```
//!
//! with `L = ln(R/t)` or `ln(eR/t)`: an exact decision oracle over the published
//! iff-lists (each item kept both as printed and as re-derived from the endpoint
//! asymptotics), and an independent numerical evaluation of the Muckenhoupt / Mazya
//! criteria the iff-lists come from.
//!
//! Numerics work in `s = ln(R/x) ∈ (0, ∞)`, so `L = s + y0` with `y0 ∈ {0, 1}`. Every
//! weight integral is then `∫ y^a e^{cs} ds`, evaluated in log space.

use serde::{Deserialize, Serialize};
use std::cell::Cell;

use crate::constants::Weight;
use crate::error::{ensure, Error, Result};
use crate::par::Execution;
use crate::quadrature::{integrate, LogKind};
use crate::special::log_add_exp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyQuery {
    /// Power of `t` on the left.
    pub alpha: f64,
    /// Log power on the left.
    pub theta: f64,
    /// Power of `t` on the right.
    pub nu: f64,
    /// Log power on the right.
    pub mu: f64,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub logkind: LogKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "Q_EQ_1")]
    QEq1,
    #[serde(rename = "Q_LE_P")]
    QLeP,
    #[serde(rename = "P_LT_Q")]
    PLtQ,
}

impl Regime {
    pub fn of(p: f64, q: f64) -> Regime {
        if q == 1.0 {
            Regime::QEq1
        } else if q <= p {
            Regime::QLeP
        } else {
            Regime::PLtQ
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::QEq1 => "Q_EQ_1",
            Regime::QLeP => "Q_LE_P",
            Regime::PLtQ => "P_LT_Q",
        }
    }
}

impl HardyQuery {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("alpha", self.alpha), ("theta", self.theta), ("nu", self.nu), ("mu", self.mu)] {
            ensure!(x.is_finite(), "{name} must be finite");
        }
        ensure!(self.p.is_finite() && self.p >= 1.0, "p must satisfy p >= 1 (got {})", self.p);
        ensure!(self.q.is_finite() && self.q >= 1.0, "q must satisfy q >= 1 (got {})", self.q);
        ensure!(self.r.is_finite() && self.r > 0.0, "R must be finite and positive (got {})", self.r);
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.p, self.q)
    }

    fn y0(&self) -> f64 {
        match self.logkind {
            LogKind::OneOverR => 0.0,
            LogKind::EOverR => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyVerdict {
    pub holds: bool,
    /// First re-derived item that holds; a trailing `*` marks items whose printed
    /// form does not hold at this query (the correction is what made it match).
    pub matched_condition: Option<String>,
    pub regime: Regime,
    /// Verdict of the item list exactly as printed.
    pub printed_holds: bool,
    pub printed_condition: Option<String>,
    /// True when some boundary comparison was decided inside the 1e-12 equality band.
    pub band: bool,
    pub notes: Vec<String>,
}

/// Comparisons with a relative equality band; records whether the band was used.
struct Cmp {
    band: Cell<bool>,
}

const EQ_BAND: f64 = 1e-12;

impl Cmp {
    fn new() -> Self {
        Cmp { band: Cell::new(false) }
    }
    fn eq(&self, a: f64, b: f64) -> bool {
        let d = (a - b).abs();
        if d == 0.0 {
            return true;
        }
        if d <= EQ_BAND * 1f64.max(a.abs()).max(b.abs()) {
            self.band.set(true);
            return true;
        }
        false
    }
    fn lt(&self, a: f64, b: f64) -> bool {
        a < b && !self.eq(a, b)
    }
    fn le(&self, a: f64, b: f64) -> bool {
        a < b || self.eq(a, b)
    }
    fn gt(&self, a: f64, b: f64) -> bool {
        self.lt(b, a)
    }
    fn ge(&self, a: f64, b: f64) -> bool {
        self.le(b, a)
    }
}

type Pred<Q> = fn(&Cmp, &Q) -> bool;

struct Item<Q> {
    label: &'static str,
    printed: Option<Pred<Q>>,
    /// `None`: the printed item is not a sufficient condition and is withdrawn.
    corrected: Option<Pred<Q>>,
}

fn same<Q>(label: &'static str, f: Pred<Q>) -> Item<Q> {
    Item { label, printed: Some(f), corrected: Some(f) }
}

fn fixed<Q>(label: &'static str, printed: Pred<Q>, corrected: Pred<Q>) -> Item<Q> {
    Item { label, printed: Some(printed), corrected: Some(corrected) }
}

fn withdrawn<Q>(label: &'static str, printed: Pred<Q>) -> Item<Q> {
    Item { label, printed: Some(printed), corrected: None }
}

struct ItemList<Q: 'static> {
    prefix: &'static str,
    header: Option<Pred<Q>>,
    items: Vec<Item<Q>>,
}

struct Evaluation {
    holds: bool,
    matched: Option<String>,
    printed_holds: bool,
    printed_matched: Option<String>,
}

impl<Q> ItemList<Q> {
    fn evaluate(&self, c: &Cmp, q: &Q) -> Evaluation {
        let header = self.header.is_none_or(|h| h(c, q));
        let mut ev = Evaluation { holds: false, matched: None, printed_holds: false, printed_matched: None };
        for it in &self.items {
            let printed = header && it.printed.is_some_and(|f| f(c, q));
            let corrected = header && it.corrected.is_some_and(|f| f(c, q));
            if printed && ev.printed_matched.is_none() {
                ev.printed_holds = true;
                ev.printed_matched = Some(format!("{}({})", self.prefix, it.label));
            }
            if corrected && ev.matched.is_none() {
                ev.holds = true;
                let star = if printed { "" } else { "*" };
                ev.matched = Some(format!("{}({}{})", self.prefix, it.label, star));
            }
        }
        ev
    }
}

// Shorthands for the iff-lists below.
fn crit_p(h: &HardyQuery) -> f64 {
    -h.q * (h.theta + 1.0) / (h.q - 1.0 - h.mu)
}
fn crit_alpha(h: &HardyQuery) -> f64 {
    (h.nu - h.q + 1.0) * h.p / h.q - 1.0
}
fn crit_p_upper(h: &HardyQuery) -> f64 {
    (h.alpha + 1.0) * h.q / (h.nu - h.q + 1.0)
}

/// `ln(R/t)`, `q = 1`.
fn log_r_q1() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.1",
        header: None,
        items: vec![
            same("i", |c, h| {
                c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.eq(h.nu, 0.0) && c.eq(h.mu, (h.theta + 1.0) / h.p)
            }),
            same("ii", |c, h| {
                c.ge(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.nu, 0.0) && c.le(h.mu, (h.theta + 1.0) / h.p)
            }),
            fixed(
                "iii",
                |c, h| {
                    let a1p = (h.alpha + 1.0) / h.p;
                    c.gt(h.alpha, -1.0)
                        && c.lt(h.theta, -1.0)
                        && c.ge(h.nu, 0.0)
                        && c.le(h.nu, a1p)
                        && c.le(h.theta / h.p, h.mu)
                        && c.le(h.mu, (h.theta + 1.0) / h.p)
                },
                |c, h| {
                    let a1p = (h.alpha + 1.0) / h.p;
                    c.gt(h.alpha, -1.0)
                        && c.lt(h.theta, -1.0)
                        && c.le(h.mu, (h.theta + 1.0) / h.p)
                        && c.ge(h.nu, 0.0)
                        && (c.lt(h.nu, a1p) || (c.eq(h.nu, a1p) && c.le(h.theta / h.p, h.mu)))
                },
            ),
            fixed(
                "iv",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.eq(h.theta, -1.0)
                        && c.ge(h.nu, 0.0)
                        && c.le(h.nu, (h.alpha + 1.0) / h.p)
                        && c.le(-1.0 / h.p, h.mu)
                        && c.lt(h.mu, 0.0)
                },
                |c, h| {
                    let a1p = (h.alpha + 1.0) / h.p;
                    c.gt(h.alpha, -1.0)
                        && c.eq(h.theta, -1.0)
                        && c.lt(h.mu, 0.0)
                        && c.ge(h.nu, 0.0)
                        && (c.lt(h.nu, a1p) || (c.eq(h.nu, a1p) && c.le(-1.0 / h.p, h.mu)))
                },
            ),
            same("v", |c, h| c.gt(h.alpha, -1.0) && c.eq(h.theta, -1.0) && c.lt(h.nu, 0.0) && c.lt(h.mu, 0.0)),
            fixed(
                "vi",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.gt(h.theta, -1.0)
                        && c.le(h.theta, 0.0)
                        && c.ge(h.nu, 0.0)
                        && c.le(h.nu, (h.alpha + 1.0) / h.p)
                        && c.le(h.theta / h.p, h.mu)
                        && c.le(h.mu, 0.0)
                },
                |c, h| {
                    let a1p = (h.alpha + 1.0) / h.p;
                    c.gt(h.alpha, -1.0)
                        && c.gt(h.theta, -1.0)
                        && c.le(h.mu, 0.0)
                        && c.ge(h.nu, 0.0)
                        && (c.lt(h.nu, a1p) || (c.eq(h.nu, a1p) && c.le(h.theta / h.p, h.mu)))
                },
            ),
            fixed(
                "vii",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.gt(h.theta, -1.0)
                        && c.le(h.theta, 0.0)
                        && c.lt(h.nu, 0.0)
                        && c.le(h.mu, 0.0)
                },
                |c, h| c.gt(h.alpha, -1.0) && c.gt(h.theta, -1.0) && c.lt(h.nu, 0.0) && c.le(h.mu, 0.0),
            ),
        ],
    }
}

/// `ln(R/t)`, `1 < q ≤ p`.
fn log_r_q_le_p() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.2",
        header: Some(|c, h| c.lt(h.mu, h.q - 1.0)),
        items: vec![
            same("i", |c, h| {
                c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.nu, h.q - 1.0) && c.ge(h.p, crit_p(h))
            }),
            same("ii", |c, h| {
                c.eq(h.alpha, -1.0) && c.le(h.theta, h.mu - h.q) && c.eq(h.nu, h.q - 1.0) && c.eq(h.p, crit_p(h))
            }),
            same("iii", |c, h| {
                c.gt(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.le(h.nu, h.q - 1.0) && c.ge(h.p, crit_p(h))
            }),
            same("iv", |c, h| {
                c.gt(h.alpha, crit_alpha(h)) && c.lt(h.theta, -1.0) && c.gt(h.nu, h.q - 1.0) && c.ge(h.p, crit_p(h))
            }),
            same("v", |c, h| {
                c.eq(h.alpha, crit_alpha(h))
                    && c.lt(h.theta, -1.0)
                    && c.gt(h.nu, h.q - 1.0)
                    && c.ge(h.p, crit_p(h))
                    && c.le(h.theta / h.p, h.mu / h.q)
            }),
            same("vi", |c, h| c.gt(h.alpha, -1.0) && c.ge(h.theta, -1.0) && c.le(h.nu, h.q - 1.0)),
            same("vii", |c, h| c.gt(h.alpha, crit_alpha(h)) && c.ge(h.theta, -1.0) && c.gt(h.nu, h.q - 1.0)),
            same("viii", |c, h| {
                c.eq(h.alpha, crit_alpha(h))
                    && c.ge(h.theta, -1.0)
                    && c.gt(h.nu, h.q - 1.0)
                    && c.le(h.theta / h.p, h.mu / h.q)
            }),
        ],
    }
}

/// `ln(R/t)`, `p < q`.
fn log_r_p_lt_q() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.3",
        header: Some(|c, h| c.lt(h.mu, h.q - 1.0)),
        items: vec![
            same("i", |c, h| {
                c.ge(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.nu, h.q - 1.0) && c.gt(h.p, crit_p(h))
            }),
            same("ii", |c, h| {
                c.gt(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.eq(h.nu, h.q - 1.0) && c.gt(h.p, crit_p(h))
            }),
            same("iii", |c, h| {
                c.gt(h.alpha, -1.0) && c.gt(h.nu, h.q - 1.0) && c.lt(crit_p(h), h.p) && c.lt(h.p, crit_p_upper(h))
            }),
            same("iv", |c, h| {
                c.gt(h.alpha, -1.0)
                    && c.gt(h.nu, h.q - 1.0)
                    && c.lt(crit_p(h), h.p)
                    && c.eq(h.p, crit_p_upper(h))
                    && c.gt(h.p * (h.mu + 1.0), h.q * (h.theta + 1.0))
            }),
            same("v", |c, h| c.gt(h.alpha, -1.0) && c.ge(h.theta, -1.0) && c.le(h.nu, h.q - 1.0)),
        ],
    }
}

/// `ln(eR/t)`, `q = 1`.
fn log_er_q1() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.4",
        header: None,
        items: vec![
            same("i", |c, h| {
                c.eq(h.alpha, -1.0)
                    && c.lt(h.theta, -1.0)
                    && c.le((h.theta + 1.0) / h.p, h.mu)
                    && c.lt(h.mu, 0.0)
                    && c.eq(h.nu, 0.0)
            }),
            same("ii", |c, h| c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.mu, 0.0) && c.lt(h.nu, 0.0)),
            same("iii", |c, h| c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.ge(h.mu, 0.0) && c.le(h.nu, 0.0)),
            withdrawn("iv", |c, h| c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.gt(h.mu, 0.0) && c.gt(h.nu, 0.0)),
            same("v", |c, h| c.gt(h.alpha, -1.0) && c.le(h.nu, 0.0)),
            fixed(
                "vi",
                |c, h| c.gt(h.alpha, -1.0) && c.le(h.mu, 0.0) && c.gt(h.nu, 0.0) && c.lt(h.nu, (h.alpha + 1.0) / h.p),
                |c, h| c.gt(h.alpha, -1.0) && c.gt(h.nu, 0.0) && c.lt(h.nu, (h.alpha + 1.0) / h.p),
            ),
            fixed(
                "vii",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.le(h.theta, h.mu * h.p)
                        && c.le(h.mu, 0.0)
                        && c.eq(h.nu, (h.alpha + 1.0) / h.p)
                },
                |c, h| c.gt(h.alpha, -1.0) && c.le(h.theta, h.mu * h.p) && c.eq(h.nu, (h.alpha + 1.0) / h.p),
            ),
            withdrawn("viii", |c, h| c.gt(h.alpha, -1.0) && c.gt(h.mu, 0.0) && c.gt(h.nu, 0.0)),
        ],
    }
}

/// `ln(eR/t)`, `1 < q ≤ p`.
fn log_er_q_le_p() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.5",
        header: None,
        items: vec![
            same("i", |c, h| c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.nu, h.q - 1.0)),
            fixed(
                "ii",
                |c, h| {
                    c.eq(h.alpha, -1.0)
                        && c.lt(h.theta, -1.0)
                        && c.eq(h.nu, h.q - 1.0)
                        && c.lt(h.mu, h.q - 1.0)
                        && c.ge(h.p, crit_p(h))
                },
                |c, h| {
                    c.eq(h.alpha, -1.0)
                        && c.lt(h.theta, -1.0)
                        && c.eq(h.nu, h.q - 1.0)
                        && c.lt(h.mu, h.q - 1.0)
                        && c.le(h.p, crit_p(h))
                },
            ),
            same("iii", |c, h| {
                c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.eq(h.nu, h.q - 1.0) && c.ge(h.mu, h.q - 1.0)
            }),
            same("iv", |c, h| c.gt(h.alpha, -1.0) && c.le(h.nu, h.q - 1.0)),
            same("v", |c, h| c.gt(h.alpha, crit_alpha(h)) && c.gt(h.nu, h.q - 1.0)),
            same("vi", |c, h| c.eq(h.alpha, crit_alpha(h)) && c.gt(h.nu, h.q - 1.0) && c.le(h.theta / h.p, h.mu / h.q)),
        ],
    }
}

/// `ln(eR/t)`, `p < q`.
fn log_er_p_lt_q() -> ItemList<HardyQuery> {
    ItemList {
        prefix: "Prop2.6",
        header: None,
        items: vec![
            same("i", |c, h| c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.lt(h.nu, h.q - 1.0)),
            same("ii", |c, h| {
                c.eq(h.alpha, -1.0)
                    && c.lt(h.theta, -1.0)
                    && c.eq(h.nu, h.q - 1.0)
                    && c.lt(h.mu, h.q - 1.0)
                    && c.lt(h.p, crit_p(h))
            }),
            same("iii", |c, h| {
                c.eq(h.alpha, -1.0) && c.lt(h.theta, -1.0) && c.eq(h.nu, h.q - 1.0) && c.ge(h.mu, h.q - 1.0)
            }),
            same("iv", |c, h| c.gt(h.alpha, -1.0) && c.le(h.nu, h.q - 1.0)),
            same("v", |c, h| c.gt(h.alpha, -1.0) && c.gt(h.nu, h.q - 1.0) && c.lt(h.p, crit_p_upper(h))),
            same("vi", |c, h| {
                c.gt(h.alpha, -1.0)
                    && c.gt(h.nu, h.q - 1.0)
                    && c.eq(h.p, crit_p_upper(h))
                    && c.gt(h.p * (h.mu + 1.0), h.q * (h.theta + 1.0))
            }),
        ],
    }
}

fn item_list(kind: LogKind, regime: Regime) -> ItemList<HardyQuery> {
    match (kind, regime) {
        (LogKind::OneOverR, Regime::QEq1) => log_r_q1(),
        (LogKind::OneOverR, Regime::QLeP) => log_r_q_le_p(),
        (LogKind::OneOverR, Regime::PLtQ) => log_r_p_lt_q(),
        (LogKind::EOverR, Regime::QEq1) => log_er_q1(),
        (LogKind::EOverR, Regime::QLeP) => log_er_q_le_p(),
        (LogKind::EOverR, Regime::PLtQ) => log_er_p_lt_q(),
    }
}

fn verdict(ev: Evaluation, regime: Regime, band: bool, mut notes: Vec<String>) -> HardyVerdict {
    if ev.holds != ev.printed_holds {
        notes.push(format!(
            "the printed item list gives holds = {}; the re-derived list gives {}",
            ev.printed_holds, ev.holds
        ));
    }
    if band {
        notes.push("a boundary comparison was decided inside the 1e-12 equality band".into());
    }
    HardyVerdict {
        holds: ev.holds,
        matched_condition: ev.matched,
        regime,
        printed_holds: ev.printed_holds,
        printed_condition: ev.printed_matched,
        band,
        notes,
    }
}

/// Decides the inequality by evaluating the regime's iff-list.
pub fn decide(h: &HardyQuery) -> HardyVerdict {
    let regime = h.regime();
    let c = Cmp::new();
    let ev = item_list(h.logkind, regime).evaluate(&c, h);
    let mut notes = Vec::new();
    if h.logkind == LogKind::OneOverR && regime == Regime::QEq1 && ev.matched.as_deref() == Some("Prop2.1(i)") {
        notes.push("the case table states mu = (theta+1)/q for this item; the item list's (theta+1)/p is used".into());
    }
    verdict(ev, regime, c.band.get(), notes)
}

// ---------------------------------------------------------------------------------------
// k-Hessian form

/// The Hardy inequality with `t^{n−k} w(t) |v'|^{k+1}` on the right and `t^α |v|^p` on the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianHardyQuery {
    pub alpha: f64,
    pub beta: f64,
    pub n: f64,
    pub k: f64,
    pub p: f64,
    pub weight: Weight,
}

impl HessianHardyQuery {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("alpha", self.alpha), ("beta", self.beta), ("n", self.n), ("k", self.k)] {
            ensure!(x.is_finite(), "{name} must be finite");
        }
        ensure!(self.k >= 0.0, "k must satisfy k >= 0 (got {})", self.k);
        ensure!(self.p.is_finite() && self.p >= 1.0, "p must satisfy p >= 1 (got {})", self.p);
        Ok(())
    }

    /// `q = k+1, θ = 0, μ = βn/2, ν = n−k` on `(0, 1)`.
    pub fn to_query(&self) -> HardyQuery {
        HardyQuery {
            alpha: self.alpha,
            theta: 0.0,
            nu: self.n - self.k,
            mu: self.beta * self.n / 2.0,
            p: self.p,
            q: self.k + 1.0,
            r: 1.0,
            logkind: match self.weight {
                Weight::W0 => LogKind::OneOverR,
                Weight::W1 => LogKind::EOverR,
            },
        }
    }
}

fn hess_crit(h: &HessianHardyQuery) -> f64 {
    (h.alpha + 1.0) * (h.k + 1.0) / (h.n - 2.0 * h.k)
}

fn w0_hessian_list() -> ItemList<HessianHardyQuery> {
    ItemList {
        prefix: "Thm2.1",
        header: None,
        items: vec![
            same("i", |c, h| c.gt(h.alpha, -1.0) && c.ge(h.beta, 0.0) && c.lt(h.n, 0.0) && c.eq(h.k, 0.0)),
            same("ii", |c, h| c.gt(h.alpha, -1.0) && c.eq(h.n, 0.0) && c.eq(h.k, 0.0)),
            fixed(
                "iii",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.eq(h.beta, 0.0)
                        && c.gt(h.n, 0.0)
                        && c.eq(h.k, 0.0)
                        && c.le(h.p, (h.alpha + 1.0) / h.n)
                },
                |c, h| {
                    let bound = (h.alpha + 1.0) / h.n;
                    c.gt(h.alpha, -1.0)
                        && c.le(h.beta, 0.0)
                        && c.gt(h.n, 0.0)
                        && c.eq(h.k, 0.0)
                        && (c.lt(h.p, bound) || (c.eq(h.p, bound) && c.eq(h.beta, 0.0)))
                },
            ),
            same("iv", |c, h| {
                c.gt(h.alpha, -1.0) && c.lt(h.beta * h.n, 2.0 * h.k) && c.le(h.n, 2.0 * h.k) && c.gt(h.k, 0.0)
            }),
            same("v", |c, h| {
                c.gt(h.alpha, -1.0)
                    && c.lt(h.beta * h.n, 2.0 * h.k)
                    && c.gt(h.n, 2.0 * h.k)
                    && c.gt(h.k, 0.0)
                    && c.lt(h.p, hess_crit(h))
            }),
            same("vi", |c, h| {
                c.gt(h.alpha, -1.0)
                    && c.le(0.0, h.beta * h.n)
                    && c.lt(h.beta * h.n, 2.0 * h.k)
                    && c.gt(h.n, 2.0 * h.k)
                    && c.gt(h.k, 0.0)
                    && c.le(h.k + 1.0, h.p)
                    && c.eq(h.p, hess_crit(h))
            }),
            same("vii", |c, h| {
                c.gt(h.alpha, -1.0)
                    && c.lt((2.0 * h.k + 2.0) / h.p - 2.0, h.beta * h.n)
                    && c.lt(h.beta * h.n, 2.0 * h.k)
                    && c.gt(h.n, 2.0 * h.k)
                    && c.gt(h.k, 0.0)
                    && c.eq(h.p, hess_crit(h))
                    && c.lt(h.p, h.k + 1.0)
            }),
        ],
    }
}

fn w1_hessian_list() -> ItemList<HessianHardyQuery> {
    ItemList {
        prefix: "Thm2.2",
        header: None,
        items: vec![
            same("i", |c, h| c.gt(h.alpha, -1.0) && c.le(h.n, 0.0) && c.eq(h.k, 0.0)),
            same("ii", |c, h| c.gt(h.alpha, -1.0) && c.le(h.n, 2.0 * h.k) && c.gt(h.k, 0.0)),
            fixed(
                "iii",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.le(h.beta, 0.0)
                        && c.lt(0.0, h.n)
                        && c.lt(h.n, (h.alpha + 1.0) / h.p)
                        && c.eq(h.k, 0.0)
                },
                |c, h| c.gt(h.alpha, -1.0) && c.lt(0.0, h.n) && c.lt(h.n, (h.alpha + 1.0) / h.p) && c.eq(h.k, 0.0),
            ),
            fixed(
                "iv",
                |c, h| c.gt(h.alpha, -1.0) && c.eq(h.beta, 0.0) && c.eq(h.n, (h.alpha + 1.0) / h.p) && c.eq(h.k, 0.0),
                |c, h| c.gt(h.alpha, -1.0) && c.ge(h.beta, 0.0) && c.eq(h.n, (h.alpha + 1.0) / h.p) && c.eq(h.k, 0.0),
            ),
            withdrawn("v", |c, h| c.gt(h.alpha, -1.0) && c.gt(h.beta, 0.0) && c.gt(h.n, 0.0) && c.eq(h.k, 0.0)),
            same("vi", |c, h| c.gt(h.alpha, -1.0) && c.gt(h.n, 2.0 * h.k) && c.gt(h.k, 0.0) && c.lt(h.p, hess_crit(h))),
            fixed(
                "vii",
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.ge(h.beta, 0.0)
                        && c.gt(h.n, 2.0 * h.k)
                        && c.gt(h.k, 0.0)
                        && c.eq(h.p, hess_crit(h))
                },
                |c, h| {
                    c.gt(h.alpha, -1.0)
                        && c.gt(h.n, 2.0 * h.k)
                        && c.gt(h.k, 0.0)
                        && c.eq(h.p, hess_crit(h))
                        && ((c.ge(h.p, h.k + 1.0) && c.ge(h.beta, 0.0))
                            || (c.lt(h.p, h.k + 1.0) && c.lt((2.0 * h.k + 2.0) / h.p - 2.0, h.beta * h.n)))
                },
            ),
        ],
    }
}

/// Decides the k-Hessian form through its own item list.
pub fn decide_hessian(h: &HessianHardyQuery) -> Result<HardyVerdict> {
    h.validate()?;
    let regime = Regime::of(h.p, h.k + 1.0);
    let c = Cmp::new();
    let list = match h.weight {
        Weight::W0 => w0_hessian_list(),
        Weight::W1 => w1_hessian_list(),
    };
    let ev = list.evaluate(&c, h);
    Ok(verdict(ev, regime, c.band.get(), Vec::new()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingVerdict {
    pub embeds: bool,
    /// `k* = (α+1)(k+1)/(n−2k)`; `None` stands for ∞ (`k ≥ n/2`).
    pub critical_exponent: Option<f64>,
    /// Whether `p` sits at the critical exponent, where the extra β-condition applies.
    pub critical_condition_applied: bool,
    /// The verdict with the critical-case condition exactly as printed.
    pub printed_embeds: bool,
    pub notes: Vec<String>,
}

/// Continuous embedding of the weighted Sobolev space into `L^p_α(0,R)`.
pub fn embedding_conditions(e: &HessianHardyQuery) -> Result<EmbeddingVerdict> {
    e.validate()?;
    ensure!(e.n >= 1.0, "n must satisfy n >= 1 (got {})", e.n);
    ensure!(e.k >= 1.0, "k must satisfy k >= 1 (got {})", e.k);
    ensure!(e.alpha > -1.0, "alpha must satisfy alpha > -1 (got {})", e.alpha);
    if e.weight == Weight::W0 {
        ensure!(e.beta * e.n < 2.0 * e.k, "the w0 weight needs beta*n < 2k (got beta*n = {})", e.beta * e.n);
    }
    let c = Cmp::new();
    if c.ge(e.k, e.n / 2.0) {
        return Ok(EmbeddingVerdict {
            embeds: true,
            critical_exponent: None,
            critical_condition_applied: false,
            printed_embeds: true,
            notes: Vec::new(),
        });
    }
    let kstar = hess_crit(e);
    let at_crit = c.eq(e.p, kstar);
    let embeds = decide_hessian(e)?.holds;
    let printed_embeds = if at_crit {
        match e.weight {
            Weight::W0 if c.ge(e.alpha + 1.0, e.n - 2.0 * e.k) => c.ge(e.beta, 0.0),
            Weight::W0 => c.gt(e.beta * e.n / 2.0, (e.n - 2.0 * e.k) / (e.alpha + 1.0) - 1.0),
            Weight::W1 => c.ge(e.beta, 0.0),
        }
    } else {
        c.lt(e.p, kstar)
    };
    let mut notes = Vec::new();
    if embeds != printed_embeds {
        notes.push(format!(
            "the printed critical-case condition gives embeds = {printed_embeds}; below k+1 the ln(e/r) weight \
             needs beta*n > (2k+2)/p - 2 as the w0 weight does"
        ));
    }
    Ok(EmbeddingVerdict {
        embeds,
        critical_exponent: Some(kstar),
        critical_condition_applied: at_crit,
        printed_embeds,
        notes,
    })
}

// ---------------------------------------------------------------------------------------
// Numerical criteria

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Finite,
    Infinite,
    Undecided,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Finite => "FINITE",
            Classification::Infinite => "INFINITE",
            Classification::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub classification: Classification,
    /// Behaviour as `x → 0`.
    pub near_zero: Classification,
    /// Behaviour as `x → R`.
    pub near_r: Classification,
    /// ln-increments of the tracked quantity over the last three decades toward each end.
    pub near_zero_steps: Vec<f64>,
    pub near_r_steps: Vec<f64>,
}

const PER_DECADE: i32 = 12;
const DECADES: i32 = 12;
/// Contributions below `e^{-CLIP}` of the peak are dropped.
const CLIP: f64 = 80.0;
const GROWTH: f64 = 1.5;
const STABLE: f64 = 1e-3;

/// Geometric grid `s = 10^{j/12}`, `|j| ≤ 144`.
fn s_grid() -> Vec<f64> {
    (-DECADES * PER_DECADE..=DECADES * PER_DECADE).map(|j| 10f64.powf(j as f64 / PER_DECADE as f64)).collect()
}

/// `ln ∫_{s1}^{s2} (s+y0)^a e^{cs} ds` (`s2` may be +∞). +∞ for divergent integrals, NaN if
/// the quadrature fails.
fn ln_integral(a: f64, c: f64, y0: f64, s1: f64, s2: f64) -> f64 {
    if s2 <= s1 {
        return f64::NEG_INFINITY;
    }
    let y1 = s1 + y0;
    if s2.is_infinite() {
        if c > 0.0 || (c == 0.0 && a >= -1.0) {
            return f64::INFINITY;
        }
        if c == 0.0 {
            if y1 == 0.0 {
                return f64::INFINITY;
            }
            return (a + 1.0) * y1.ln() - (-a - 1.0).ln();
        }
        let end = tail_end(a, c, y0, s1);
        return ln_integral(a, c, y0, s1, end);
    }
    let y2 = s2 + y0;
    if c == 0.0 {
        if y1 == 0.0 {
            if a <= -1.0 {
                return f64::INFINITY;
            }
            return (a + 1.0) * y2.ln() - (a + 1.0).ln();
        }
        let lr = ((y2 - y1) / y1).ln_1p();
        if a == -1.0 {
            return lr.ln();
        }
        let b = a + 1.0;
        // y1^b (e^{b lr} − 1)/b
        return b * y1.ln() + (b * lr).exp_m1().abs().ln() - b.abs().ln();
    }
    if y1 == 0.0 {
        if a <= -1.0 {
            return f64::INFINITY;
        }
        let sh = s2.min(1.0 / c.abs());
        let head = ln_head(a, c, sh);
        if sh >= s2 {
            return head;
        }
        return log_add_exp(head, ln_numeric(a, c, y0, sh, s2));
    }
    ln_numeric(a, c, y0, s1, s2)
}

fn phi(a: f64, c: f64, y0: f64, s: f64) -> f64 {
    let p = if a == 0.0 { 0.0 } else { a * (s + y0).ln() };
    p + c * s
}

/// `ln ∫_0^s y^a e^{cy} dy` by the series `s^{a+1} Σ (cs)^m / (m! (a+1+m))`, `|cs| ≤ 1`.
fn ln_head(a: f64, c: f64, s: f64) -> f64 {
    let x = c * s;
    let b = a + 1.0;
    let mut term = 1.0;
    let mut sum = 1.0 / b;
    for m in 1..200 {
        term *= x / m as f64;
        let t = term / (b + m as f64);
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    b * s.ln() + sum.ln()
}

/// First `s` past the peak where `φ` has dropped by `CLIP` (for `c < 0`).
fn tail_end(a: f64, c: f64, y0: f64, s1: f64) -> f64 {
    let crit = -a / c - y0;
    let start = if crit > s1 { crit } else { s1 };
    let m = phi(a, c, y0, start).max(phi(a, c, y0, s1));
    let mut d = 1.0f64.max(start);
    while phi(a, c, y0, start + d) > m - CLIP {
        d *= 2.0;
    }
    start + d
}

/// Bisection for `φ(x) = level` on a monotone piece, geometric in `y` while the range is wide.
fn cut(a: f64, c: f64, y0: f64, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    let up = phi(a, c, y0, hi) > phi(a, c, y0, lo);
    for _ in 0..200 {
        let (ylo, yhi) = (lo + y0, hi + y0);
        let mid = if ylo > 0.0 && yhi / ylo > 4.0 { (ylo * yhi).sqrt() - y0 } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if (phi(a, c, y0, mid) > level) == up {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ln_numeric(a: f64, c: f64, y0: f64, s1: f64, s2: f64) -> f64 {
    let f = |s: f64| phi(a, c, y0, s);
    let crit = if a != 0.0 { -a / c - y0 } else { f64::NAN };
    let mut pts = vec![s1];
    if crit > s1 && crit < s2 {
        pts.push(crit);
    }
    pts.push(s2);
    let m = pts.iter().map(|&s| f(s)).fold(f64::NEG_INFINITY, f64::max);
    let level = m - CLIP;
    let mut total = f64::NEG_INFINITY;
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo.max(fhi) < level {
            continue;
        }
        if flo < level {
            lo = cut(a, c, y0, lo, hi, level);
        } else if fhi < level {
            hi = cut(a, c, y0, lo, hi, level);
        }
        // geometric sub-panels in y, each integrated on a unit interval relative to its own peak
        let mut edges = vec![lo];
        let mut y = (lo + y0) * 4.0;
        while y < hi + y0 && edges.len() < 80 {
            edges.push(y - y0);
            y *= 4.0;
        }
        edges.push(hi);
        for e in edges.windows(2) {
            let (u0, u1) = (e[0], e[1]);
            let len = u1 - u0;
            if len <= 0.0 {
                continue;
            }
            // φ(u0 + x) − φ(u0) in a form that keeps its precision when u0 ≫ x
            let dphi = |x: f64| {
                let p = if a == 0.0 { 0.0 } else { a * (x / (u0 + y0)).ln_1p() };
                p + c * x
            };
            let base = f(u0);
            let peak = base.max(base + dphi(len));
            let g = |u: f64| (base - peak + dphi(u * len)).exp();
            match integrate(&g, 0.0, 1.0, &[], 1e-10) {
                Ok(r) if r.value > 0.0 => total = log_add_exp(total, peak + len.ln() + r.value.ln()),
                Ok(_) => {}
                Err(_) => return f64::NAN,
            }
        }
    }
    total
}

/// ln F, ln G and ln sup(1/g) on the grid, each with its `R` factor.
struct Profiles {
    s: Vec<f64>,
    ln_f: Vec<f64>,
    ln_g: Vec<f64>,
    ln_sup: Vec<f64>,
}

fn weight_profiles(h: &HardyQuery) -> Profiles {
    let s = s_grid();
    let n = s.len();
    let y0 = h.y0();
    let ln_r = h.r.ln();

    // F(s) = ∫_0^x L^θ t^α dt = R^{α+1} ∫_s^∞ y^θ e^{−(α+1)s'} ds'
    let (af, cf) = (h.theta, -(h.alpha + 1.0));
    let mut ln_f = vec![f64::NAN; n];
    if cf == 0.0 {
        for j in 0..n {
            ln_f[j] = ln_integral(af, cf, y0, s[j], f64::INFINITY);
        }
    } else {
        ln_f[n - 1] = ln_integral(af, cf, y0, s[n - 1], f64::INFINITY);
        for j in (0..n - 1).rev() {
            ln_f[j] = log_add_exp(ln_f[j + 1], ln_integral(af, cf, y0, s[j], s[j + 1]));
        }
    }
    for v in &mut ln_f {
        *v += (h.alpha + 1.0) * ln_r;
    }

    // G(s) = ∫_x^R g^{−1/(q−1)} dt = R^{1−ν'} ∫_0^s y^{−μ'} e^{(ν'−1)s'} ds'
    let mut ln_g = vec![f64::NAN; n];
    if h.q > 1.0 {
        let (mu1, nu1) = (h.mu / (h.q - 1.0), h.nu / (h.q - 1.0));
        let (ag, cg) = (-mu1, nu1 - 1.0);
        ln_g[0] = ln_integral(ag, cg, y0, 0.0, s[0]);
        for j in 1..n {
            ln_g[j] = log_add_exp(ln_g[j - 1], ln_integral(ag, cg, y0, s[j - 1], s[j]));
        }
        for v in &mut ln_g {
            *v += (1.0 - nu1) * ln_r;
        }
    }

    // sup over (x, R) of 1/g = L^{−μ} t^{−ν}: ψ(s) = −μ ln(s+y0) + νs − ν ln R
    let psi = |s: f64| if h.mu == 0.0 { h.nu * s } else { -h.mu * (s + y0).ln() + h.nu * s };
    let at_r = if y0 == 0.0 {
        if h.mu > 0.0 {
            f64::INFINITY
        } else if h.mu == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        0.0
    };
    let crit = if h.nu != 0.0 { h.mu / h.nu - y0 } else { f64::NAN };
    let ln_sup = s
        .iter()
        .map(|&sj| {
            let mut m = at_r.max(psi(sj));
            if crit > 0.0 && crit < sj {
                m = m.max(psi(crit));
            }
            m - h.nu * ln_r
        })
        .collect();
    Profiles { s, ln_f, ln_g, ln_sup }
}

/// ln of the criterion's pointwise quantity (supremum forms) or of the Mazya integrand
/// per unit `ln s` (integral form).
fn tracked(h: &HardyQuery, w: &Profiles) -> Vec<f64> {
    let n = w.s.len();
    match h.regime() {
        Regime::QEq1 => (0..n).map(|j| w.ln_f[j] / h.p + w.ln_sup[j]).collect(),
        Regime::QLeP => (0..n).map(|j| w.ln_f[j] / h.p + (h.q - 1.0) / h.q * w.ln_g[j]).collect(),
        Regime::PLtQ => {
            let (p, q) = (h.p, h.q);
            let (mu1, nu1) = (h.mu / (q - 1.0), h.nu / (q - 1.0));
            let ln_r = h.r.ln();
            let y0 = h.y0();
            (0..n)
                .map(|j| {
                    let s = w.s[j];
                    let g_part = if p == 1.0 { 0.0 } else { q * (p - 1.0) / (q - p) * w.ln_g[j] };
                    let log_part = if h.mu == 0.0 { 0.0 } else { -mu1 * (s + y0).ln() };
                    q / (q - p) * w.ln_f[j] + g_part + log_part + (1.0 - nu1) * (ln_r - s) + s.ln()
                })
                .collect()
        }
    }
}

fn classify(steps: &[f64]) -> Classification {
    if steps.iter().any(|d| d.is_nan()) {
        Classification::Undecided
    } else if steps.iter().all(|&d| d >= GROWTH.ln()) {
        Classification::Infinite
    } else if steps.iter().all(|&d| d.abs() <= STABLE.ln_1p()) {
        Classification::Finite
    } else {
        Classification::Undecided
    }
}

fn step(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        b - a
    }
}

/// Running quantity walking outward from `j0` in direction `dir`: running max for the
/// supremum forms, partial trapezoid integral (in `ln s`) for the integral form.
fn outward(vals: &[f64], j0: usize, toward_end: bool, integral: bool) -> Vec<(usize, f64)> {
    let h = std::f64::consts::LN_10 / PER_DECADE as f64;
    let idx: Vec<usize> = if toward_end { (j0..vals.len()).collect() } else { (0..=j0).rev().collect() };
    let mut acc = if integral { f64::NEG_INFINITY } else { vals[j0] };
    let mut out = vec![(j0, acc)];
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        acc =
            if integral { log_add_exp(acc, log_add_exp(vals[i], vals[j]) + (0.5 * h).ln()) } else { acc.max(vals[j]) };
        out.push((j, acc));
    }
    out
}

fn end_steps(run: &[(usize, f64)]) -> Vec<f64> {
    let per = PER_DECADE as usize;
    let k = run.len() - 1;
    if k < 3 * per {
        return vec![f64::NAN];
    }
    (0..3).map(|d| step(run[k - (3 - d) * per].1, run[k - (2 - d) * per].1)).collect()
}

fn center(truncation: f64, r: f64, s: &[f64]) -> usize {
    let s0 = (r / truncation).ln();
    s.iter().position(|&v| v >= s0).unwrap_or(s.len() - 1)
}

/// Evaluates the regime's finiteness criterion on the log grid and classifies each end.
pub fn numeric_criterion(h: &HardyQuery, truncation: f64) -> Result<NumericReport> {
    h.validate()?;
    ensure!(truncation > 0.0 && truncation < h.r / 2.0, "truncation must lie in (0, R/2) (got {truncation})");
    let w = weight_profiles(h);
    let vals = tracked(h, &w);
    if vals.contains(&f64::INFINITY) {
        return Ok(NumericReport {
            classification: Classification::Infinite,
            near_zero: Classification::Infinite,
            near_r: Classification::Infinite,
            near_zero_steps: vec![f64::INFINITY],
            near_r_steps: vec![f64::INFINITY],
        });
    }
    let integral = h.regime() == Regime::PLtQ;
    let j0 = center(truncation, h.r, &w.s);
    let zero_steps = end_steps(&outward(&vals, j0, true, integral));
    let r_steps = end_steps(&outward(&vals, j0, false, integral));
    let (near_zero, near_r) = (classify(&zero_steps), classify(&r_steps));
    use Classification::*;
    let classification = match (near_zero, near_r) {
        (Infinite, _) | (_, Infinite) => Infinite,
        (Finite, Finite) => Finite,
        _ => Undecided,
    };
    Ok(NumericReport { classification, near_zero, near_r, near_zero_steps: zero_steps, near_r_steps: r_steps })
}

/// Grid value of the regime's Muckenhoupt quantity: the maximum of the supremum form, or
/// the Mazya integral raised to `(q−p)/(pq)`. A lower-bound proxy for the best constant.
/// `numeric_criterion` over many queries, in input order.
pub fn numeric_batch(queries: &[HardyQuery], exec: Execution) -> Vec<Result<NumericReport>> {
    crate::par::map(exec, queries, |h| numeric_criterion(h, h.r / 4.0))
}

pub fn best_constant_estimate(h: &HardyQuery) -> Result<f64> {
    h.validate()?;
    let v = decide(h);
    if !v.holds {
        return Err(Error::Invalid("best_constant_estimate needs a query for which the inequality holds".into()));
    }
    let w = weight_profiles(h);
    let vals = tracked(h, &w);
    let ln = if h.regime() == Regime::PLtQ {
        let run = outward(&vals, 0, true, true);
        run.last().map_or(f64::NAN, |x| x.1) * (h.q - h.p) / (h.p * h.q)
    } else {
        vals.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    if !ln.is_finite() {
        return Err(Error::NotConverged("criterion quantity is not finite on the grid".into()));
    }
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(alpha: f64, theta: f64, nu: f64, mu: f64, p: f64, qq: f64, kind: LogKind) -> HardyQuery {
        HardyQuery { alpha, theta, nu, mu, p, q: qq, r: 1.0, logkind: kind }
    }

    #[test]
    fn q1_boundary_example() {
        let v = decide(&q(0.0, -2.0, 0.0, -0.5, 2.0, 1.0, LogKind::OneOverR));
        assert!(v.holds);
        assert_eq!(v.matched_condition.as_deref(), Some("Prop2.1(iii)"));
        assert_eq!(v.regime, Regime::QEq1);
    }

    #[test]
    fn hessian_examples() {
        let h = HessianHardyQuery { alpha: 1.0, beta: 0.5, n: 2.0, k: 1.0, p: 3.0, weight: Weight::W0 };
        let v = decide_hessian(&h).unwrap();
        assert!(v.holds);
        assert_eq!(v.matched_condition.as_deref(), Some("Thm2.1(iv)"));
        assert!(decide(&h.to_query()).holds);
        let h = HessianHardyQuery { beta: 1.0, ..h };
        assert!(!decide_hessian(&h).unwrap().holds);
        assert!(!decide(&h.to_query()).holds);
    }

    #[test]
    fn corrected_items_are_starred() {
        // ν < (α+1)/p with μ below θ/p: the printed item needs θ/p ≤ μ, the criterion does not
        let v = decide(&q(0.0, -2.0, 0.1, -2.0, 2.0, 1.0, LogKind::OneOverR));
        assert!(v.holds);
        assert!(!v.printed_holds);
        assert_eq!(v.matched_condition.as_deref(), Some("Prop2.1(iii*)"));
    }

    #[test]
    fn ln_integral_closed_forms() {
        // ∫_0^2 e^{-s} ds
        let v = ln_integral(0.0, -1.0, 0.0, 0.0, 2.0).exp();
        assert!((v - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
        // ∫_1^∞ y^{-2} ds with y = s + 1
        let v = ln_integral(-2.0, 0.0, 1.0, 0.0, f64::INFINITY).exp();
        assert!((v - 1.0).abs() < 1e-14);
        // ∫_0^1 s^{-1/2} e^{s} ds vs a fine midpoint sum of the substituted integrand
        let v = ln_integral(-0.5, 1.0, 0.0, 0.0, 1.0).exp();
        let m = 200_000;
        let brute: f64 =
            (0..m).map(|i| (i as f64 + 0.5) / m as f64).map(|u| 2.0 * (u * u).exp()).sum::<f64>() / m as f64;
        assert!((v - brute).abs() < 1e-8, "{v} vs {brute}");
        // large argument: ∫_{1e6}^{∞} e^{-s} = e^{-1e6}
        let v = ln_integral(0.0, -1.0, 0.0, 1e6, f64::INFINITY);
        assert!((v + 1e6).abs() < 1e-6);
    }

    #[test]
    fn numeric_matches_oracle_on_examples() {
        let h = q(0.0, -2.0, 0.0, -0.5, 2.0, 1.0, LogKind::OneOverR);
        assert_eq!(numeric_criterion(&h, 0.25).unwrap().classification, Classification::Finite);
        let h = HessianHardyQuery { alpha: 1.0, beta: 1.0, n: 2.0, k: 1.0, p: 3.0, weight: Weight::W0 }.to_query();
        assert_eq!(numeric_criterion(&h, 0.25).unwrap().classification, Classification::Infinite);
    }

    #[test]
    fn trivial_constant() {
        let h = q(0.0, 0.0, 0.0, 0.0, 1.0, 1.0, LogKind::OneOverR);
        let c = best_constant_estimate(&h).unwrap();
        assert!((c - 1.0).abs() < 1e-9, "{c}");
    }

    #[test]
    fn embedding_examples() {
        let e = HessianHardyQuery { alpha: 5.0, beta: 0.0, n: 6.0, k: 1.0, p: 2.0, weight: Weight::W0 };
        let v = embedding_conditions(&e).unwrap();
        assert!(v.embeds);
        assert!((v.critical_exponent.unwrap() - 3.0).abs() < 1e-15);
        let e = HessianHardyQuery { alpha: 0.0, n: 2.0, p: 50.0, ..e };
        assert_eq!(embedding_conditions(&e).unwrap().critical_exponent, None);
        let e = HessianHardyQuery { alpha: 0.0, p: 0.75, ..e };
        assert!(embedding_conditions(&e).is_err());
    }
}
