//! One function per command. Each validates through the library and returns its fields
//! in output order; `main` adds the header and picks the emitter.

use std::path::Path;

use logtm::admissibility::{check_admissible, max_smoothing_eps, smooth, smoothing_difference};
use logtm::constants::{alpha_nb, compute_constants, digamma_bound, gamma_nb, Params, Weight};
use logtm::hardy::{
    decide, decide_hessian, embedding_conditions, numeric_batch, numeric_criterion, Classification, HardyQuery,
    HardyVerdict, HessianHardyQuery,
};
use logtm::optimizer::{concentration_probe, maximize, MaximizerProblem};
use logtm::par::Execution;
use logtm::profiles::{
    double_exp_functional, make_family, moser_functional, profile_from_csv, sharpness_table, transport, uniform_grid,
    verify_transport, weighted_norm, Family, ProfileSpec, RadialProfile, ScanFunctional,
};
use logtm::quadrature::LogKind;
use logtm::{Error, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::opts::{Format, Opts};
use crate::output::{Series, Table};

/// Numerical truncation for the Hardy criterion (fraction of `R` kept away from each end).
const HARDY_TRUNCATION: f64 = 0.25;

pub struct Outcome {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
    pub series: Option<Series>,
    /// `DIVERGENT` or `NON_CONVERGED`; exit status 3 under `--strict`.
    pub failure: Option<&'static str>,
    pub default_format: Format,
}

impl Outcome {
    fn new(fields: Map<String, Value>) -> Self {
        Outcome { fields, table: None, series: None, failure: None, default_format: Format::Json }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn to_map<T: Serialize>(x: &T) -> Map<String, Value> {
    match serde_json::to_value(x).expect("report serializes") {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn set(m: &mut Map<String, Value>, k: &str, v: impl Into<Value>) {
    m.insert(k.to_string(), v.into());
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn params(o: &Opts, weight: Weight, beta: f64) -> Params {
    let n = o.n.unwrap_or(2);
    Params { n, k: o.k.unwrap_or(n / 2), beta: o.beta.unwrap_or(beta), weight: o.weight.unwrap_or(weight) }
}

fn put_params(m: &mut Map<String, Value>, p: &Params) {
    set(m, "n", p.n);
    set(m, "k", p.k);
    set(m, "beta", p.beta);
    set(m, "weight", p.weight.name());
}

struct Source {
    v: RadialProfile,
    p: Params,
    family: Option<Family>,
}

impl Source {
    fn put(&self, m: &mut Map<String, Value>) {
        match self.family {
            Some(f) => {
                set(m, "family", f.name());
                set(m, "index", f.index());
            }
            None => {
                set(m, "family", "sampled");
                set(m, "index", Value::Null);
            }
        }
        put_params(m, &self.p);
    }
}

/// The profile named by `--profile`, or else by `--family` and its index.
fn source(o: &Opts) -> Result<Source> {
    if let Some(path) = &o.profile {
        let text = read(path)?;
        if text.trim_start().starts_with('{') {
            let spec: ProfileSpec =
                serde_json::from_str(&text).map_err(|e| invalid(format!("profile JSON {}: {e}", path.display())))?;
            let v = spec.build()?;
            let family = Family::from_name(&spec.family, spec.index).ok();
            return Ok(Source { v, p: spec.params, family });
        }
        let s = profile_from_csv(&text)?;
        return Ok(Source { v: RadialProfile::Sampled(s), p: params(o, Weight::W0, 0.0), family: None });
    }
    let name = o.family.as_deref().unwrap_or("moser-w0");
    let index = if name.starts_with("trunc") { o.eta.or(o.ell) } else { o.ell };
    let family = Family::from_name(name, index).map_err(Error::Invalid)?;
    let default_beta = if matches!(family, Family::Dexp(_)) { 1.0 } else { 0.0 };
    let p = params(o, family.natural_weight().unwrap_or(Weight::W0), default_beta);
    Ok(Source { v: make_family(family, p)?, p, family: Some(family) })
}

#[derive(Debug, Clone, Copy)]
enum Functional {
    Moser { alpha: f64, gamma: f64 },
    DoubleExp { a: f64 },
}

impl Functional {
    /// Double-exponential for `dexp`, the Moser functional otherwise; `--alpha` beats
    /// `--alpha-ratio`, which scales the critical value.
    fn pick(o: &Opts, s: &Source) -> Result<Self> {
        let ratio = o.alpha_ratio.unwrap_or(1.0);
        if matches!(s.family, Some(Family::Dexp(_))) {
            return Ok(Functional::DoubleExp { a: o.alpha.unwrap_or(ratio * s.p.n as f64) });
        }
        s.p.validate_tm()?;
        if s.p.beta >= 1.0 {
            return Err(invalid(format!("the Moser functional needs beta < 1 (got {})", s.p.beta)));
        }
        Ok(Functional::Moser {
            alpha: o.alpha.unwrap_or(ratio * alpha_nb(s.p.n, s.p.k, s.p.beta)),
            gamma: o.gamma.unwrap_or(gamma_nb(s.p.n, s.p.beta)),
        })
    }

    fn put(&self, m: &mut Map<String, Value>) {
        match *self {
            Functional::Moser { alpha, gamma } => {
                set(m, "functional", "moser");
                set(m, "alpha", alpha);
                set(m, "gamma", gamma);
            }
            Functional::DoubleExp { a } => {
                set(m, "functional", "double-exp");
                set(m, "a", a);
            }
        }
    }

    /// `None` when the integral diverges.
    fn eval(&self, v: &RadialProfile, n: u32) -> Result<Option<f64>> {
        let r = match *self {
            Functional::Moser { alpha, gamma } => moser_functional(v, alpha, gamma, n),
            Functional::DoubleExp { a } => double_exp_functional(v, a, n),
        };
        match r {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            Ok(_) | Err(Error::Divergent(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

pub fn constants(o: &Opts) -> Result<Outcome> {
    let p = params(o, Weight::W0, 0.0);
    let s = compute_constants(&p)?;
    let mut m = Map::new();
    put_params(&mut m, &p);
    set(&mut m, "c_n", s.c_n);
    set(&mut m, "alpha_n", s.alpha_n);
    set(&mut m, "gamma", s.gamma_nb);
    set(&mut m, "alpha_crit", s.alpha_nb);
    set(&mut m, "digamma_bound", digamma_bound(p.n)?);
    Ok(Outcome::new(m))
}

pub fn eval(o: &Opts) -> Result<Outcome> {
    let s = source(o)?;
    let f = Functional::pick(o, &s)?;
    // unbounded profiles have power-law energy tails the norm quadrature may not resolve
    let norm = match weighted_norm(&s.v, &s.p) {
        Ok(x) => Some(x),
        Err(Error::NotConverged(_)) => None,
        Err(e) => return Err(e),
    };
    let j = f.eval(&s.v, s.p.n)?;
    let status = match (j, norm) {
        (None, _) => "DIVERGENT",
        (_, None) => "NON_CONVERGED",
        _ => "OK",
    };
    let mut m = Map::new();
    s.put(&mut m);
    f.put(&mut m);
    set(&mut m, "norm", norm);
    set(&mut m, "J", j);
    set(&mut m, "trivial_value", 1.0 / s.p.n as f64);
    set(&mut m, "status", status);
    let mut out = Outcome::new(m);
    out.failure = (status != "OK").then_some(status);
    Ok(out)
}

pub fn sharpness(o: &Opts) -> Result<Outcome> {
    let name = o.family.as_deref().unwrap_or("moser-w0");
    let probe = Family::from_name(name, Some(f64::NAN)).map_err(Error::Invalid)?;
    let ctor: fn(f64) -> Family = match probe {
        Family::MoserW0(_) => Family::MoserW0,
        Family::MoserW1(_) => Family::MoserW1,
        Family::Dexp(_) => Family::Dexp,
        other => return Err(invalid(format!("sharpness scans moser-w0, moser-w1 or dexp (got {})", other.name()))),
    };
    let default_beta = if matches!(probe, Family::Dexp(_)) { 1.0 } else { 0.0 };
    let p = params(o, probe.natural_weight().unwrap_or(Weight::W0), default_beta);
    p.validate_tm()?;
    let start = if matches!(probe, Family::MoserW1(_)) { p.n as f64 + 1.0 } else { 1.0 };
    let end = o.ell.unwrap_or(start + 29.0);
    if end < start || end.is_nan() {
        return Err(invalid(format!("--ell must be at least {start} for {name} (got {end})")));
    }
    let count = o.grid.unwrap_or((end - start).floor() as usize + 1);
    if count == 0 {
        return Err(invalid("--grid must be positive"));
    }
    let ells: Vec<f64> = if count == 1 {
        vec![end]
    } else {
        (0..count).map(|i| start + (end - start) * i as f64 / (count - 1) as f64).collect()
    };
    let ratio = o.alpha_ratio.unwrap_or(1.0);
    let f = match probe {
        Family::Dexp(_) => ScanFunctional::DoubleExp { a: o.alpha.unwrap_or(ratio * p.n as f64) },
        _ => {
            if p.beta >= 1.0 {
                return Err(invalid(format!("the Moser functional needs beta < 1 (got {})", p.beta)));
            }
            let crit = alpha_nb(p.n, p.k, p.beta);
            ScanFunctional::Moser {
                alpha_ratio: o.alpha.map_or(ratio, |a| a / crit),
                gamma: o.gamma.unwrap_or(gamma_nb(p.n, p.beta)),
            }
        }
    };
    let rows = sharpness_table(ctor, &p, f, &ells, Execution::default())?;

    let mut m = Map::new();
    set(&mut m, "family", name);
    put_params(&mut m, &p);
    match f {
        ScanFunctional::Moser { alpha_ratio, gamma } => {
            set(&mut m, "functional", "moser");
            set(&mut m, "alpha_ratio", alpha_ratio);
            set(&mut m, "gamma", gamma);
        }
        ScanFunctional::DoubleExp { a } => {
            set(&mut m, "functional", "double-exp");
            set(&mut m, "a", a);
        }
    }
    let js: Vec<Option<f64>> = rows.iter().map(|r| r.j).collect();
    let finite: Vec<f64> = js.iter().flatten().copied().collect();
    set(&mut m, "increasing", finite.len() == js.len() && finite.windows(2).all(|w| w[1] > w[0]));
    set(&mut m, "above_floor", rows.iter().all(|r| r.j.is_some_and(|j| j > r.floor)));
    set(&mut m, "rows", rows.iter().map(to_map).map(Value::Object).collect::<Vec<_>>());

    let mut table = Table::new(&["ell", "norm", "J"]);
    table.rows = rows.iter().map(|r| vec![json!(r.ell), json!(r.norm), r.j.into()]).collect();
    let series = Series {
        columns: vec!["ell".into(), "J".into()],
        points: rows.iter().map(|r| vec![r.ell, r.j.unwrap_or(f64::NAN)]).collect(),
    };
    let mut out = Outcome::new(m);
    out.failure = js.iter().any(Option::is_none).then_some("DIVERGENT");
    out.table = Some(table);
    out.series = Some(series);
    out.default_format = Format::Csv;
    Ok(out)
}

pub fn transport_check(o: &Opts) -> Result<Outcome> {
    let s = source(o)?;
    s.p.validate_tm()?;
    if s.p.beta >= 1.0 {
        return Err(invalid(format!("transport needs beta < 1 (got {})", s.p.beta)));
    }
    let alpha = o.alpha.unwrap_or(o.alpha_ratio.unwrap_or(1.0) * alpha_nb(s.p.n, s.p.k, s.p.beta));
    let tp = transport(&s.v, &s.p, alpha)?;
    let r = verify_transport(&tp)?;
    let mut m = Map::new();
    s.put(&mut m);
    set(&mut m, "alpha", alpha);
    set(&mut m, "alpha_ratio", tp.alpha_ratio);
    set(&mut m, "gamma", tp.gamma);
    set(&mut m, "scale", tp.scale);
    m.extend(to_map(&r));
    Ok(Outcome::new(m))
}

enum Query {
    Hessian(HessianHardyQuery),
    General(HardyQuery),
}

impl Query {
    fn general(&self) -> HardyQuery {
        match self {
            Query::Hessian(h) => h.to_query(),
            Query::General(h) => *h,
        }
    }

    fn decide(&self) -> Result<HardyVerdict> {
        match self {
            Query::Hessian(h) => decide_hessian(h),
            Query::General(h) => Ok(decide(h)),
        }
    }

    fn put(&self, m: &mut Map<String, Value>) {
        let (form, q) = match self {
            Query::Hessian(h) => ("hessian", to_map(h)),
            Query::General(h) => ("general", to_map(h)),
        };
        set(m, "form", form);
        set(m, "query", Value::Object(q));
    }
}

fn hessian_query(o: &Opts, p: f64) -> HessianHardyQuery {
    let n = o.n.unwrap_or(2);
    HessianHardyQuery {
        alpha: o.alpha.unwrap_or(0.0),
        beta: o.beta.unwrap_or(0.0),
        n: n as f64,
        k: o.k.unwrap_or(n / 2) as f64,
        p,
        weight: o.weight.unwrap_or(Weight::W0),
    }
}

/// The general form when any of its own flags is present, the k-Hessian form otherwise.
fn hardy_query(o: &Opts) -> Result<Query> {
    let p = o.p.ok_or_else(|| invalid("hardy queries need --p"))?;
    let general =
        o.theta.is_some() || o.nu.is_some() || o.mu.is_some() || o.q.is_some() || o.r.is_some() || o.logkind.is_some();
    if !general {
        let h = hessian_query(o, p);
        h.validate()?;
        return Ok(Query::Hessian(h));
    }
    let h = HardyQuery {
        alpha: o.alpha.unwrap_or(0.0),
        theta: o.theta.unwrap_or(0.0),
        nu: o.nu.unwrap_or(0.0),
        mu: o.mu.unwrap_or(0.0),
        p,
        q: o.q.unwrap_or(p),
        r: o.r.unwrap_or(1.0),
        logkind: o.logkind.unwrap_or(LogKind::OneOverR),
    };
    h.validate()?;
    Ok(Query::General(h))
}

fn put_verdict(m: &mut Map<String, Value>, v: &HardyVerdict) {
    set(m, "holds", v.holds);
    set(m, "condition", v.matched_condition.clone());
    set(m, "regime", v.regime.name());
    set(m, "printed_holds", v.printed_holds);
    set(m, "printed_condition", v.printed_condition.clone());
    set(m, "band", v.band);
    set(m, "notes", v.notes.clone());
}

pub fn hardy_decide(o: &Opts) -> Result<Outcome> {
    let q = hardy_query(o)?;
    let v = q.decide()?;
    let mut m = Map::new();
    put_verdict(&mut m, &v);
    q.put(&mut m);
    Ok(Outcome::new(m))
}

fn agreement(holds: bool, c: Classification) -> Value {
    match c {
        Classification::Undecided => Value::Null,
        c => Value::Bool((c == Classification::Finite) == holds),
    }
}

pub fn hardy_verify(o: &Opts) -> Result<Outcome> {
    let q = hardy_query(o)?;
    let v = q.decide()?;
    let r = numeric_criterion(&q.general(), HARDY_TRUNCATION)?;
    let mut m = Map::new();
    put_verdict(&mut m, &v);
    set(&mut m, "numeric", r.classification.name());
    set(&mut m, "agree", agreement(v.holds, r.classification));
    set(&mut m, "report", Value::Object(to_map(&r)));
    q.put(&mut m);
    let mut out = Outcome::new(m);
    out.failure = (r.classification == Classification::Undecided).then_some("NON_CONVERGED");
    Ok(out)
}

/// Rows `alpha,theta,nu,mu,p,q,R,logkind`; a header row is optional, `logkind` defaults
/// to `log_r`.
pub fn parse_batch(text: &str) -> Result<Vec<HardyQuery>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| invalid(format!("batch CSV: {e}")))?;
        let line = i + 1;
        if i == 0 && rec.get(0).is_some_and(|s| s.parse::<f64>().is_err()) {
            continue;
        }
        if !(7..=8).contains(&rec.len()) {
            return Err(invalid(format!(
                "batch row {line}: expected alpha,theta,nu,mu,p,q,R[,logkind], got {} fields",
                rec.len()
            )));
        }
        let num =
            |j: usize| rec[j].parse::<f64>().map_err(|e| invalid(format!("batch row {line}, field {}: {e}", j + 1)));
        let logkind = match rec.get(7) {
            Some(s) if !s.is_empty() => s.parse::<LogKind>().map_err(|e| invalid(format!("batch row {line}: {e}")))?,
            _ => LogKind::OneOverR,
        };
        let h = HardyQuery {
            alpha: num(0)?,
            theta: num(1)?,
            nu: num(2)?,
            mu: num(3)?,
            p: num(4)?,
            q: num(5)?,
            r: num(6)?,
            logkind,
        };
        h.validate().map_err(|e| invalid(format!("batch row {line}: {e}")))?;
        out.push(h);
    }
    Ok(out)
}

pub fn hardy_batch(file: &Path) -> Result<Outcome> {
    let qs = parse_batch(&read(file)?)?;
    let numeric = numeric_batch(&qs, Execution::default());
    let mut table = Table::new(&[
        "alpha",
        "theta",
        "nu",
        "mu",
        "p",
        "q",
        "R",
        "logkind",
        "holds",
        "condition",
        "regime",
        "printed_holds",
        "numeric",
        "agree",
    ]);
    let mut undecided = 0;
    let mut disagree = 0;
    for (h, r) in qs.iter().zip(numeric) {
        let v = decide(h);
        let c = r?.classification;
        let agree = agreement(v.holds, c);
        undecided += usize::from(c == Classification::Undecided);
        disagree += usize::from(agree == Value::Bool(false));
        table.rows.push(vec![
            json!(h.alpha),
            json!(h.theta),
            json!(h.nu),
            json!(h.mu),
            json!(h.p),
            json!(h.q),
            json!(h.r),
            json!(h.logkind.name()),
            json!(v.holds),
            v.matched_condition.into(),
            json!(v.regime.name()),
            json!(v.printed_holds),
            json!(c.name()),
            agree,
        ]);
    }
    let mut m = Map::new();
    set(&mut m, "count", qs.len());
    set(&mut m, "holds", table.rows.iter().filter(|r| r[8] == Value::Bool(true)).count());
    set(&mut m, "undecided", undecided);
    set(&mut m, "disagreements", disagree);
    set(&mut m, "rows", table.to_json());
    let mut out = Outcome::new(m);
    out.failure = (undecided > 0).then_some("NON_CONVERGED");
    out.table = Some(table);
    Ok(out)
}

pub fn embed(o: &Opts) -> Result<Outcome> {
    let p = o.p.ok_or_else(|| invalid("embed needs --p"))?;
    let h = hessian_query(o, p);
    let e = embedding_conditions(&h)?;
    let mut m = to_map(&e);
    set(&mut m, "query", Value::Object(to_map(&h)));
    Ok(Outcome::new(m))
}

pub fn maximize_cmd(o: &Opts) -> Result<Outcome> {
    let p = params(o, Weight::W0, 0.0);
    let mut prob = MaximizerProblem::new(p)?;
    if let Some(g) = o.grid {
        prob.grid_size = g;
    }
    if let Some(t) = o.tmax {
        prob.t_max = t;
    }
    if let Some(t) = o.tol {
        prob.tol = t;
    }
    let r = maximize(&prob, o.seed)?;
    let bound = digamma_bound(p.n)?;
    let mut m = Map::new();
    put_params(&mut m, &p);
    set(&mut m, "seed", o.seed);
    m.extend(to_map(&r));
    set(&mut m, "digamma_bound", bound);
    set(&mut m, "above_concentration_level", r.value > bound);
    let mut out = Outcome::new(m);
    out.failure = (!r.converged).then_some("NON_CONVERGED");
    out.series = Some(Series {
        columns: vec!["t".into(), "v".into()],
        points: r.profile.t().iter().zip(r.profile.v()).map(|(&t, &v)| vec![t, v]).collect(),
    });
    Ok(out)
}

pub fn admissible(o: &Opts) -> Result<Outcome> {
    let s = source(o)?;
    let r = check_admissible(&s.v, &s.p)?;
    let mut m = Map::new();
    s.put(&mut m);
    m.extend(to_map(&r));
    Ok(Outcome::new(m))
}

pub fn smooth_cmd(o: &Opts) -> Result<Outcome> {
    let s = source(o)?;
    let max_eps = max_smoothing_eps(&s.v);
    let eps = match o.eps {
        Some(e) => e,
        None if max_eps.is_finite() => max_eps / 2.0,
        None => 0.0,
    };
    let sm = smooth(&s.v, eps)?;
    let f = Functional::pick(o, &s)?;
    let (j0, j1) = (f.eval(&s.v, s.p.n)?, f.eval(&sm, s.p.n)?);
    let kinks: Vec<f64> = s.v.breakpoints().iter().map(|t| (-t).exp()).collect();
    let mut m = Map::new();
    s.put(&mut m);
    set(&mut m, "eps", eps);
    set(&mut m, "max_eps", max_eps);
    set(&mut m, "kinks_r", kinks);
    set(&mut m, "norm_before", weighted_norm(&s.v, &s.p)?);
    set(&mut m, "norm_after", weighted_norm(&sm, &s.p)?);
    set(&mut m, "difference_norm", weighted_norm(&smoothing_difference(&s.v, eps)?, &s.p)?);
    f.put(&mut m);
    set(&mut m, "J_before", j0);
    set(&mut m, "J_after", j1);
    set(&mut m, "delta_J", j0.zip(j1).map(|(a, b)| b - a));
    set(&mut m, "admissible_before", check_admissible(&s.v, &s.p)?.admissible);
    set(&mut m, "admissible_after", check_admissible(&sm, &s.p)?.admissible);
    let hi = s.v.breakpoints().last().map_or(s.v.t_span(s.p.n), |b| 2.0 * b);
    let series = Series {
        columns: vec!["t".into(), "v".into(), "smoothed".into()],
        points: uniform_grid(512, hi).into_iter().map(|t| vec![t, s.v.value(t), sm.value(t)]).collect(),
    };
    let mut out = Outcome::new(m);
    out.failure = (j0.is_none() || j1.is_none()).then_some("DIVERGENT");
    out.series = Some(series);
    Ok(out)
}

pub fn concentration(o: &Opts) -> Result<Outcome> {
    let p = params(o, Weight::W0, 0.0);
    let end = o.ell.unwrap_or(256.0);
    let count = o.grid.unwrap_or(9);
    if !(end >= 1.0 && end.is_finite()) || count == 0 {
        return Err(invalid("concentration needs --ell >= 1 and --grid > 0"));
    }
    let ells: Vec<f64> =
        if count == 1 { vec![end] } else { (0..count).map(|i| end.powf(i as f64 / (count - 1) as f64)).collect() };
    let r = concentration_probe(&p, &ells)?;
    let mut m = Map::new();
    put_params(&mut m, &p);
    m.extend(to_map(&r));
    let mut table = Table::new(&["ell", "J", "floor"]);
    table.rows =
        r.ell.iter().zip(&r.values).zip(&r.floors).map(|((l, v), f)| vec![json!(l), json!(v), json!(f)]).collect();
    let mut out = Outcome::new(m);
    out.series = Some(Series {
        columns: vec!["ell".into(), "J".into()],
        points: r.ell.iter().zip(&r.values).map(|(&l, &v)| vec![l, v]).collect(),
    });
    out.table = Some(table);
    Ok(out)
}
