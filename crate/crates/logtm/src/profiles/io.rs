//! Profile serialization: closed forms as JSON `{family, params, index}`, sampled
//! profiles as CSV with header `t,v`.

use serde::{Deserialize, Serialize};

use super::{ClosedForm, Family, RadialProfile, Sampled};
use crate::constants::Params;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub family: String,
    pub params: Params,
    #[serde(default)]
    pub index: Option<f64>,
}

impl ProfileSpec {
    pub fn from_closed(c: &ClosedForm) -> Self {
        ProfileSpec { family: c.family.name().to_string(), params: c.params, index: c.family.index() }
    }

    pub fn build(&self) -> Result<RadialProfile> {
        let fam = Family::from_name(&self.family, self.index).map_err(Error::Invalid)?;
        super::make_family(fam, self.params)
    }
}

pub fn profile_to_json(c: &ClosedForm) -> String {
    serde_json::to_string(&ProfileSpec::from_closed(c)).expect("profile spec serializes")
}

pub fn profile_from_json(s: &str) -> Result<RadialProfile> {
    let spec: ProfileSpec = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("profile JSON: {e}")))?;
    spec.build()
}

/// `t,v` CSV; floats carry 17 significant digits so a round trip is exact.
pub fn profile_to_csv(s: &Sampled) -> String {
    let mut out = String::from("t,v\n");
    for (t, v) in s.t().iter().zip(s.v()) {
        out.push_str(&format!("{t:.16e},{v:.16e}\n"));
    }
    out
}

/// Reads a `t,v` CSV; kinks are recovered with the slope-jump test.
pub fn profile_from_csv(text: &str) -> Result<Sampled> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Invalid(format!("profile CSV: {e}")))?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "v" {
        return Err(Error::Invalid("profile CSV must have header 't,v'".into()));
    }
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Invalid(format!("profile CSV: {e}")))?;
        let parse =
            |i: usize| rec[i].parse::<f64>().map_err(|e| Error::Invalid(format!("profile CSV row {}: {e}", line + 2)));
        t.push(parse(0)?);
        v.push(parse(1)?);
    }
    Sampled::with_detected_kinks(t, v)
}
