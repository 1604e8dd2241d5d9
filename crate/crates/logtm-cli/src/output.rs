//! Emitters. JSON keys keep insertion order and every float is printed as `{:.16e}`
//! (17 significant digits), so identical inputs give byte-identical output.

use std::fmt::Write as _;

use serde_json::Value;

pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        float(n.as_f64().unwrap_or(f64::NAN))
    }
}

fn write_json(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}:", Value::String(k.clone()));
                write_json(out, x);
            }
            out.push('}');
        }
    }
}

pub fn json(v: &Value) -> String {
    let mut s = String::new();
    write_json(&mut s, v);
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => number(n),
        Value::String(s) => s.clone(),
        other => json(other).trim_end().to_string(),
    }
}

/// Rows of named columns; cells are JSON values so both emitters share them.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect(),
        )
    }

    pub fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(cell))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// One-row table of the scalar fields of an object.
    pub fn from_scalars(obj: &serde_json::Map<String, Value>) -> Self {
        let mut t = Table::default();
        let mut row = Vec::new();
        for (k, v) in obj {
            if !matches!(v, Value::Array(_) | Value::Object(_)) {
                t.columns.push(k.clone());
                row.push(v.clone());
            }
        }
        t.rows.push(row);
        t
    }
}

/// A curve for `--plot` / `--svg`: named columns, the first is the abscissa.
#[derive(Debug, Clone)]
pub struct Series {
    pub columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
}

impl Series {
    pub fn data_file(&self) -> String {
        let mut s = format!("# {}\n", self.columns.join(" "));
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|&x| format!("{x:.16e}")).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Polyline of the second column against the first, scaled into a 640×400 box.
    pub fn svg(&self) -> String {
        let (w, h, pad) = (640.0, 400.0, 40.0);
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.len() > 1 && p[0].is_finite() && p[1].is_finite())
            .map(|p| (p[0], p[1]))
            .collect();
        let span = |f: fn(&(f64, f64)) -> f64| {
            let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        };
        let ((x0, x1), (y0, y1)) = (span(|p| p.0), span(|p| p.1));
        let mut poly = String::new();
        for (x, y) in &pts {
            let px = pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
            let py = h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
            let _ = write!(poly, "{px:.3},{py:.3} ");
        }
        let label = |s: &str| s.replace('&', "&amp;").replace('<', "&lt;");
        format!(
            concat!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
                "<rect x=\"{pad}\" y=\"{pad}\" width=\"{iw}\" height=\"{ih}\" fill=\"none\" stroke=\"#999\"/>\n",
                "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{poly}\"/>\n",
                "<text x=\"{pad}\" y=\"{ty}\" font-size=\"12\">{xl}: {x0:.4e} .. {x1:.4e}</text>\n",
                "<text x=\"{pad}\" y=\"24\" font-size=\"12\">{yl}: {y0:.4e} .. {y1:.4e}</text>\n",
                "</svg>\n"
            ),
            w = w,
            h = h,
            pad = pad,
            iw = w - 2.0 * pad,
            ih = h - 2.0 * pad,
            poly = poly.trim_end(),
            ty = h - 12.0,
            xl = label(&self.columns[0]),
            yl = label(self.columns.get(1).map(String::as_str).unwrap_or("")),
            x0 = x0,
            x1 = x1,
            y0 = y0,
            y1 = y1,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits_and_keys_keep_order() {
        let v = json!({"schema": "1", "b": 0.1, "a": [1, true, null], "z": f64::NAN});
        assert_eq!(json(&v), "{\"schema\":\"1\",\"b\":1.0000000000000001e-1,\"a\":[1,true,null],\"z\":null}\n");
    }

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["ell", "J"]);
        t.rows.push(vec![json!(1.0), Value::Null]);
        assert_eq!(t.csv().unwrap(), "ell,J\n1.0000000000000000e0,\n");
    }
}
