//! Grid-sampled profiles: piecewise linear in `t = ln(1/r)`, constant beyond the last node.

use crate::error::{ensure, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    t: Vec<f64>,
    v: Vec<f64>,
    /// Genuine kinks of the underlying function (not the interpolation nodes).
    breakpoints: Vec<f64>,
}

pub const MIN_POINTS: usize = 16;

impl Sampled {
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Self::with_breakpoints(t, v, Vec::new())
    }

    pub fn with_breakpoints(t: Vec<f64>, mut v: Vec<f64>, mut breakpoints: Vec<f64>) -> Result<Self> {
        ensure!(t.len() == v.len(), "t and v must have equal length ({} vs {})", t.len(), v.len());
        ensure!(t.len() >= MIN_POINTS, "sampled profiles need at least {MIN_POINTS} points (got {})", t.len());
        ensure!(t[0] == 0.0, "sampled grid must start at t = 0 (r = 1), got {}", t[0]);
        ensure!(t.windows(2).all(|w| w[1] > w[0]), "sampled grid must be strictly increasing");
        ensure!(t.iter().chain(v.iter()).all(|x| x.is_finite()), "sampled values must be finite");
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        ensure!(v[0].abs() <= 1e-12 * vmax.max(1.0), "sampled profile must vanish at r = 1 (v(t=0) = {})", v[0]);
        v[0] = 0.0;
        breakpoints.retain(|&b| b > 0.0 && b < *t.last().unwrap());
        breakpoints.sort_by(f64::total_cmp);
        Ok(Sampled { t, v, breakpoints })
    }

    /// Samples `f` on `t`; breakpoints are carried over.
    pub fn from_fn(t: Vec<f64>, f: impl Fn(f64) -> f64, breakpoints: Vec<f64>) -> Result<Self> {
        let v = t.iter().map(|&x| f(x)).collect();
        Self::with_breakpoints(t, v, breakpoints)
    }

    /// Like `new`, but flags kinks with a slope-jump outlier test.
    pub fn with_detected_kinks(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let s = Self::new(t, v)?;
        let kinks = s.detect_kinks();
        Ok(Sampled { breakpoints: kinks, ..s })
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
    pub fn len(&self) -> usize {
        self.t.len()
    }
    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
    pub fn t_last(&self) -> f64 {
        *self.t.last().unwrap()
    }

    /// Index `i` with `t[i] <= x < t[i+1]`, clamped to the cell range.
    fn cell(&self, x: f64) -> usize {
        let i = self.t.partition_point(|&ti| ti <= x);
        i.saturating_sub(1).min(self.t.len() - 2)
    }

    pub fn slope(&self, i: usize) -> f64 {
        (self.v[i + 1] - self.v[i]) / (self.t[i + 1] - self.t[i])
    }

    pub fn value(&self, x: f64) -> f64 {
        if x >= self.t_last() {
            return *self.v.last().unwrap();
        }
        if x <= 0.0 {
            return 0.0;
        }
        let i = self.cell(x);
        self.v[i] + self.slope(i) * (x - self.t[i])
    }

    /// Derivative of the interpolant (cell slope); zero past the last node.
    pub fn dvdt(&self, x: f64) -> f64 {
        if x >= self.t_last() {
            return 0.0;
        }
        self.slope(self.cell(x.max(0.0)))
    }

    /// Node derivative: centered difference, one-sided at the ends.
    pub fn node_derivative(&self, i: usize) -> f64 {
        let m = self.t.len();
        if i == 0 {
            self.slope(0)
        } else if i == m - 1 {
            self.slope(m - 2)
        } else {
            (self.v[i + 1] - self.v[i - 1]) / (self.t[i + 1] - self.t[i - 1])
        }
    }

    /// Slope jumps that are outliers against their neighbourhood.
    pub fn detect_kinks(&self) -> Vec<f64> {
        let m = self.t.len();
        let slopes: Vec<f64> = (0..m - 1).map(|i| self.slope(i)).collect();
        let smax = slopes.iter().fold(0.0f64, |a, s| a.max(s.abs()));
        if smax == 0.0 {
            return Vec::new();
        }
        let jumps: Vec<f64> = (1..m - 1).map(|i| (slopes[i] - slopes[i - 1]).abs()).collect();
        let mut out = Vec::new();
        for (j, &d) in jumps.iter().enumerate() {
            if d <= 1e-6 * smax {
                continue;
            }
            let lo = j.saturating_sub(8);
            let hi = (j + 9).min(jumps.len());
            let mut near: Vec<f64> = (lo..hi).filter(|&i| i + 1 < j || i > j + 1).map(|i| jumps[i]).collect();
            if near.is_empty() {
                continue;
            }
            near.sort_by(f64::total_cmp);
            let median = near[near.len() / 2];
            if d > 20.0 * median + 1e-9 * smax {
                out.push(self.t[j + 1]);
            }
        }
        out
    }

    /// Weighted Dirichlet integral `Σ |slope|^{k+1} ∫_cell w`, exact for the interpolant.
    /// `cell_weight(t0, t1)` returns the weight integral over a cell.
    pub fn dirichlet_sum(&self, k: u32, cell_weight: impl Fn(f64, f64) -> f64) -> f64 {
        let terms: Vec<f64> = (0..self.t.len() - 1)
            .map(|i| {
                let s = self.slope(i).abs();
                if s == 0.0 {
                    0.0
                } else {
                    s.powi(k as i32 + 1) * cell_weight(self.t[i], self.t[i + 1])
                }
            })
            .collect();
        crate::quadrature::pairwise_sum(&terms)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Sampled {
        Sampled { t: self.t.clone(), v: self.v.iter().map(|&x| f(x)).collect(), breakpoints: self.breakpoints.clone() }
    }
}
