//! Sweep records, bound estimates and summary statistics.

use std::fmt;

use num_complex::Complex64;

/// Lower bound `‖T f‖ / ‖f‖` attained by a named probe.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate {
    pub ratio: f64,
    pub witness: String,
    pub input_norm: f64,
    pub output_norm: f64,
}

impl BoundEstimate {
    pub fn new(witness: impl Into<String>, input_norm: f64, output_norm: f64) -> Self {
        Self {
            ratio: output_norm / input_norm,
            witness: witness.into(),
            input_norm,
            output_norm,
        }
    }

    /// Keep the larger ratio; ties keep `self`.
    pub fn max(self, other: Self) -> Self {
        if other.ratio > self.ratio {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepKey {
    Real(f64),
    Complex(Complex64),
}

impl SweepKey {
    pub fn re(&self) -> f64 {
        match self {
            SweepKey::Real(v) => *v,
            SweepKey::Complex(z) => z.re,
        }
    }
}

impl From<f64> for SweepKey {
    fn from(v: f64) -> Self {
        SweepKey::Real(v)
    }
}

impl From<Complex64> for SweepKey {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            SweepKey::Real(z.re)
        } else {
            SweepKey::Complex(z)
        }
    }
}

impl fmt::Display for SweepKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepKey::Real(v) => f.write_str(&fmt_num(*v)),
            SweepKey::Complex(z) => {
                let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { "" } else { "+" };
                write!(f, "{}{}{}i", fmt_num(z.re), sign, fmt_num(z.im))
            }
        }
    }
}

/// 17 significant digits, `inf`/`-inf` for infinities.
pub fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-4..1e16).contains(&a) {
        let digits = 16 - a.log10().floor() as i32;
        let s = format!("{:.*}", digits.max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub key: SweepKey,
    pub probe: String,
    pub input_norm: f64,
    pub output_norm: f64,
    pub ratio: f64,
    pub normalized: f64,
}

impl SweepRow {
    pub fn from_estimate(key: impl Into<SweepKey>, est: &BoundEstimate, normalizer: f64) -> Self {
        Self {
            key: key.into(),
            probe: est.witness.clone(),
            input_norm: est.input_norm,
            output_norm: est.output_norm,
            ratio: est.ratio,
            normalized: est.ratio / normalizer,
        }
    }

    /// A scalar observation with no input/output split.
    pub fn value(key: impl Into<SweepKey>, probe: impl Into<String>, v: f64) -> Self {
        Self {
            key: key.into(),
            probe: probe.into(),
            input_norm: 1.0,
            output_norm: v,
            ratio: v,
            normalized: v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub experiment: String,
    pub key_name: String,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<(String, f64)>,
    pub checks: Vec<Check>,
}

impl SweepResult {
    pub fn new(experiment: &str, key_name: &str) -> Self {
        Self {
            experiment: experiment.into(),
            key_name: key_name.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: SweepRow) {
        self.rows.push(row);
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.summary.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.summary.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn check_le(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: format!("<= {}", fmt_num(bound)),
            passed: value <= bound,
        });
    }

    pub fn check_ge(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: format!(">= {}", fmt_num(bound)),
            passed: value >= bound,
        });
    }

    pub fn check_within(&mut self, name: &str, value: f64, lo: f64, hi: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: format!("in [{}, {}]", fmt_num(lo), fmt_num(hi)),
            passed: value >= lo && value <= hi,
        });
    }

    pub fn check_flag(&mut self, name: &str, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: "= 1".into(),
            passed: ok,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }
}

/// `max / min` of positive values; `inf` when some value is zero.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    slope(&lx, &ly)
}
