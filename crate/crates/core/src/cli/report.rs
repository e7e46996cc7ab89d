//! CSV rows and the `key = value` summary.

use std::fmt::Write as _;

use crate::cli::registry::{Exponents, Run};
use crate::harness::sweep::{fmt_num, spread, SweepResult};

pub const HEADER: [&str; 16] = [
    "experiment",
    "d",
    "p",
    "q",
    "a",
    "b",
    "r",
    "s",
    "key_name",
    "key_value",
    "probe",
    "input_norm",
    "output_norm",
    "ratio",
    "normalized",
    "seed",
];

fn opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv(run: &Run, seed: u64) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    let res = &run.result;
    for row in &res.rows {
        let Exponents { d, p, q, a, b, r, s } = (run.exponents)(row);
        let fields = [
            quote(&res.experiment),
            d.map(|d| d.to_string()).unwrap_or_default(),
            opt(p),
            opt(q),
            opt(a),
            opt(b),
            opt(r),
            opt(s),
            quote(&res.key_name),
            quote(&row.key.to_string()),
            quote(&row.probe),
            fmt_num(row.input_norm),
            fmt_num(row.output_norm),
            fmt_num(row.ratio),
            fmt_num(row.normalized),
            seed.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn status(res: &SweepResult) -> &'static str {
    if res.passed() {
        "pass"
    } else {
        "fail"
    }
}

pub fn summary(res: &SweepResult, seed: u64) -> String {
    let mut s = String::new();
    let ratios: Vec<f64> = res.ratios().into_iter().filter(|r| r.is_finite() && *r > 0.0).collect();
    let _ = writeln!(s, "experiment = {}", res.experiment);
    let _ = writeln!(s, "seed = {seed}");
    let _ = writeln!(s, "rows = {}", res.rows.len());
    let _ = writeln!(s, "status = {}", status(res));
    if !ratios.is_empty() {
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let _ = writeln!(s, "ratio.max = {}", fmt_num(max));
        let _ = writeln!(s, "ratio.min = {}", fmt_num(min));
        let _ = writeln!(s, "ratio.spread = {}", fmt_num(spread(&ratios)));
    }
    for (k, v) in &res.summary {
        let _ = writeln!(s, "metric.{k} = {}", fmt_num(*v));
    }
    for c in &res.checks {
        let _ = writeln!(s, "check.{}.value = {}", c.name, fmt_num(c.value));
        let _ = writeln!(s, "check.{}.bound = {}", c.name, c.bound);
        let _ = writeln!(s, "check.{}.passed = {}", c.name, c.passed);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sweep::SweepRow;

    #[test]
    fn header_and_rows() {
        let mut res = SweepResult::new("demo", "k");
        res.push(SweepRow::value(1.0, "a,b", 0.5));
        res.metric("m", 2.0);
        res.check_le("m", 2.0, 3.0);
        let run = Run {
            result: res,
            exponents: Box::new(|_| Exponents {
                d: Some(3),
                p: Some(2.0),
                b: Some(f64::INFINITY),
                ..Default::default()
            }),
        };
        let text = csv(&run, 9);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), 16);
        assert_eq!(lines.next().unwrap(), "demo,3,2,,,inf,,,k,1,\"a,b\",1,0.5,0.5,0.5,9");
        let sum = summary(&run.result, 9);
        assert!(sum.contains("status = pass"));
        assert!(sum.contains("check.m.passed = true"));
    }
}
