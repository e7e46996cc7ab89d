//! `[section]` headers and `key = value` lines. The `[experiment]` section
//! holds the name, seed and output directory; every other key belongs to
//! the experiment and must be unique across sections.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub out: Option<String>,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

fn bad(line: usize, msg: impl fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

impl ExperimentConfig {
    pub fn new(name: &str, seed: u64) -> Self {
        Self {
            name: name.into(),
            seed,
            out: None,
            sections: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut head: BTreeMap<String, String> = BTreeMap::new();
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut owner: BTreeMap<String, String> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| bad(n, "unterminated section header"))?
                    .trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(bad(n, format!("bad section name '{name}'")));
                }
                current = Some(name.to_string());
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| bad(n, "expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(bad(n, format!("bad key '{k}'")));
            }
            let sec = current.clone().ok_or_else(|| bad(n, "key outside any section"))?;
            if sec == "experiment" {
                if head.insert(k.into(), v.into()).is_some() {
                    return Err(bad(n, format!("duplicate key '{k}'")));
                }
                continue;
            }
            if let Some(prev) = owner.insert(k.into(), sec.clone()) {
                return Err(bad(n, format!("key '{k}' already set in [{prev}]")));
            }
            sections.entry(sec).or_default().insert(k.into(), v.into());
        }
        let name = head
            .remove("name")
            .ok_or_else(|| Error::Config("[experiment] needs a name".into()))?;
        let seed = head
            .remove("seed")
            .ok_or_else(|| Error::Config("[experiment] needs a seed".into()))?;
        let seed = seed
            .parse()
            .map_err(|_| Error::Config(format!("seed must be a non-negative integer, got '{seed}'")))?;
        let out = head.remove("out");
        if let Some(k) = head.keys().next() {
            return Err(Error::Config(format!("unknown key '{k}' in [experiment]")));
        }
        Ok(Self {
            name,
            seed,
            out,
            sections,
        })
    }

    /// Raw value and its section.
    pub fn lookup(&self, key: &str) -> Option<(&str, &str)> {
        self.sections
            .iter()
            .find_map(|(s, kv)| kv.get(key).map(|v| (s.as_str(), v.as_str())))
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) {
        for kv in self.sections.values_mut() {
            kv.remove(key);
        }
        self.sections.retain(|_, kv| !kv.is_empty());
        self.sections
            .entry(section.into())
            .or_default()
            .insert(key.into(), value.into());
    }

    pub fn keys(&self) -> impl Iterator<Item = (&str, &str)> {
        self.sections
            .iter()
            .flat_map(|(s, kv)| kv.keys().map(move |k| (s.as_str(), k.as_str())))
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[experiment]")?;
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "seed = {}", self.seed)?;
        if let Some(o) = &self.out {
            writeln!(f, "out = {o}")?;
        }
        for (s, kv) in &self.sections {
            writeln!(f, "\n[{s}]")?;
            for (k, v) in kv {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}

/// A real number: decimal, `a/b`, `inf` or `-inf`.
pub fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    let err = || Error::Config(format!("'{s}' is not a number"));
    match s {
        "inf" | "+inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?);
        if b == 0.0 {
            return Err(err());
        }
        return Ok(a / b);
    }
    let v: f64 = s.parse().map_err(|_| err())?;
    if v.is_nan() {
        return Err(err());
    }
    Ok(v)
}

/// Comma-separated values; an item `a..b` expands to `a, a+1, …` up to `b`.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    for item in s.split(',') {
        let item = item.trim();
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (parse_f64(a)?, parse_f64(b)?);
            if !(a.is_finite() && b.is_finite()) || b < a {
                return Err(Error::Config(format!("empty or unbounded range '{item}'")));
            }
            let n = (b - a + 1e-9).floor() as usize;
            out.extend((0..=n).map(|i| a + i as f64));
        } else {
            out.push(parse_f64(item)?);
        }
    }
    Ok(out)
}

/// `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let err = || Error::Config(format!("'{t}' is not a complex number"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_f64(t)?, 0.0));
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match cut {
        Some(i) => {
            let re = parse_f64(&body[..i])?;
            let im_s = &body[i..];
            let im = match im_s {
                "+" => 1.0,
                "-" => -1.0,
                _ => parse_f64(im_s)?,
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => parse_f64(body).map_err(|_| err())?,
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(parse_complex).collect()
}

pub fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Error::Config(format!("'{other}' is not a boolean"))),
    }
}
