//! Decreasing rearrangements and Lorentz quasi-norms `L^{p,a}`.
//!
//! A function is a set of atoms (|value|, measure). For a grid function the
//! atoms are the quadrature cells; for a radial profile they are shells.

use std::cmp::Ordering;

use crate::error::{param, Error, Result};
use crate::exponents::CarlemanParams;
use crate::grid::{GridFunction, TimeGrid};
use crate::spectral::spacetime::TimeFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzExponent {
    pub p: f64,
    pub a: f64,
}

impl LorentzExponent {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return param(format!("Lorentz exponent needs 1 < p < inf, got {p}"));
        }
        if a.is_nan() || a < 1.0 {
            return param(format!("Lorentz exponent needs a >= 1, got {a}"));
        }
        Ok(Self { p, a })
    }

    pub fn lebesgue(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn weak(p: f64) -> Result<Self> {
        Self::new(p, f64::INFINITY)
    }
}

/// Values with attached measures; values need not be sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Atoms {
    pub values: Vec<f64>,
    pub measures: Vec<f64>,
}

impl Atoms {
    pub fn new(values: Vec<f64>, measures: Vec<f64>) -> Result<Self> {
        if values.len() != measures.len() {
            return Err(Error::Shape(format!(
                "{} values but {} measures",
                values.len(),
                measures.len()
            )));
        }
        Ok(Self { values, measures })
    }

    pub fn from_grid(f: &GridFunction) -> Self {
        Self {
            values: f.values().iter().map(|v| v.norm()).collect(),
            measures: f.grid().weights().to_vec(),
        }
    }
}

/// `f*` as strictly decreasing steps `(value, measure)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rearrangement {
    pub steps: Vec<(f64, f64)>,
}

impl Rearrangement {
    pub fn total_measure(&self) -> f64 {
        self.steps.iter().map(|s| s.1).sum()
    }

    /// `f*(t)`, right-continuous.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(v, m) in &self.steps {
            acc += m;
            if t < acc {
                return v;
            }
        }
        0.0
    }
}

pub fn rearrange_atoms(atoms: &Atoms) -> Rearrangement {
    let mut pairs: Vec<(f64, f64)> = atoms
        .values
        .iter()
        .map(|v| v.abs())
        .zip(atoms.measures.iter().copied())
        .filter(|&(v, m)| v > 0.0 && m > 0.0)
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let mut steps: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
    for (v, m) in pairs {
        match steps.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => steps.push((v, m)),
        }
    }
    Rearrangement { steps }
}

pub fn rearrange(f: &GridFunction) -> Rearrangement {
    rearrange_atoms(&Atoms::from_grid(f))
}

/// `(∫₀^∞ (t^{1/p} f*(t))^a dt/t)^{1/a}`, exact on step functions.
pub fn lorentz_norm_steps(r: &Rearrangement, e: LorentzExponent) -> f64 {
    let Some(&(top, _)) = r.steps.first() else {
        return 0.0;
    };
    let total = r.total_measure();
    let inv_p = 1.0 / e.p;
    if e.a.is_infinite() {
        let mut acc = 0.0;
        let mut best = 0.0f64;
        for &(v, m) in &r.steps {
            acc += m;
            best = best.max(v * acc.powf(inv_p));
        }
        return best;
    }
    // scaled by top·total^{1/p} to keep powers in range
    let c = e.a / e.p;
    let mut acc = 0.0;
    let mut sum = 0.0;
    for &(v, m) in &r.steps {
        let lo = acc / total;
        acc += m;
        let hi = (acc / total).min(1.0);
        // hi^c − lo^c = hi^c (1 − (lo/hi)^c)
        let diff = if lo == 0.0 {
            hi.powf(c)
        } else {
            -hi.powf(c) * (c * (lo / hi).ln()).exp_m1()
        };
        sum += (v / top).powf(e.a) * diff;
    }
    top * total.powf(inv_p) * (sum / c).powf(1.0 / e.a)
}

pub fn lorentz_norm_atoms(atoms: &Atoms, e: LorentzExponent) -> f64 {
    lorentz_norm_steps(&rearrange_atoms(atoms), e)
}

pub fn lorentz_norm(f: &GridFunction, e: LorentzExponent) -> f64 {
    lorentz_norm_steps(&rearrange(f), e)
}

/// `(Σ_t w_t N(t)^r)^{1/r}`, `N(t)` the spatial norm of each sample,
/// trapezoid weights; `r = ∞` takes the max.
pub fn mixed_norm_of(times: &TimeGrid, spatial: &[f64], r: f64) -> Result<f64> {
    if spatial.len() != times.len() {
        return Err(Error::Shape(format!(
            "{} spatial norms for {} time samples",
            spatial.len(),
            times.len()
        )));
    }
    if r.is_nan() || r < 1.0 {
        return param(format!("time exponent must be >= 1, got {r}"));
    }
    if r.is_infinite() {
        return Ok(spatial.iter().copied().fold(0.0, f64::max));
    }
    let scale = spatial.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = times
        .weights()
        .iter()
        .zip(spatial)
        .map(|(w, n)| w * (n / scale).powf(r))
        .sum();
    Ok(scale * sum.powf(1.0 / r))
}

pub fn mixed_norm(g: &TimeFamily<GridFunction>, r: f64, e: LorentzExponent) -> Result<f64> {
    let first = &g.slices()[0];
    if g.slices().iter().any(|s| !s.same_grid(first)) {
        return Err(Error::Shape("time samples live on different grids".into()));
    }
    let spatial: Vec<f64> = g.slices().iter().map(|s| lorentz_norm(s, e)).collect();
    mixed_norm_of(g.times(), &spatial, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSide {
    Lhs,
    Rhs,
}

/// `t^{power} e^{−|x|²/(4t)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlemanWeight {
    pub power: f64,
}

impl CarlemanWeight {
    pub fn eval(&self, r2: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("Carleman weight needs t > 0, got {t}")));
        }
        Ok(t.powf(self.power) * (-r2 / (4.0 * t)).exp())
    }

    /// `ln w`; avoids underflow when `α` is large.
    pub fn ln_eval(&self, r2: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("Carleman weight needs t > 0, got {t}")));
        }
        Ok(self.power * t.ln() - r2 / (4.0 * t))
    }
}

pub fn carleman_weight(side: WeightSide, params: &CarlemanParams, d: usize) -> CarlemanWeight {
    let power = match side {
        WeightSide::Lhs => -params.alpha,
        WeightSide::Rhs => params.rhs_power(d),
    };
    CarlemanWeight { power }
}
