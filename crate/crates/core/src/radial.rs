//! Radial quadrature in ℝ^d: nodes in `r` with shell measures
//! `|S^{d−1}| r^{d−1} dr`, for norms of radial profiles.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{param, Result};
use crate::lorentz::Atoms;
use crate::quadrature::gauss_legendre;

pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: usize,
    radii: Vec<f64>,
    measures: Vec<f64>,
}

impl RadialGrid {
    /// Gauss–Legendre of the given order on each `[b_i, b_{i+1}]`.
    pub fn from_breakpoints(dim: usize, breaks: &[f64], order: usize) -> Result<Self> {
        if dim == 0 || breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks[0] < 0.0 {
            return param("radial grid needs d >= 1 and increasing nonnegative breakpoints");
        }
        let area = sphere_area(dim);
        let mut radii = Vec::new();
        let mut measures = Vec::new();
        for w in breaks.windows(2) {
            let rule = gauss_legendre(order, w[0], w[1]);
            for (&r, &q) in rule.nodes.iter().zip(&rule.weights) {
                radii.push(r);
                measures.push(area * r.powi(dim as i32 - 1) * q);
            }
        }
        Ok(Self {
            dim,
            radii,
            measures,
        })
    }

    /// Panels of width at most `step` on `[0, r_max]`.
    pub fn uniform(dim: usize, r_max: f64, step: f64, order: usize) -> Result<Self> {
        let panels = (r_max / step).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=panels).map(|i| r_max * i as f64 / panels as f64).collect();
        Self::from_breakpoints(dim, &breaks, order)
    }

    /// Geometric panels from `r_min` to `r_max`, uniform panels of width
    /// `step` once the geometric width exceeds it, and one panel `[0, r_min]`.
    pub fn graded(dim: usize, r_min: f64, r_max: f64, ratio: f64, step: f64, order: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && ratio > 1.0 && step > 0.0) {
            return param("graded radial grid needs 0 < r_min < r_max, ratio > 1, step > 0");
        }
        let mut breaks = vec![0.0, r_min];
        let mut r = r_min;
        while r < r_max {
            let next = (r * ratio).min(r + step).min(r_max);
            breaks.push(next);
            r = next;
        }
        Self::from_breakpoints(dim, &breaks, order)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radii_squared(&self) -> Vec<f64> {
        self.radii.iter().map(|r| r * r).collect()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn atoms(&self, values: &[f64]) -> Atoms {
        Atoms {
            values: values.iter().map(|v| v.abs()).collect(),
            measures: self.measures.clone(),
        }
    }

    pub fn lebesgue_norm(&self, values: &[f64], p: f64) -> f64 {
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        if p.is_infinite() {
            return scale;
        }
        let s: f64 = values
            .iter()
            .zip(&self.measures)
            .map(|(v, w)| w * (v.abs() / scale).powf(p))
            .sum();
        scale * s.powf(1.0 / p)
    }
}
