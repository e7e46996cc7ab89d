//! Tensor-product discretizations of ℝ^d and complex sampled functions.
//!
//! Flattening convention: nodes of a d-dimensional grid are stored in
//! row-major order with the **last axis varying fastest**. Every module in
//! the crate relies on this order.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::quadrature::{gauss_hermite, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    GaussHermite,
    UniformBox,
}

/// Parameters accepted by [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// `nodes` Gauss–Hermite nodes per axis.
    GaussHermite { nodes: usize },
    /// `points` equispaced nodes per axis on `[-half_extent, half_extent]`,
    /// trapezoid weights.
    UniformBox { half_extent: f64, points: usize },
}

#[derive(Debug)]
pub struct Grid {
    dim: usize,
    kind: GridKind,
    half_extent: Option<f64>,
    axes: Vec<Rule>,
    flat_weights: OnceLock<Vec<f64>>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.kind == other.kind
            && self.half_extent == other.half_extent
            && self.axes == other.axes
    }
}

pub fn build_grid(dim: usize, spec: GridSpec) -> Result<Arc<Grid>> {
    if dim == 0 {
        return param("grid dimension must be at least 1");
    }
    match spec {
        GridSpec::GaussHermite { nodes } => {
            if nodes == 0 {
                return param("gauss-hermite grid needs N >= 1");
            }
            let rule = gauss_hermite(nodes)?;
            Ok(Arc::new(Grid {
                dim,
                kind: GridKind::GaussHermite,
                half_extent: None,
                axes: vec![rule; dim],
                flat_weights: OnceLock::new(),
            }))
        }
        GridSpec::UniformBox { half_extent, points } => {
            if !(half_extent > 0.0) || !half_extent.is_finite() {
                return param(format!("uniform box needs R > 0, got {half_extent}"));
            }
            if points < 2 {
                return param(format!("uniform box needs n >= 2 points, got {points}"));
            }
            let h = 2.0 * half_extent / (points - 1) as f64;
            let nodes: Vec<f64> = (0..points)
                .map(|i| {
                    // symmetric construction keeps x_i = -x_{n-1-i} exactly
                    let j = i as f64 - 0.5 * (points - 1) as f64;
                    j * h
                })
                .collect();
            let mut weights = vec![h; points];
            weights[0] = 0.5 * h;
            weights[points - 1] = 0.5 * h;
            Ok(Arc::new(Grid {
                dim,
                kind: GridKind::UniformBox,
                half_extent: Some(half_extent),
                axes: vec![Rule { nodes, weights }; dim],
                flat_weights: OnceLock::new(),
            }))
        }
    }
}

impl Grid {
    pub fn gauss_hermite(dim: usize, nodes: usize) -> Result<Arc<Grid>> {
        build_grid(dim, GridSpec::GaussHermite { nodes })
    }

    pub fn uniform_box(dim: usize, half_extent: f64, points: usize) -> Result<Arc<Grid>> {
        build_grid(dim, GridSpec::UniformBox { half_extent, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn half_extent(&self) -> Option<f64> {
        self.half_extent
    }

    pub fn axis(&self, i: usize) -> &Rule {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[Rule] {
        &self.axes
    }

    /// Per-axis node counts.
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Rule::len).collect()
    }

    /// Total number of tensor nodes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Rule::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Uniform spacing (uniform-box grids only).
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            GridKind::UniformBox => {
                let a = &self.axes[0].nodes;
                Some(a[1] - a[0])
            }
            GridKind::GaussHermite => None,
        }
    }

    /// Per-axis index tuple of a flat index.
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.dim).rev() {
            let n = self.axes[axis].len();
            out[axis] = flat % n;
            flat /= n;
        }
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.dim];
        self.unflatten(flat, &mut idx);
        idx.iter()
            .enumerate()
            .map(|(axis, &i)| self.axes[axis].nodes[i])
            .collect()
    }

    /// Tensor quadrature weights in flat order (computed once).
    pub fn weights(&self) -> &[f64] {
        self.flat_weights.get_or_init(|| {
            let mut w = vec![1.0];
            for rule in &self.axes {
                let mut next = Vec::with_capacity(w.len() * rule.len());
                for &outer in &w {
                    for &inner in &rule.weights {
                        next.push(outer * inner);
                    }
                }
                w = next;
            }
            w
        })
    }

    /// Squared radius |x|² of every node, flat order.
    pub fn radii_squared(&self) -> Vec<f64> {
        let mut r2 = vec![0.0];
        for rule in &self.axes {
            let mut next = Vec::with_capacity(r2.len() * rule.len());
            for &outer in &r2 {
                for &x in &rule.nodes {
                    next.push(outer + x * x);
                }
            }
            r2 = next;
        }
        r2
    }

    /// Total measure of the grid (sum of all weights).
    pub fn measure(&self) -> f64 {
        self.axes
            .iter()
            .map(|r| r.weights.iter().sum::<f64>())
            .product()
    }
}

/// Complex samples of a function on the nodes of a [`Grid`].
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Sample `f` at every node.
    pub fn from_fn<F: FnMut(&[f64]) -> Complex64>(grid: Arc<Grid>, mut f: F) -> Self {
        let d = grid.dim();
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        let values = (0..grid.len())
            .map(|flat| {
                grid.unflatten(flat, &mut idx);
                for axis in 0..d {
                    x[axis] = grid.axis(axis).nodes[idx[axis]];
                }
                f(&x)
            })
            .collect();
        Self { grid, values }
    }

    /// Sample a real function.
    pub fn from_real_fn<F: FnMut(&[f64]) -> f64>(grid: Arc<Grid>, mut f: F) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Product of one-dimensional factors, one per axis.
    pub fn from_separable(grid: Arc<Grid>, factors: &[Vec<Complex64>]) -> Result<Self> {
        if factors.len() != grid.dim() {
            return Err(Error::Shape("one factor per axis required".into()));
        }
        let mut vals = vec![Complex64::new(1.0, 0.0)];
        for (axis, factor) in factors.iter().enumerate() {
            if factor.len() != grid.axis(axis).len() {
                return Err(Error::Shape(format!("factor {axis} has wrong length")));
            }
            let mut next = Vec::with_capacity(vals.len() * factor.len());
            for &outer in &vals {
                for &inner in factor {
                    next.push(outer * inner);
                }
            }
            vals = next;
        }
        Ok(Self { grid, values: vals })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Shape("grid functions live on different grids".into()))
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn map<F: FnMut(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().copied().map(f).collect(),
        }
    }

    /// Pointwise multiplication by a real weight `w(x)`.
    pub fn weighted<F: FnMut(&[f64]) -> f64>(&self, mut w: F) -> Self {
        let d = self.grid.dim();
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(flat, v)| {
                self.grid.unflatten(flat, &mut idx);
                for axis in 0..d {
                    x[axis] = self.grid.axis(axis).nodes[idx[axis]];
                }
                v * w(&x)
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `Σ wᵢ f(xᵢ) conj(g(xᵢ))`.
pub fn quad_inner(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    f.check_same(g)?;
    let w = f.grid.weights();
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(w)
        .map(|((a, b), &w)| a * b.conj() * w)
        .sum())
}

/// Discrete `L^p` norm; `p = f64::INFINITY` gives the max over nodes.
pub fn lebesgue_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return param(format!("Lebesgue exponent must satisfy p >= 1, got {p}"));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let w = f.grid.weights();
    let scale = f.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    // normalize before powering to avoid under/overflow for large p
    let sum: f64 = f
        .values
        .iter()
        .zip(w)
        .map(|(v, &w)| w * (v.norm() / scale).powf(p))
        .sum();
    Ok(scale * sum.powf(1.0 / p))
}

/// Uniform time samples `t₀ < … < t₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    start: f64,
    end: f64,
    count: usize,
    step: f64,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if !(start < end) {
            return param(format!("time interval needs t0 < t1, got [{start}, {end}]"));
        }
        if count < 2 {
            return param("time grid needs at least two samples");
        }
        Ok(Self {
            start,
            end,
            count,
            step: (end - start) / (count - 1) as f64,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.end
        } else {
            self.start + i as f64 * self.step
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.time(i)).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.count];
        w[0] *= 0.5;
        w[self.count - 1] *= 0.5;
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_1d;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn uniform_box_matches_trapezoid() {
        let g = Grid::uniform_box(1, 1.0, 3).unwrap();
        assert_eq!(g.axis(0).nodes, vec![-1.0, 0.0, 1.0]);
        assert!((g.axis(0).weights.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        let g = Grid::uniform_box(2, 3.7, 101).unwrap();
        for rule in g.axes() {
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 7.4).abs() / 7.4 < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::gauss_hermite(1, 0).is_err());
        assert!(Grid::gauss_hermite(0, 4).is_err());
        assert!(Grid::uniform_box(1, 0.0, 10).is_err());
        assert!(Grid::uniform_box(1, -1.0, 10).is_err());
        assert!(Grid::uniform_box(1, 1.0, 1).is_err());
    }

    #[test]
    fn tensor_structure() {
        let g = Grid::gauss_hermite(3, 32).unwrap();
        assert_eq!(g.shape(), vec![32, 32, 32]);
        assert_eq!(g.len(), 32 * 32 * 32);
        // last axis fastest
        let p = g.point(1);
        assert_eq!(p[0], g.axis(0).nodes[0]);
        assert_eq!(p[2], g.axis(2).nodes[1]);
    }

    #[test]
    fn hermite_normalization_on_gauss_hermite_grid() {
        let g = Grid::gauss_hermite(1, 16).unwrap();
        let h0 = GridFunction::from_real_fn(g.clone(), |x| hermite_1d(0, x[0]));
        let h1 = GridFunction::from_real_fn(g.clone(), |x| hermite_1d(1, x[0]));
        assert!((quad_inner(&h0, &h0).unwrap().re - 1.0).abs() < 1e-12);
        assert!(quad_inner(&h0, &h1).unwrap().norm() < 1e-12);
        assert!((lebesgue_norm(&h0, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let zero = GridFunction::zeros(g);
        assert_eq!(quad_inner(&zero, &h0).unwrap(), c(0.0));
    }

    #[test]
    fn indicator_norm_and_homogeneity() {
        // cells of weight 1 on the interior of a unit-spaced grid
        let g = Grid::uniform_box(1, 5.0, 11).unwrap();
        let f = GridFunction::from_real_fn(g.clone(), |x| if x[0].abs() < 2.5 && x[0] > -1.5 { 1.0 } else { 0.0 });
        // nodes -1, 0, 1, 2 → measure 4
        assert!((lebesgue_norm(&f, 2.0).unwrap() - 2.0).abs() < 1e-14);
        let scaled = f.scale(c(3.5));
        assert!((lebesgue_norm(&scaled, 3.0).unwrap() - 3.5 * lebesgue_norm(&f, 3.0).unwrap()).abs() < 1e-13);
        assert_eq!(lebesgue_norm(&scaled, f64::INFINITY).unwrap(), 3.5);
        assert!(lebesgue_norm(&f, 0.5).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = Grid::uniform_box(1, 1.0, 5).unwrap();
        let b = Grid::uniform_box(1, 1.0, 7).unwrap();
        let fa = GridFunction::zeros(a);
        let fb = GridFunction::zeros(b.clone());
        assert!(matches!(quad_inner(&fa, &fb), Err(Error::Shape(_))));
        assert!(GridFunction::new(b, vec![c(0.0); 3]).is_err());
    }

    #[test]
    fn time_grid_step() {
        let t = TimeGrid::new(0.0, 1.0, 11).unwrap();
        assert_eq!(t.step(), 0.1);
        assert_eq!(t.time(10), 1.0);
        assert!((t.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
    }
}
