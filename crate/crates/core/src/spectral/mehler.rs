//! The propagator `e^{−itH}` through its oscillatory kernel, and the
//! time-integral route to `Π_k`.
//!
//! The kernel factorizes over coordinates, so every application is a
//! sequence of one-dimensional contractions with the matrix
//! `C₁ |sin 2t|^{−1/2} e^{iθ} e^{i(x²+y²)/2·cot 2t} e^{−ixy csc 2t} w_y`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::{Grid, GridFunction, GridKind};
use crate::hermite::{contract_axis, hermite_1d, synthesize, SpectralCoefficients};
use crate::quadrature::{composite_legendre, Rule};

/// Smallest admissible `|sin 2t|` for the kernel route.
pub const SINGULARITY_GUARD: f64 = 1e-3;

/// Fitted one-dimensional kernel constant together with the quantities it
/// should be compared with.
#[derive(Debug, Clone, Copy)]
pub struct MehlerCalibration {
    pub constant: Complex64,
    /// `(2πi)^{−1/2}` with the principal branch.
    pub reference: Complex64,
    pub residual: f64,
}

/// Fit `C₁` by matching the kernel quadrature of `Φ₀` at `t = π/8`
/// against the exact phase `e^{−iπ/8} Φ₀`.
pub fn calibrate_mehler_1d() -> MehlerCalibration {
    let grid = Grid::uniform_box(1, 12.0, 1201).expect("static grid");
    let rule = grid.axis(0);
    let t = FRAC_PI_8;
    let (s, c) = (2.0 * t).sin_cos();
    let cot = c / s;
    let csc = 1.0 / s;
    let probes = [-2.0, -1.0, -0.25, 0.0, 0.5, 1.5, 2.5];
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    let mut raws = Vec::new();
    for &x in &probes {
        let mut raw = Complex64::new(0.0, 0.0);
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            let phase = 0.5 * (x * x + y * y) * cot - x * y * csc;
            raw += Complex64::from_polar(w * hermite_1d(0, y), phase);
        }
        raw *= s.abs().powf(-0.5);
        let target = Complex64::from_polar(hermite_1d(0, x), -t);
        num += raw.conj() * target;
        den += raw.norm_sqr();
        raws.push((raw, target));
    }
    let constant = num / den;
    let residual = raws
        .iter()
        .map(|(r, t)| (constant * r - t).norm())
        .fold(0.0, f64::max);
    MehlerCalibration {
        constant,
        reference: (Complex64::new(0.0, 2.0 * PI)).powf(-0.5),
        residual,
    }
}

fn calibrated_c1() -> Complex64 {
    static C1: OnceLock<Complex64> = OnceLock::new();
    *C1.get_or_init(|| calibrate_mehler_1d().constant)
}

/// Calibrated `C_d = C₁^d`.
pub fn mehler_constant(d: usize) -> Complex64 {
    calibrated_c1().powi(d as i32)
}

/// Prefactor `C_d |sin 2t|^{−d/2} e^{−iπdm/2}` with `m = ⌊2t/π⌋`: every
/// crossing of a caustic `sin 2t = 0` adds a quarter-turn per dimension.
pub fn mehler_prefactor(t: f64, d: usize) -> Result<Complex64> {
    let s = (2.0 * t).sin();
    if s.abs() < SINGULARITY_GUARD {
        return Err(Error::Singularity {
            value: s.abs(),
            guard: SINGULARITY_GUARD,
        });
    }
    let m = (t / FRAC_PI_2).floor();
    let maslov = Complex64::from_polar(1.0, -FRAC_PI_2 * d as f64 * m);
    Ok(mehler_constant(d) * s.abs().powf(-(d as f64) / 2.0) * maslov)
}

/// Row-major `target × source` matrix of the 1-d kernel at time `t`
/// (without the prefactor), quadrature weights included.
fn kernel_matrix(t: f64, target: &Rule, source: &Rule) -> Vec<Complex64> {
    let (s, c) = (2.0 * t).sin_cos();
    let cot = c / s;
    let csc = 1.0 / s;
    let ny = source.len();
    let chirp_y: Vec<Complex64> = source
        .nodes
        .iter()
        .zip(&source.weights)
        .map(|(&y, &w)| Complex64::from_polar(w, 0.5 * y * y * cot))
        .collect();
    let uniform = ny > 2 && {
        let h = source.nodes[1] - source.nodes[0];
        source
            .nodes
            .windows(2)
            .all(|p| ((p[1] - p[0]) - h).abs() < 1e-12 * h.abs())
    };
    let mut mat = vec![Complex64::new(0.0, 0.0); target.len() * ny];
    for (i, &x) in target.nodes.iter().enumerate() {
        let row = &mut mat[i * ny..(i + 1) * ny];
        let chirp_x = Complex64::from_polar(1.0, 0.5 * x * x * cot);
        if uniform {
            // e^{−ixy_j csc} by complex multiplication, re-anchored every 64 steps
            let h = source.nodes[1] - source.nodes[0];
            let step = Complex64::from_polar(1.0, -x * h * csc);
            let mut cur = Complex64::new(0.0, 0.0);
            for (j, r) in row.iter_mut().enumerate() {
                if j % 64 == 0 {
                    cur = Complex64::from_polar(1.0, -x * source.nodes[j] * csc);
                } else {
                    cur *= step;
                }
                *r = chirp_x * cur * chirp_y[j];
            }
        } else {
            for (j, r) in row.iter_mut().enumerate() {
                *r = chirp_x * Complex64::from_polar(1.0, -x * source.nodes[j] * csc) * chirp_y[j];
            }
        }
    }
    mat
}

/// `e^{−itH} f` by kernel quadrature; `f` sampled on a uniform-box grid,
/// the output sampled on `target`.
pub fn propagator_mehler(f: &GridFunction, t: f64, target: &Arc<Grid>) -> Result<GridFunction> {
    let src = f.grid();
    if src.kind() != GridKind::UniformBox {
        return param("the kernel route needs data on a uniform-box grid");
    }
    let d = src.dim();
    if target.dim() != d {
        return Err(Error::Shape("target grid dimension differs from source".into()));
    }
    let pre = mehler_prefactor(t, d)?;
    let mut shape = src.shape();
    let mut data = f.values().to_vec();
    let mat0 = kernel_matrix(t, target.axis(0), src.axis(0));
    for axis in 0..d {
        let (tr, sr) = (target.axis(axis), src.axis(axis));
        let owned;
        let mat = if tr == target.axis(0) && sr == src.axis(0) {
            &mat0
        } else {
            owned = kernel_matrix(t, tr, sr);
            &owned
        };
        data = contract_axis(&data, &shape, axis, mat, tr.len());
        shape[axis] = tr.len();
    }
    for v in data.iter_mut() {
        *v *= pre;
    }
    GridFunction::new(target.clone(), data)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagatorRoute {
    Spectral,
    Mehler,
}

/// `e^{−itH} f` for band-limited `f`, sampled on `target`. The kernel
/// route synthesizes `f` on `source` first.
pub fn propagator(
    f: &SpectralCoefficients,
    t: f64,
    route: PropagatorRoute,
    target: &Arc<Grid>,
    source: Option<&Arc<Grid>>,
) -> Result<GridFunction> {
    match route {
        PropagatorRoute::Spectral => {
            synthesize(&super::multiplier::propagator_spectral(f, t), target)
        }
        PropagatorRoute::Mehler => {
            let src = match source {
                Some(s) => s.clone(),
                None => default_source_grid(f.dim(), f.kmax(), target, (2.0 * t).sin().abs())?,
            };
            let fs = synthesize(f, &src)?;
            propagator_mehler(&fs, t, target)
        }
    }
}

/// Uniform source grid wide enough for level `kmax` data and fine enough
/// to resolve the kernel oscillation down to `|sin 2t| = min_sin`.
pub fn default_source_grid(
    d: usize,
    kmax: usize,
    target: &Grid,
    min_sin: f64,
) -> Result<Arc<Grid>> {
    let turning = ((2 * kmax + 1) as f64).sqrt();
    let r = turning + 7.0;
    let xmax = target
        .axes()
        .iter()
        .map(|a| a.nodes.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .fold(0.0, f64::max);
    let min_sin = min_sin.max(SINGULARITY_GUARD);
    let omega = (r + xmax) / min_sin + turning + 7.0;
    let h = 2.0 * PI / (1.25 * omega);
    let n = ((2.0 * r / h).ceil() as usize + 1).max(65) | 1;
    Grid::uniform_box(d, r, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectionRoute {
    Expansion,
    /// Time integral with kernel quadrature away from `t ∈ {0, ±π}` and
    /// the spectral representation on `|t| < δ`, `|t ∓ π| < δ`.
    Integral { delta: f64 },
}

impl ProjectionRoute {
    pub fn integral() -> Self {
        ProjectionRoute::Integral { delta: 0.1 }
    }
}

/// Time-quadrature controls for the integral route.
#[derive(Debug, Clone)]
pub struct IntegralOptions {
    pub delta: f64,
    /// Gauss–Legendre panels per half-interval; `None` picks from `K_max`.
    pub panels: Option<usize>,
    pub order: usize,
    pub source: Option<Arc<Grid>>,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            delta: 0.1,
            panels: None,
            order: 12,
            source: None,
        }
    }
}

/// Weight of `Π_{k'}` in the singular neighbourhoods:
/// `(1/2π) ∫_{|t|<δ ∪ |t∓π|<δ} e^{it(k−k')} dt`.
pub fn singular_weight(m: i64, delta: f64) -> f64 {
    let parity = if m % 2 == 0 { 2.0 } else { 0.0 };
    if m == 0 {
        return parity * 2.0 * delta / (2.0 * PI);
    }
    parity * 2.0 * (m as f64 * delta).sin() / (m as f64) / (2.0 * PI)
}

/// `Π_k f` for band-limited `f` and a single `k`, sampled on `target`.
pub fn project(
    f: &SpectralCoefficients,
    k: usize,
    route: ProjectionRoute,
    target: &Arc<Grid>,
) -> Result<GridFunction> {
    match route {
        ProjectionRoute::Expansion => {
            synthesize(&super::multiplier::project_expansion(f, k), target)
        }
        ProjectionRoute::Integral { delta } => {
            let opts = IntegralOptions {
                delta,
                ..IntegralOptions::default()
            };
            Ok(project_integral(f, &[k], target, &opts)?.remove(0))
        }
    }
}

/// Integral route for several `k` at once; the propagated samples are
/// shared between all requested levels.
pub fn project_integral(
    f: &SpectralCoefficients,
    ks: &[usize],
    target: &Arc<Grid>,
    opts: &IntegralOptions,
) -> Result<Vec<GridFunction>> {
    let d = f.dim();
    if !(1..=3).contains(&d) {
        return param(format!("integral route supports d = 1, 2, 3; got {d}"));
    }
    let delta = opts.delta;
    if !(delta > 0.0 && delta < PI / 4.0) {
        return param(format!("singular half-width δ must lie in (0, π/4), got {delta}"));
    }
    let kmax = f.kmax();
    let source = match &opts.source {
        Some(s) => s.clone(),
        None => default_source_grid(d, kmax, target, delta.sin())?,
    };
    let fs = synthesize(f, &source)?;
    let panels = opts.panels.unwrap_or_else(|| (kmax + 10) / 4 + 2);
    let right = composite_legendre(delta, PI - delta, panels, opts.order);
    let mut nodes: Vec<(f64, f64)> = right
        .nodes
        .iter()
        .zip(&right.weights)
        .map(|(&t, &w)| (t, w))
        .collect();
    let left: Vec<(f64, f64)> = nodes.iter().map(|&(t, w)| (-t, w)).collect();
    nodes.extend(left);

    // each chunk returns its partial sums for every k; chunks are summed in order
    let n = target.len();
    let chunks: Vec<Result<Vec<Vec<Complex64>>>> = nodes
        .par_chunks(16)
        .map(|chunk| {
            let mut acc = vec![vec![Complex64::new(0.0, 0.0); n]; ks.len()];
            for &(t, w) in chunk {
                let u = propagator_mehler(&fs, 0.5 * t, target)?;
                for (slot, &k) in acc.iter_mut().zip(ks) {
                    let phase =
                        Complex64::from_polar(w / (2.0 * PI), 0.5 * t * (2 * k + d) as f64);
                    for (a, v) in slot.iter_mut().zip(u.values()) {
                        *a += phase * v;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut totals = vec![vec![Complex64::new(0.0, 0.0); n]; ks.len()];
    for chunk in chunks {
        for (tot, part) in totals.iter_mut().zip(chunk?) {
            for (a, b) in tot.iter_mut().zip(part) {
                *a += b;
            }
        }
    }
    let mut out = Vec::with_capacity(ks.len());
    for (&k, tot) in ks.iter().zip(totals) {
        let near = f.scale_levels(|kp| singular_weight(k as i64 - kp as i64, delta).into());
        let near = synthesize(&near, target)?;
        let vals: Vec<Complex64> = tot.iter().zip(near.values()).map(|(a, b)| a + b).collect();
        out.push(GridFunction::new(target.clone(), vals)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{lebesgue_norm, quad_inner};
    use crate::hermite::MultiIndex;
    use std::f64::consts::FRAC_PI_4;

    fn rel_err(a: &GridFunction, b: &GridFunction) -> f64 {
        lebesgue_norm(&a.sub(b).unwrap(), 2.0).unwrap() / lebesgue_norm(b, 2.0).unwrap()
    }

    #[test]
    fn calibration_matches_principal_branch() {
        let cal = calibrate_mehler_1d();
        assert!(cal.residual < 1e-12);
        assert!((cal.constant - cal.reference).norm() < 1e-12);
        assert!((cal.constant.norm() - (2.0 * PI).powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn quarter_period_phase() {
        let g = Grid::uniform_box(1, 10.0, 801).unwrap();
        let phi0 = GridFunction::from_real_fn(g.clone(), |x| hermite_1d(0, x[0]));
        let out = propagator_mehler(&phi0, FRAC_PI_4, &g).unwrap();
        let want = phi0.scale(Complex64::from_polar(1.0, -FRAC_PI_4));
        assert!(rel_err(&out, &want) < 1e-4);
    }

    #[test]
    fn guard_rejects_caustics() {
        let g = Grid::uniform_box(1, 5.0, 101).unwrap();
        let f = GridFunction::zeros(g.clone());
        assert!(matches!(
            propagator_mehler(&f, PI / 2.0 + 1e-5, &g),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn kernel_route_matches_spectral_in_every_sector() {
        let kmax = 12;
        let f = SpectralCoefficients::from_fn(1, kmax, |a| {
            let n = a.degree() as f64;
            Complex64::new((0.7 * n).cos(), (1.3 * n).sin()) / (1.0 + n)
        });
        let target = Grid::gauss_hermite(1, 40).unwrap();
        for t in [FRAC_PI_8, 0.3, 1.2, 2.0, 2.9, -0.4, -1.9, 4.0] {
            let a = propagator(&f, t, PropagatorRoute::Mehler, &target, None).unwrap();
            let b = propagator(&f, t, PropagatorRoute::Spectral, &target, None).unwrap();
            assert!(rel_err(&a, &b) < 1e-6, "t = {t}: {}", rel_err(&a, &b));
        }
    }

    #[test]
    fn two_dimensional_kernel() {
        let f = SpectralCoefficients::from_fn(2, 5, |a| Complex64::new(1.0 / (1 + a.degree()) as f64, 0.1));
        let target = Grid::gauss_hermite(2, 16).unwrap();
        let a = propagator(&f, 0.6, PropagatorRoute::Mehler, &target, None).unwrap();
        let b = propagator(&f, 0.6, PropagatorRoute::Spectral, &target, None).unwrap();
        assert!(rel_err(&a, &b) < 1e-6);
    }

    #[test]
    fn singular_weights_sum_to_neighbourhood_measure() {
        assert!((singular_weight(0, 0.1) - 0.4 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(singular_weight(3, 0.1), 0.0);
        // full circle: δ = π/2 gives the Kronecker delta for even m
        assert!(singular_weight(2, FRAC_PI_2).abs() < 1e-16);
    }

    #[test]
    fn integral_route_projects_eigenfunctions() {
        let target = Grid::gauss_hermite(1, 30).unwrap();
        let alpha = MultiIndex(vec![4]);
        let f = SpectralCoefficients::basis(&alpha, 8).unwrap();
        let on = project(&f, 4, ProjectionRoute::integral(), &target).unwrap();
        let want = synthesize(&f, &target).unwrap();
        assert!(rel_err(&on, &want) < 1e-6);
        let off = project(&f, 3, ProjectionRoute::integral(), &target).unwrap();
        assert!(lebesgue_norm(&off, 2.0).unwrap() < 1e-6);
        let idem = quad_inner(&on, &want).unwrap();
        assert!((idem.re - 1.0).abs() < 1e-6);
    }
}
