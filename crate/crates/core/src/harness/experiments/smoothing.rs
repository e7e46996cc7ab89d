//! `H^{−s}` on dilated Gaussians `f_λ(x) = e^{−λ²|x|²/2}`: ratios stay
//! bounded in λ when `1/p − 1/q ≤ 2s/d` and grow beyond it.

use crate::error::{param, Result};
use crate::harness::experiments::par_map;
use crate::harness::sweep::{loglog_slope, BoundEstimate, SweepResult, SweepRow};
use crate::radial::RadialGrid;
use crate::spectral::gaussian::{gaussian_fractional_inverse, gaussian_lp_norm};

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingParams {
    pub d: usize,
    pub s: f64,
    /// `(p, q)` inside or on the boundary.
    pub inside: (f64, f64),
    /// `(p, q)` with `1/p − 1/q > 2s/d`.
    pub outside: (f64, f64),
    pub lambdas: Vec<f64>,
    pub flat_tol: f64,
    pub growth_min: f64,
}

impl Default for SmoothingParams {
    fn default() -> Self {
        Self {
            d: 3,
            s: 1.0,
            inside: (1.2, 6.0),
            outside: (8.0 / 7.0, 8.0),
            lambdas: (0..=8).map(|i| 16.0 * 2f64.powf(0.5 * i as f64)).collect(),
            flat_tol: 0.1,
            growth_min: 0.1,
        }
    }
}

/// `(‖f_λ‖_p, ‖H^{−s} f_λ‖_q)`.
pub fn dilation_norms(lambda: f64, s: f64, d: usize, p: f64, q: f64) -> Result<(f64, f64)> {
    let a = lambda * lambda;
    // H^{−s} f_λ spreads to the scale of the Hermite ground state
    let grid = RadialGrid::graded(d, 1e-4 / lambda, 14.0, 1.15, 0.2, 10)?;
    let vals = gaussian_fractional_inverse(a, s, d, &grid.radii_squared())?;
    Ok((gaussian_lp_norm(a, p, d), grid.lebesgue_norm(&vals, q)))
}

fn sweep(res: &mut SweepResult, label: &str, par: &SmoothingParams, (p, q): (f64, f64)) -> Result<f64> {
    let est = par_map(&par.lambdas, |&l| {
        let (i, o) = dilation_norms(l, par.s, par.d, p, q)?;
        Ok(BoundEstimate::new(format!("{label}-gaussian"), i, o))
    })?;
    for (l, e) in par.lambdas.iter().zip(&est) {
        res.push(SweepRow::from_estimate(*l, e, 1.0));
    }
    let ratios: Vec<f64> = est.iter().map(|e| e.ratio).collect();
    let slope = loglog_slope(&par.lambdas, &ratios);
    res.metric(&format!("{label}_gap"), 1.0 / p - 1.0 / q);
    res.metric(&format!("{label}_slope"), slope);
    Ok(slope)
}

pub fn smoothing_boundary(par: &SmoothingParams) -> Result<SweepResult> {
    run(par, "smoothing-boundary")
}

/// The same dilation oracle with `s = 1`, at the critical line and beyond.
pub fn critical_necessity(par: &SmoothingParams) -> Result<SweepResult> {
    run(par, "critical-necessity")
}

fn run(par: &SmoothingParams, name: &str) -> Result<SweepResult> {
    if !(par.s > 0.0 && par.s < par.d as f64 / 2.0) {
        return param(format!("H^(-s) needs 0 < s < d/2, got s = {}", par.s));
    }
    if par.lambdas.len() < 2 || par.lambdas.iter().any(|&l| !(l > 0.0)) {
        return param("dilation sweep needs at least two positive λ");
    }
    let edge = 2.0 * par.s / par.d as f64;
    let gap_out = 1.0 / par.outside.0 - 1.0 / par.outside.1;
    if !(gap_out > edge) {
        return param(format!("outside point needs 1/p - 1/q > {edge}, got {gap_out}"));
    }
    let mut res = SweepResult::new(name, "lambda");
    res.metric("edge", edge);
    let flat = sweep(&mut res, "inside", par, par.inside)?;
    let grow = sweep(&mut res, "outside", par, par.outside)?;
    let gap_in = 1.0 / par.inside.0 - 1.0 / par.inside.1;
    if (gap_in - edge).abs() < 1e-12 {
        res.check_le("inside_abs_slope", flat.abs(), par.flat_tol);
    } else {
        res.check_le("inside_slope", flat, par.flat_tol);
    }
    res.check_ge("outside_slope", grow, par.growth_min);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{lebesgue_norm, Grid, GridFunction};
    use crate::hermite::{synthesize, SpectralCoefficients};
    use crate::spectral::gaussian::shifted_gaussian_coefficients;
    use crate::spectral::{fractional_inverse, InverseRoute};

    #[test]
    fn unit_dilation_matches_the_spectral_route() {
        // λ = 1 in d = 1 against the spectral multiplier on a fine expansion
        let (i, o) = dilation_norms(1.0, 0.3, 1, 1.5, 4.0).unwrap();
        let kmax = 60;
        let c = SpectralCoefficients::from_separable(&[shifted_gaussian_coefficients(1.0, 0.0, kmax)], kmax);
        let grid = Grid::gauss_hermite(1, 80).unwrap();
        let out = synthesize(&fractional_inverse(&c, 0.3, InverseRoute::Spectral).unwrap(), &grid).unwrap();
        let want = lebesgue_norm(&out, 4.0).unwrap();
        assert!((o - want).abs() < 1e-8 * want, "{o} {want}");
        let f = GridFunction::from_real_fn(grid, |x| (-0.5 * x[0] * x[0]).exp());
        assert!((i - lebesgue_norm(&f, 1.5).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn bad_parameters() {
        let par = SmoothingParams {
            s: 2.0,
            ..Default::default()
        };
        assert!(smoothing_boundary(&par).is_err());
        let par = SmoothingParams {
            outside: (1.5, 3.0),
            ..Default::default()
        };
        assert!(critical_necessity(&par).is_err());
    }
}
