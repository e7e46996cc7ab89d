//! `‖(H − z)^{−m}‖_{p→q}` across spectral parameters z, divided by the
//! predicted growth `(1 + |Im z|)^{γ−m}`.
//!
//! Radial Gaussians go through the closed-form period integral, with the
//! width optimized by golden section. Eigenfunction probes `Φ_α` use the
//! scalar action `(2|α| + d − z)^{−m}`.

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::harness::experiments::{par_map, region_of};
use crate::harness::opnorm::golden_max;
use crate::harness::sweep::{spread, BoundEstimate, SweepResult, SweepRow};
use crate::hermite::hermite_values;
use crate::quadrature::composite_legendre;
use crate::radial::RadialGrid;
use crate::spectral::gaussian::{gaussian_lp_norm, gaussian_resolvent, PeriodQuadrature};
use crate::spectral::spectral_distance;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventParams {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub zs: Vec<Complex64>,
    pub m: u32,
    pub gap: f64,
    /// Golden-section evaluations over `ln a`.
    pub width_evals: usize,
    pub gaussians: bool,
    pub eigenfunctions: bool,
    pub spread_max: f64,
}

impl Default for ResolventParams {
    fn default() -> Self {
        let mut zs = Vec::new();
        for tau in [0.0, 5.0, 25.0] {
            for j in 0..=30 {
                zs.push(Complex64::new((2 * j + 4) as f64, 2.0 * tau));
            }
        }
        Self {
            d: 3,
            p: 6.0 / 5.0,
            q: 6.0,
            zs,
            m: 1,
            gap: 0.5,
            width_evals: 10,
            gaussians: true,
            eigenfunctions: true,
            spread_max: 10.0,
        }
    }
}

/// `‖h_k‖_p` on the line.
pub fn hermite_lp_1d(k: usize, p: f64) -> f64 {
    let r = (2.0 * k as f64 + 1.0).sqrt() + 9.0;
    let panels = (4.0 * r * (k as f64 + 1.0).sqrt()).ceil() as usize;
    let rule = composite_legendre(-r, r, panels, 12);
    let mut h = vec![0.0; k + 1];
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            hermite_values(k, x, &mut h);
            w * h[k].abs().powf(p)
        })
        .sum();
    s.powf(1.0 / p)
}

/// `(‖g_a‖_p, ‖(H − z)^{−1} g_a‖_q)` for the radial Gaussian `e^{−a|x|²/2}`.
pub fn gaussian_resolvent_norms(a: f64, z: Complex64, d: usize, p: f64, q: f64) -> Result<(f64, f64)> {
    let scale = 1.0 / a.max(z.norm()).max(1.0).sqrt();
    let r_max = (z.norm().sqrt() + 8.0).max(14.0 / a.sqrt());
    let grid = RadialGrid::graded(d, 1e-3 * scale, r_max, 1.3, 0.5 * scale, 8)?;
    let vals = gaussian_resolvent(a, z, d, &grid.radii_squared(), PeriodQuadrature::for_problem(a, z))?;
    let abs: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    Ok((gaussian_lp_norm(a, p, d), grid.lebesgue_norm(&abs, q)))
}

pub fn resolvent_sweep(par: &ResolventParams) -> Result<SweepResult> {
    if par.zs.is_empty() || par.m == 0 {
        return param("resolvent sweep needs spectral parameters and m >= 1");
    }
    if par.gaussians && par.m != 1 {
        return param("gaussian probes support m = 1 only; use eigenfunction probes");
    }
    for z in &par.zs {
        let dist = spectral_distance(*z, par.d);
        if dist < par.gap {
            return Err(Error::GapViolation {
                dist,
                required: par.gap,
            });
        }
    }
    let d = par.d;
    let gamma = d as f64 / 2.0 * (1.0 / par.p - 1.0 / par.q);
    let mut res = SweepResult::new("resolvent-sweep", "z");
    res.metric("region_admissible", region_of(par.p, par.q, d).map_or(0.0, |r| r.admissible() as u8 as f64));
    res.metric("gamma", gamma);
    // ‖Φ_α‖_q/‖Φ_α‖_p for α = (k, 0, …, 0)
    let eigen_ratio = |k: usize| {
        let h0 = (hermite_lp_1d(0, par.q) / hermite_lp_1d(0, par.p)).powi(d as i32 - 1);
        h0 * hermite_lp_1d(k, par.q) / hermite_lp_1d(k, par.p)
    };
    let per_z = par_map(&par.zs, |&z| {
        let mut ests = Vec::new();
        if par.gaussians {
            let hi = (4.0 * z.norm().max(1.0)).ln();
            let lo = (0.05f64).ln();
            let mut err = None;
            let (la, _) = golden_max(lo, hi, par.width_evals, |la| match gaussian_resolvent_norms(la.exp(), z, d, par.p, par.q) {
                Ok((i, o)) => o / i,
                Err(e) => {
                    err = Some(e);
                    f64::NEG_INFINITY
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let (i, o) = gaussian_resolvent_norms(la.exp(), z, d, par.p, par.q)?;
            ests.push(BoundEstimate::new(format!("gaussian-a{}", crate::harness::fmt_num(la.exp())), i, o));
        }
        if par.eigenfunctions {
            let k = ((z.re - d as f64) / 2.0).round().max(0.0) as usize;
            let factor = (Complex64::new((2 * k + d) as f64, 0.0) - z).norm().powi(-(par.m as i32));
            ests.push(BoundEstimate::new(format!("eigen-k{k}"), 1.0, factor * eigen_ratio(k)));
        }
        Ok(ests)
    })?;
    let mut normalized = Vec::new();
    for (z, ests) in par.zs.iter().zip(per_z) {
        let norm = (1.0 + z.im.abs()).powf(gamma - par.m as f64);
        let mut best: Option<BoundEstimate> = None;
        for e in ests {
            res.push(SweepRow::from_estimate(*z, &e, norm));
            best = Some(match best {
                None => e,
                Some(b) => b.max(e),
            });
        }
        normalized.push(best.expect("at least one probe kind").ratio / norm);
    }
    let s = spread(&normalized);
    res.metric("max_normalized", normalized.iter().copied().fold(0.0, f64::max));
    res.metric("min_normalized", normalized.iter().copied().fold(f64::INFINITY, f64::min));
    res.metric("spread", s);
    res.check_le("spread", s, par.spread_max);
    Ok(res)
}

/// Log-log slope of eigenfunction ratios against `|Im z|` at fixed `Re z`.
pub fn eigen_growth_slope(d: usize, k: usize, m: u32, ims: &[f64]) -> f64 {
    let re = (2 * k + d) as f64 + 1.0;
    let ys: Vec<f64> = ims
        .iter()
        .map(|&t| (Complex64::new((2 * k + d) as f64, 0.0) - Complex64::new(re, t)).norm().powi(-(m as i32)))
        .collect();
    let xs: Vec<f64> = ims.iter().map(|t| 1.0 + t).collect();
    crate::harness::loglog_slope(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_1d;
    use crate::quadrature::adaptive_integrate;

    #[test]
    fn hermite_norms() {
        // ‖h_0‖_p^p = π^{−p/4} √(2π/p)
        for p in [1.2, 2.0, 6.0] {
            let want = (std::f64::consts::PI.powf(-p / 4.0) * (2.0 * std::f64::consts::PI / p).sqrt()).powf(1.0 / p);
            assert!((hermite_lp_1d(0, p) - want).abs() < 1e-12);
        }
        assert!((hermite_lp_1d(17, 2.0) - 1.0).abs() < 1e-12);
        let want = adaptive_integrate(|x| hermite_1d(5, x).abs().powf(6.0), -15.0, 15.0, 1e-14).powf(1.0 / 6.0);
        assert!((hermite_lp_1d(5, 6.0) - want).abs() < 1e-10);
    }

    #[test]
    fn eigenfunction_blowup_is_exact() {
        for eps in [1e-1, 1e-2] {
            let z = Complex64::new(2.0 * 4.0 + 3.0 - eps, 0.0);
            let par = ResolventParams {
                zs: vec![z],
                gap: 1e-3,
                gaussians: false,
                m: 2,
                ..Default::default()
            };
            let res = resolvent_sweep(&par).unwrap();
            let row = &res.rows[0];
            let base = {
                let h0 = (hermite_lp_1d(0, 6.0) / hermite_lp_1d(0, 1.2)).powi(2);
                h0 * hermite_lp_1d(4, 6.0) / hermite_lp_1d(4, 1.2)
            };
            assert!((row.ratio / base - eps.powi(-2)).abs() < 1e-9 * eps.powi(-2));
        }
    }

    #[test]
    fn gap_is_enforced() {
        let par = ResolventParams {
            zs: vec![Complex64::new(5.1, 0.0)],
            ..Default::default()
        };
        assert!(matches!(resolvent_sweep(&par), Err(Error::GapViolation { .. })));
    }

    #[test]
    fn eigen_slope_is_minus_m() {
        let s = eigen_growth_slope(3, 2, 2, &[100.0, 1000.0, 10000.0]);
        assert!((s + 2.0).abs() < 0.1, "{s}");
    }

    #[test]
    fn gaussian_norms_track_the_spectral_route() {
        use crate::grid::{lebesgue_norm, Grid, GridFunction};
        use crate::hermite::synthesize;
        use crate::spectral::resolvent;
        use crate::spectral::gaussian::shifted_gaussian_coefficients;
        use crate::hermite::SpectralCoefficients;
        let (a, z) = (1.5, Complex64::new(6.0, 2.0));
        let (i, o) = gaussian_resolvent_norms(a, z, 1, 1.2, 6.0).unwrap();
        let kmax = 80;
        let c = SpectralCoefficients::from_separable(&[shifted_gaussian_coefficients(a, 0.0, kmax)], kmax);
        let grid = Grid::gauss_hermite(1, 100).unwrap();
        let out = synthesize(&resolvent(&c, z, 1).unwrap(), &grid).unwrap();
        let want = lebesgue_norm(&out, 6.0).unwrap();
        assert!((o - want).abs() < 1e-6 * want, "{o} {want}");
        let g = GridFunction::from_real_fn(grid, |x| (-0.5 * a * x[0] * x[0]).exp());
        assert!((i - lebesgue_norm(&g, 1.2).unwrap()).abs() < 1e-6);
    }
}
