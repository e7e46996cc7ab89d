//! `‖h‖_{L^s_t L^{q,b}} / ‖L_β h‖_{L^r_t L^{p,a}}` across β, where
//! `L_β = ∂_t − H + 2β + d`.
//!
//! Probes are separable, `h = c(t) P(x)` with `P` a Hermite packet on a level
//! next to β, so `L_β h = (c′ + 2(β − k)c) P`. The inverse pair `S_β`, `L_β`
//! and the two routes to the ratio are checked on full coefficient families.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::exponents::dist_to_naturals;
use crate::grid::{Grid, GridFunction, TimeGrid};
use crate::harness::experiments::par_map;
use crate::harness::probes::{ProbeFamily, ProbeKind};
use crate::harness::sweep::{spread, BoundEstimate, SweepResult, SweepRow};
use crate::hermite::{synthesize, SpectralCoefficients};
use crate::lorentz::{lorentz_norm, mixed_norm, mixed_norm_of, LorentzExponent};
use crate::spectral::spacetime::{heat_hermite_apply, spacetime_inverse, time_derivative, TimeFamily};

#[derive(Debug, Clone, PartialEq)]
pub struct SobolevParams {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub s: f64,
    pub betas: Vec<f64>,
    pub gap: f64,
    /// Packets per level.
    pub probes: usize,
    pub nodes: usize,
    /// Width of the Gaussian time profile.
    pub width: f64,
    pub time_window: f64,
    pub time_step: f64,
    pub seed: u64,
    pub spread_max: f64,
    pub residual_max: f64,
    pub route_max: f64,
}

impl Default for SobolevParams {
    fn default() -> Self {
        Self {
            d: 3,
            p: 6.0 / 5.0,
            q: 6.0,
            a: 2.0,
            b: 2.0,
            r: 2.0,
            s: 2.0,
            betas: (0..=20).map(|j| j as f64 + 0.5).collect(),
            gap: 0.5,
            probes: 3,
            nodes: 48,
            width: 2.5,
            time_window: 15.0,
            time_step: 0.005,
            seed: 1,
            spread_max: 10.0,
            residual_max: 1e-6,
            route_max: 1e-5,
        }
    }
}

fn bump(t: f64, c: f64, w: f64) -> f64 {
    (-(t - c) * (t - c) / (2.0 * w * w)).exp()
}

/// `‖c‖_{L^s} / ‖c′ + 2ρc‖_{L^r}` for the Gaussian profile, derivative by
/// finite differences.
pub fn profile_ratio(rho: f64, width: f64, window: f64, step: f64, r: f64, s: f64) -> Result<(f64, f64)> {
    let count = (2.0 * window / step).round() as usize + 1;
    let times = TimeGrid::new(-window, window, count)?;
    let c: Vec<Complex64> = times.times().iter().map(|&t| bump(t, 0.0, width).into()).collect();
    let dc = time_derivative(&c, times.step());
    let lc: Vec<f64> = dc.iter().zip(&c).map(|(d, v)| (d + v * (2.0 * rho)).norm()).collect();
    let abs: Vec<f64> = c.iter().map(|v| v.norm()).collect();
    Ok((mixed_norm_of(&times, &lc, r)?, mixed_norm_of(&times, &abs, s)?))
}

fn check_gap(betas: &[f64], gap: f64) -> Result<()> {
    for &beta in betas {
        let dist = dist_to_naturals(beta);
        if dist < gap {
            return Err(Error::GapViolation { dist, required: gap });
        }
    }
    Ok(())
}

/// Levels `⌊β⌋, ⌈β⌉` (or just 0 for β < 0).
fn neighbour_levels(beta: f64) -> Vec<usize> {
    if beta < 0.0 {
        return vec![0];
    }
    vec![beta.floor() as usize, beta.ceil() as usize]
}

/// `‖L_β S_β g − g‖ / ‖g‖` in the coefficient-time l² sense, for a
/// two-level g next to β.
pub fn inverse_pair_residual(beta: f64, d: usize) -> Result<f64> {
    let levels = neighbour_levels(beta);
    let kmax = *levels.iter().max().expect("non-empty");
    let times = TimeGrid::new(-12.0, 12.0, 1201)?;
    let g = TimeFamily::from_fn(times, |t| {
        let mut c = SpectralCoefficients::zeros(d, kmax);
        for (i, &k) in levels.iter().enumerate() {
            let profile = bump(t, 0.4 * i as f64, 1.5);
            for (n, v) in c.level_mut(k).iter_mut().enumerate() {
                *v = Complex64::new(1.0, 0.1 * n as f64) * profile / (1.0 + n as f64);
            }
        }
        c
    });
    let back = heat_hermite_apply(&spacetime_inverse(&g, beta)?, beta)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in back.slices().iter().zip(g.slices()) {
        for (u, v) in x.to_flat().iter().zip(y.to_flat()) {
            num += (u - v).norm_sqr();
            den += v.norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}

/// The ratio on a small multi-level instance, once through `L_β h` by
/// differentiation and once through `S_β g` with g known in closed form.
pub fn route_pair(par: &SobolevParams, beta: f64, kmax: usize, nodes: usize) -> Result<(f64, f64)> {
    let d = par.d;
    let grid = Grid::gauss_hermite(d, nodes)?;
    let times = TimeGrid::new(-12.0, 12.0, 2401)?;
    let weight = |k: usize, n: usize| Complex64::new(1.0 / (1.0 + k as f64), 0.2 * n as f64 - 0.1);
    let (w, shift) = (1.2, 0.3);
    let h = TimeFamily::from_fn(times.clone(), |t| {
        SpectralCoefficients::from_fn(d, kmax, |alpha| {
            let k = alpha.degree();
            weight(k, alpha.components()[0]) * bump(t, shift * k as f64, w)
        })
    });
    let g = TimeFamily::from_fn(times, |t| {
        SpectralCoefficients::from_fn(d, kmax, |alpha| {
            let k = alpha.degree();
            let c = shift * k as f64;
            let dc = -(t - c) / (w * w);
            weight(k, alpha.components()[0]) * bump(t, c, w) * (dc + 2.0 * (beta - k as f64))
        })
    });
    let ex = LorentzExponent::new(par.q, par.b)?;
    let ey = LorentzExponent::new(par.p, par.a)?;
    let on_grid = |f: &TimeFamily<SpectralCoefficients>| -> Result<TimeFamily<GridFunction>> { f.try_map(|c| synthesize(c, &grid)) };
    let lh = heat_hermite_apply(&h, beta)?;
    let a = mixed_norm(&on_grid(&h)?, par.s, ex)? / mixed_norm(&on_grid(&lh)?, par.r, ey)?;
    let sg = spacetime_inverse(&g, beta)?;
    let b = mixed_norm(&on_grid(&sg)?, par.s, ex)? / mixed_norm(&on_grid(&g)?, par.r, ey)?;
    Ok((a, b))
}

fn packet_norms(grid: &Arc<Grid>, coeffs: &SpectralCoefficients, ex: LorentzExponent, ey: LorentzExponent) -> Result<(f64, f64)> {
    let f = synthesize(coeffs, grid)?;
    Ok((lorentz_norm(&f, ey), lorentz_norm(&f, ex)))
}

pub fn sobolev_ratio(par: &SobolevParams) -> Result<SweepResult> {
    if par.betas.is_empty() || par.probes == 0 {
        return param("sobolev sweep needs β values and at least one probe");
    }
    check_gap(&par.betas, par.gap)?;
    let ex = LorentzExponent::new(par.q, par.b)?;
    let ey = LorentzExponent::new(par.p, par.a)?;
    let grid = Grid::gauss_hermite(par.d, par.nodes)?;
    let mut res = SweepResult::new("sobolev-ratio", "beta");

    let per_beta = par_map(&par.betas, |&beta| {
        let mut ests = Vec::new();
        for k in neighbour_levels(beta) {
            let rho = beta - k as f64;
            let (lc, c) = profile_ratio(rho, par.width, par.time_window, par.time_step, par.r, par.s)?;
            let fam = ProbeFamily::new(
                ProbeKind::HermitePackets { level: k, center: 1.0 },
                par.d,
                k,
                par.seed ^ ((k as u64) << 32),
            )?;
            for i in 0..par.probes {
                let probe = fam.generate(i)?;
                let (pin, pout) = packet_norms(&grid, &probe.coeffs, ex, ey)?;
                ests.push(BoundEstimate::new(format!("{}-k{k}", probe.id), lc * pin, c * pout));
            }
        }
        Ok(ests)
    })?;
    let mut bests = Vec::new();
    for (beta, ests) in par.betas.iter().zip(per_beta) {
        let mut best: Option<BoundEstimate> = None;
        for e in ests {
            res.push(SweepRow::from_estimate(*beta, &e, 1.0));
            best = Some(match best {
                None => e,
                Some(b) => b.max(e),
            });
        }
        bests.push(best.expect("at least one probe").ratio);
    }
    let s = spread(&bests);
    res.metric("max_ratio", bests.iter().copied().fold(0.0, f64::max));
    res.metric("min_ratio", bests.iter().copied().fold(f64::INFINITY, f64::min));
    res.metric("spread", s);
    res.check_le("spread", s, par.spread_max);

    // homogeneity on the first probe
    let k = neighbour_levels(par.betas[0])[0];
    let fam = ProbeFamily::new(ProbeKind::HermitePackets { level: k, center: 1.0 }, par.d, k, par.seed)?;
    let probe = fam.generate(0)?;
    let (i1, o1) = packet_norms(&grid, &probe.coeffs, ex, ey)?;
    let (i8, o8) = packet_norms(&grid, &probe.coeffs.scale(8.0.into()), ex, ey)?;
    res.check_flag("scale_invariant", o1 / i1 == o8 / i8);

    let residuals = par_map(&par.betas, |&beta| inverse_pair_residual(beta, par.d))?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    res.metric("inverse_pair_residual", worst);
    res.check_le("inverse_pair_residual", worst, par.residual_max);

    let shared: Vec<f64> = par.betas.iter().copied().filter(|&b| b < 3.0).collect();
    let routes = par_map(&shared, |&beta| {
        let (a, b) = route_pair(par, beta, 3, 16)?;
        Ok((a - b).abs() / a.abs().max(b.abs()))
    })?;
    if !routes.is_empty() {
        let worst = routes.iter().copied().fold(0.0, f64::max);
        res.metric("route_disagreement", worst);
        res.check_le("route_disagreement", worst, par.route_max);
    }
    Ok(res)
}
