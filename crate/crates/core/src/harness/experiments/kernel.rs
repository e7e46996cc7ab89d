//! Decay of the time kernel of `S_β`.
//!
//! On level k the kernel acts as `κ_{β−k}(t)`, so a basis function `Φ_α`
//! sees `|κ_{β−|α|}(t)|` exactly. The Hörmander form uses the time
//! derivative `−2(β − k)κ_{β−k}(t)`; the dyadic pieces are compared with the
//! envelope `2^j(1 + 2^j|t|)^{−2}`.

use crate::error::{param, Error, Result};
use crate::exponents::dist_to_naturals;
use crate::harness::experiments::par_map;
use crate::harness::experiments::resolvent::hermite_lp_1d;
use crate::harness::sweep::{loglog_slope, SweepResult, SweepRow};
use crate::spectral::littlewood_paley::dyadic_psi;
use crate::spectral::spacetime::{mode_kernel_eval, mode_kernel_piece};

#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    pub beta: f64,
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub t_range: (f64, f64),
    pub t_samples: usize,
    /// Levels probed: `0..=kmax`.
    pub kmax: usize,
    pub js: (i32, i32),
    pub gap: f64,
    pub slope_range: (f64, f64),
    pub envelope_max: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            beta: 3.5,
            d: 3,
            p: 6.0 / 5.0,
            q: 6.0,
            t_range: (1.0, 50.0),
            t_samples: 40,
            kmax: 16,
            js: (0, 8),
            gap: 0.5,
            slope_range: (-2.3, -1.7),
            envelope_max: 10.0,
        }
    }
}

fn log_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// `‖Φ_α‖_q / ‖Φ_α‖_p` for `α = (k, 0, …, 0)`.
fn mode_ratio(k: usize, d: usize, p: f64, q: f64) -> f64 {
    (hermite_lp_1d(0, q) / hermite_lp_1d(0, p)).powi(d as i32 - 1) * hermite_lp_1d(k, q) / hermite_lp_1d(k, p)
}

/// `max_k |2(β − k) κ_{β−k}(t)| ‖Φ_k‖_q / ‖Φ_k‖_p`.
pub fn hormander_probe(beta: f64, t: f64, ratios: &[f64]) -> Result<f64> {
    let mut best = 0.0f64;
    for (k, r) in ratios.iter().enumerate() {
        let a = beta - k as f64;
        best = best.max((2.0 * a * mode_kernel_eval(a, t)?).abs() * r);
    }
    Ok(best)
}

/// `sup_t max_k |K_{β−k, j}(t)| / (2^j (1 + 2^j|t|)^{−2})` on both signs of t.
pub fn envelope_constant(beta: f64, j: i32, kmax: usize) -> f64 {
    let scale = 2f64.powi(j);
    let mut ts = vec![0.0];
    for u in log_samples(1e-2, 1e3, 61) {
        let t = u / scale;
        if t <= 50.0 {
            ts.push(t);
            ts.push(-t);
        }
    }
    let mut worst = 0.0f64;
    for &t in &ts {
        let env = scale / (1.0 + scale * t.abs()).powi(2);
        for k in 0..=kmax {
            let v = mode_kernel_piece(beta - k as f64, j, t, dyadic_psi).abs();
            worst = worst.max(v / env);
        }
    }
    worst
}

pub fn kernel_decay(par: &KernelParams) -> Result<SweepResult> {
    let dist = dist_to_naturals(par.beta);
    if dist < par.gap {
        return Err(Error::GapViolation { dist, required: par.gap });
    }
    if !(par.t_range.0 > 0.0 && par.t_range.1 > par.t_range.0) || par.t_samples < 2 {
        return param("kernel decay needs 0 < t_min < t_max and two samples");
    }
    if par.js.0 > par.js.1 {
        return param("empty range of dyadic scales");
    }
    let mut res = SweepResult::new("kernel-decay", "t");
    let ratios: Vec<f64> = (0..=par.kmax).map(|k| mode_ratio(k, par.d, par.p, par.q)).collect();
    let ts = log_samples(par.t_range.0, par.t_range.1, par.t_samples);
    let mut vals = Vec::with_capacity(ts.len());
    for &t in &ts {
        let v = hormander_probe(par.beta, t, &ratios)?;
        res.push(SweepRow::value(t, "hormander-modes", v));
        vals.push(v);
    }
    let slope = loglog_slope(&ts, &vals);
    res.metric("hormander_slope", slope);
    res.check_within("hormander_slope", slope, par.slope_range.0, par.slope_range.1);

    let js: Vec<i32> = (par.js.0..=par.js.1).collect();
    let consts = par_map(&js, |&j| Ok(envelope_constant(par.beta, j, par.kmax)))?;
    for (j, c) in js.iter().zip(&consts) {
        res.metric(&format!("envelope_j{j}"), *c);
    }
    let worst = consts.iter().copied().fold(0.0, f64::max);
    res.metric("envelope_max", worst);
    res.check_le("envelope", worst, par.envelope_max);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{lebesgue_norm, Grid, TimeGrid};
    use crate::hermite::{synthesize, MultiIndex, SpectralCoefficients};
    use crate::spectral::spacetime::{spacetime_inverse, TimeFamily};

    #[test]
    fn single_mode_sees_the_scalar_kernel() {
        // S_β applied to a narrow pulse on one mode reproduces κ_{β−|α|}
        let beta = 3.5;
        let alpha = MultiIndex::new(vec![2, 0]);
        let basis = SpectralCoefficients::basis(&alpha, 2).unwrap();
        let times = TimeGrid::new(-3.0, 6.0, 9001).unwrap();
        let w: f64 = 0.02;
        let norm = 1.0 / (w * (2.0 * std::f64::consts::PI).sqrt());
        let g = TimeFamily::from_fn(times.clone(), |t| basis.scale((norm * (-t * t / (2.0 * w * w)).exp()).into()));
        let out = spacetime_inverse(&g, beta).unwrap();
        let grid = Grid::gauss_hermite(2, 12).unwrap();
        for i in [4000usize, 5000, 7000] {
            let t = times.time(i);
            let l2 = lebesgue_norm(&synthesize(&out.slices()[i], &grid).unwrap(), 2.0).unwrap();
            // the pulse smears the kernel by e^{2a²w²}
            let want = mode_kernel_eval(1.5, t).unwrap().abs() * (2.0 * 1.5f64.powi(2) * w * w).exp();
            assert!((l2 - want).abs() < 1e-6 * want, "t {t}: {l2} {want}");
        }
    }

    #[test]
    fn causal_when_all_rates_positive() {
        // β − k > 0 for every k ≤ 3 at β = 3.5
        let ratios = vec![1.0; 4];
        for t in [-0.1, -1.0, -7.0] {
            assert_eq!(hormander_probe(3.5, t, &ratios).unwrap(), 0.0);
        }
        assert!(hormander_probe(3.5, 0.5, &ratios).unwrap() > 0.0);
    }

    #[test]
    fn envelope_at_the_first_scales() {
        for j in 0..3 {
            let c = envelope_constant(3.5, j, 10);
            assert!(c.is_finite() && c < 10.0, "j {j}: {c}");
        }
    }

    #[test]
    fn gap_is_enforced() {
        let par = KernelParams {
            beta: 3.0,
            ..Default::default()
        };
        assert!(kernel_decay(&par).is_err());
    }
}
