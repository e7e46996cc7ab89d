//! `sup_t |ζ_n(t)|` across n, the σ-sum bound, and a non-monotone cutoff
//! recorded alongside.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{param, Result};
use crate::harness::experiments::par_map;
use crate::harness::sweep::{slope, SweepResult, SweepRow};
use crate::spectral::decomposition::{sigma_running_max, zeta_from_weights, CutoffPhi, ScalarFn};

#[derive(Debug, Clone)]
pub struct ZetaParams {
    pub g: ScalarFn,
    pub d: usize,
    pub ns: Vec<usize>,
    /// Samples of `t ∈ [0, π]`; `|ζ_n|` is even in t.
    pub t_samples: usize,
    pub control: CutoffPhi,
    pub sigma_kmax: usize,
    pub sigma_step: f64,
    pub slope_max: f64,
    pub sigma_range: (f64, f64),
}

impl Default for ZetaParams {
    fn default() -> Self {
        Self {
            g: ScalarFn::g_mu_tau(0.4, 0.3),
            d: 3,
            ns: (4..=12).map(|e| 1usize << e).collect(),
            t_samples: 10_001,
            control: CutoffPhi::NonMonotone { amplitude: 4.0 },
            sigma_kmax: 4096,
            sigma_step: 1e-4,
            slope_max: 0.02,
            sigma_range: (1.85, 1.86),
        }
    }
}

/// `sup_{t ∈ [0, π]} |ζ_n(t)|` on `samples` equispaced points.
pub fn zeta_sup(g: &ScalarFn, n: usize, d: usize, phi: CutoffPhi, samples: usize) -> f64 {
    let weights: Vec<Complex64> = (1..=n)
        .map(|k| g.eval(k as f64) * phi.eval(k as f64 / n as f64))
        .collect();
    (0..samples)
        .map(|i| {
            let t = PI * i as f64 / (samples - 1) as f64;
            zeta_from_weights(&weights, n, d, t).norm()
        })
        .fold(0.0, f64::max)
}

/// `sup_{0 < t ≤ π} max_{k ≤ kmax} |σ_k(t)|` on a grid of the given step.
pub fn sigma_sup(kmax: usize, step: f64) -> f64 {
    let count = (PI / step).floor() as usize;
    let ts: Vec<f64> = (1..=count).map(|i| i as f64 * step).collect();
    par_map(&ts, |&t| Ok(sigma_running_max(kmax, t)))
        .map(|v| v.into_iter().fold(0.0, f64::max))
        .unwrap_or(f64::NAN)
}

pub fn zeta_sweep(par: &ZetaParams) -> Result<SweepResult> {
    if par.ns.len() < 2 || par.ns.contains(&0) || par.t_samples < 2 {
        return param("zeta sweep needs at least two n >= 1 and two t samples");
    }
    let mut res = SweepResult::new("zeta-sweep", "n");
    let main = par_map(&par.ns, |&n| Ok(zeta_sup(&par.g, n, par.d, CutoffPhi::Monotone, par.t_samples)))?;
    let control = par_map(&par.ns, |&n| Ok(zeta_sup(&par.g, n, par.d, par.control, par.t_samples)))?;
    for ((&n, m), c) in par.ns.iter().zip(&main).zip(&control) {
        res.push(SweepRow::value(n as f64, "monotone-phi", *m));
        res.push(SweepRow::value(n as f64, "nonmonotone-phi", *c));
    }
    let logs: Vec<f64> = par.ns.iter().map(|&n| (n as f64).log2()).collect();
    let s = slope(&logs, &main);
    res.metric("max_sup", main.iter().copied().fold(0.0, f64::max));
    res.metric("slope", s);
    res.metric("control_slope", slope(&logs, &control));
    res.check_le("slope", s, par.slope_max);
    if par.sigma_kmax > 0 {
        let sig = sigma_sup(par.sigma_kmax, par.sigma_step);
        res.metric("sigma_sup", sig);
        res.check_within("sigma_sup", sig, par.sigma_range.0, par.sigma_range.1);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decomposition::zeta_n;

    #[test]
    fn zero_symbol_gives_zero() {
        let par = ZetaParams {
            g: ScalarFn::zero(),
            ns: vec![16, 32],
            t_samples: 101,
            sigma_kmax: 0,
            ..Default::default()
        };
        let res = zeta_sweep(&par).unwrap();
        assert!(res.rows.iter().all(|r| r.ratio == 0.0));
    }

    #[test]
    fn sup_uses_the_direct_sum() {
        let g = ScalarFn::g_mu_tau(0.4, 0.3);
        let n = 40;
        let direct = (0..201)
            .map(|i| zeta_n(&g, n, 3, CutoffPhi::Monotone, PI * i as f64 / 200.0).norm())
            .fold(0.0, f64::max);
        assert!((zeta_sup(&g, n, 3, CutoffPhi::Monotone, 201) - direct).abs() < 1e-13);
    }

    #[test]
    fn sigma_near_the_sine_integral() {
        // sup σ_k → Si(π) = 1.8519370...
        let s = sigma_sup(512, 1e-3);
        assert!(s > 1.84 && s < 1.86, "{s}");
    }
}
