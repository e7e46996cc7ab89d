//! `‖Π_k‖_{p→q}` lower bounds across k, and the restricted weak type
//! variant `‖Π_k χ_E‖_{q,∞} / |E|^{1/p}` on indicator probes.

use std::sync::Arc;

use crate::error::{param, Result};
use crate::grid::{lebesgue_norm, Grid};
use crate::harness::experiments::{par_map, region_of};
use crate::harness::opnorm::opnorm_lower;
use crate::harness::probes::{Probe, ProbeFamily, ProbeKind};
use crate::harness::sweep::{spread, BoundEstimate, SweepResult, SweepRow};
use crate::hermite::synthesize;
use crate::lorentz::{lorentz_norm, LorentzExponent};
use crate::spectral::gaussian::gaussian_lp_norm;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionParams {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub ks: Vec<usize>,
    /// Gauss–Hermite nodes per axis.
    pub nodes: usize,
    /// Probes per family.
    pub probes: usize,
    pub steps: usize,
    pub seed: u64,
    /// Indicator probes, `|E|^{1/p}` in, weak `L^q` out.
    pub restricted_weak: bool,
    pub spread_max: f64,
}

impl Default for ProjectionParams {
    fn default() -> Self {
        Self {
            d: 3,
            p: 2.0,
            q: 6.0,
            ks: (1..=40).collect(),
            nodes: 64,
            probes: 10,
            steps: 0,
            seed: 1,
            restricted_weak: false,
            spread_max: 10.0,
        }
    }
}

impl ProjectionParams {
    /// The restricted weak type point `(3/4, 1/12)` in d = 3.
    pub fn restricted_weak_default() -> Self {
        Self {
            p: 4.0 / 3.0,
            q: 12.0,
            restricted_weak: true,
            probes: 30,
            ..Self::default()
        }
    }
}

fn families(par: &ProjectionParams, k: usize) -> Result<Vec<ProbeFamily>> {
    let seed = par.seed ^ ((k as u64) << 32);
    if par.restricted_weak {
        return Ok(vec![ProbeFamily::new(
            ProbeKind::Indicators {
                side: (0.1, 3.0),
                center: 1.0,
            },
            par.d,
            k,
            seed,
        )?]);
    }
    Ok(vec![
        ProbeFamily::new(ProbeKind::HermitePackets { level: k, center: 1.5 }, par.d, k, seed)?,
        ProbeFamily::new(ProbeKind::RandomBandlimited { levels: (k, k) }, par.d, k, seed + 1)?,
        ProbeFamily::new(
            ProbeKind::GaussianBumps {
                width: (0.3, 4.0),
                center: 1.0,
                modulation: 2.0,
            },
            par.d,
            k,
            seed + 2,
        )?,
    ])
}

fn norms(par: &ProjectionParams, grid: &Arc<Grid>, k: usize, probe: &Probe) -> Result<(f64, f64)> {
    let out = synthesize(&probe.coeffs.level_only(k), grid)?;
    if par.restricted_weak {
        let e = probe.measure.unwrap_or(0.0);
        let weak = lorentz_norm(&out, LorentzExponent::weak(par.q)?);
        return Ok((e.powf(1.0 / par.p), weak));
    }
    let out_norm = lebesgue_norm(&out, par.q)?;
    let in_norm = if probe.id.starts_with("gaussian-bumps") {
        // the full bump, not its truncation
        let a = probe.params[0];
        gaussian_lp_norm(a, par.p, par.d)
    } else if par.p == 2.0 {
        probe.coeffs.l2_norm()
    } else {
        lebesgue_norm(&out, par.p)?
    };
    Ok((in_norm, out_norm))
}

pub fn projection_sweep(par: &ProjectionParams) -> Result<SweepResult> {
    if par.ks.is_empty() {
        return param("projection sweep needs at least one level k");
    }
    let name = if par.restricted_weak {
        "projection-sweep-weak"
    } else {
        "projection-sweep"
    };
    let mut res = SweepResult::new(name, "k");
    let region = region_of(par.p, par.q, par.d);
    res.metric("region_admissible", region.map_or(0.0, |r| r.admissible() as u8 as f64));
    let grid = Grid::gauss_hermite(par.d, par.nodes)?;
    let per_k = par_map(&par.ks, |&k| {
        let mut rows = Vec::new();
        let mut best: Option<BoundEstimate> = None;
        for fam in families(par, k)? {
            let mut seen = Vec::new();
            let est = opnorm_lower(&fam, par.probes, par.steps, |probe| {
                let (i, o) = norms(par, &grid, k, probe)?;
                seen.push(BoundEstimate::new(probe.id.clone(), i, o));
                Ok((i, o))
            })?;
            rows.extend(seen.into_iter().filter(|e| e.input_norm > 0.0));
            best = Some(match best {
                None => est,
                Some(b) => b.max(est),
            });
        }
        Ok((k, rows, best.expect("at least one family")))
    })?;
    let mut bests = Vec::new();
    for (k, rows, best) in per_k {
        for r in &rows {
            res.push(SweepRow::from_estimate(k as f64, r, 1.0));
        }
        res.metric(&format!("best_ratio_k{k}"), best.ratio);
        bests.push(best.ratio);
    }
    let s = spread(&bests);
    res.metric("max_ratio", bests.iter().copied().fold(0.0, f64::max));
    res.metric("min_ratio", bests.iter().copied().fold(f64::INFINITY, f64::min));
    res.metric("spread", s);
    res.check_flag("all_finite", bests.iter().all(|r| r.is_finite() && *r > 0.0));
    res.check_le("spread", s, par.spread_max);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_level_zero() {
        // Π₀ f = ⟨f, Φ₀⟩Φ₀, so on L² → L^q the norm is ‖Φ₀‖_q
        let par = ProjectionParams {
            d: 1,
            ks: vec![0],
            nodes: 40,
            probes: 4,
            ..Default::default()
        };
        let res = projection_sweep(&par).unwrap();
        // Φ₀ = π^{−1/4} e^{−x²/2}, ‖e^{−x²/2}‖_6 = (2π/6)^{1/12}
        let phi0_q = std::f64::consts::PI.powf(-0.25) * (std::f64::consts::PI / 3.0).powf(1.0 / 12.0);
        let best = res.get("best_ratio_k0").unwrap();
        assert!((best - phi0_q).abs() < 1e-10, "{best} vs {phi0_q}");
    }

    #[test]
    fn small_sweep_runs() {
        let par = ProjectionParams {
            ks: vec![1, 2, 3],
            nodes: 12,
            probes: 3,
            ..Default::default()
        };
        let res = projection_sweep(&par).unwrap();
        assert_eq!(res.rows.len(), 27);
        assert!(res.passed());
        let weak = projection_sweep(&ProjectionParams {
            ks: vec![1, 2],
            nodes: 12,
            probes: 3,
            ..ProjectionParams::restricted_weak_default()
        })
        .unwrap();
        assert!(weak.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
    }
}
