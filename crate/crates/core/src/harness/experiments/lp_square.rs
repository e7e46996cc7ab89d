//! Two-sided comparison of `‖g‖` with the dyadic square function
//! `‖(Σ_j |η(2^{−j}|D_t|) g|²)^{1/2}‖` in `L^r_t L^{q,2}_x`, and the
//! normability bound `‖(Σ|h_j|²)^{1/2}‖_{q,2} ≤ C (Σ‖h_j‖²_{q,2})^{1/2}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::grid::{Grid, GridFunction, TimeGrid};
use crate::harness::experiments::par_map;
use crate::harness::sweep::{SweepResult, SweepRow};
use crate::lorentz::{lorentz_norm, mixed_norm, LorentzExponent};
use crate::spectral::littlewood_paley::{lp_time_decompose, DyadicBump};
use crate::spectral::spacetime::TimeFamily;

/// `Σ_m amp_m e^{2πiξ_m t} e^{−(x − c_m)²/2}` under the window `e^{−t²/(2w²)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketSum {
    pub window: f64,
    /// `(amp, ξ, c)` per term.
    pub terms: Vec<(Complex64, f64, f64)>,
}

impl WavePacketSum {
    pub fn sample(&self, times: &TimeGrid, grid: &Arc<Grid>) -> TimeFamily<GridFunction> {
        TimeFamily::from_fn(times.clone(), |t| {
            let win = (-t * t / (2.0 * self.window * self.window)).exp();
            GridFunction::from_fn(grid.clone(), |x| {
                self.terms
                    .iter()
                    .map(|&(a, xi, c)| a * Complex64::from_polar(win, 2.0 * PI * xi * t) * (-(x[0] - c).powi(2) / 2.0).exp())
                    .sum()
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSquareParams {
    pub r: f64,
    pub q: f64,
    pub time: (f64, f64, usize),
    pub window: f64,
    pub js: (i32, i32),
    pub freq_range: (f64, f64),
    pub terms: usize,
    pub trials: usize,
    pub nodes: usize,
    /// Pieces per trial of the normability check.
    pub pieces: usize,
    pub seed: u64,
    pub bounds: (f64, f64),
    pub normability_max: f64,
}

impl Default for LpSquareParams {
    fn default() -> Self {
        Self {
            r: 2.0,
            q: 3.0,
            time: (-40.0, 40.0, 4096),
            window: 4.0,
            js: (-4, 4),
            freq_range: (0.25, 6.0),
            terms: 3,
            trials: 20,
            nodes: 24,
            pieces: 8,
            seed: 1,
            bounds: (0.125, 8.0),
            normability_max: 8.0,
        }
    }
}

/// `(‖g‖, ‖S g‖)` with `S g` the dyadic square function.
pub fn square_function_norms(
    g: &TimeFamily<GridFunction>,
    eta: &DyadicBump,
    js: (i32, i32),
    r: f64,
    e: LorentzExponent,
) -> Result<(f64, f64)> {
    let pieces = lp_time_decompose(g, eta, js.0..=js.1)?;
    let grid = g.slices()[0].grid().clone();
    let slices = (0..g.times().len())
        .map(|i| {
            let vals: Vec<Complex64> = (0..grid.len())
                .map(|x| pieces.iter().map(|p| p.slices()[i].values()[x].norm_sqr()).sum::<f64>().sqrt().into())
                .collect();
            GridFunction::new(grid.clone(), vals)
        })
        .collect::<Result<_>>()?;
    let sq = TimeFamily::new(g.times().clone(), slices)?;
    Ok((mixed_norm(g, r, e)?, mixed_norm(&sq, r, e)?))
}

/// `‖(Σ|h_j|²)^{1/2}‖_{q,2} / (Σ‖h_j‖²_{q,2})^{1/2}`.
pub fn normability_ratio(hs: &[GridFunction], e: LorentzExponent) -> Result<f64> {
    let first = hs.first().ok_or_else(|| Error::Parameter("no pieces".into()))?;
    let vals: Vec<Complex64> = (0..first.values().len())
        .map(|x| hs.iter().map(|h| h.values()[x].norm_sqr()).sum::<f64>().sqrt().into())
        .collect();
    let lhs = lorentz_norm(&GridFunction::new(first.grid().clone(), vals)?, e);
    let rhs = hs.iter().map(|h| lorentz_norm(h, e).powi(2)).sum::<f64>().sqrt();
    Ok(lhs / rhs)
}

fn random_packet(rng: &mut ChaCha8Rng, par: &LpSquareParams) -> WavePacketSum {
    let terms = (0..par.terms)
        .map(|_| {
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (amp, rng.gen_range(par.freq_range.0..par.freq_range.1), rng.gen_range(-2.0..2.0))
        })
        .collect();
    WavePacketSum {
        window: par.window,
        terms,
    }
}

pub fn lp_square(par: &LpSquareParams) -> Result<SweepResult> {
    if par.trials == 0 || par.terms == 0 || par.pieces == 0 {
        return param("lp square experiment needs trials, terms and pieces");
    }
    if !(par.q >= 2.0) {
        return param(format!("normability check needs q >= 2, got {}", par.q));
    }
    let e = LorentzExponent::new(par.q, 2.0)?;
    let times = TimeGrid::new(par.time.0, par.time.1, par.time.2)?;
    let grid = Grid::gauss_hermite(1, par.nodes)?;
    let eta = DyadicBump::default();
    let trials: Vec<usize> = (0..par.trials).collect();
    let out = par_map(&trials, |&i| {
        let mut rng = ChaCha8Rng::seed_from_u64(par.seed);
        rng.set_stream(i as u64);
        let g = random_packet(&mut rng, par).sample(&times, &grid);
        let (a, b) = square_function_norms(&g, &eta, par.js, par.r, e)?;
        if a == 0.0 {
            return Err(Error::DegenerateProbe);
        }
        let hs: Vec<GridFunction> = (0..par.pieces)
            .map(|_| {
                GridFunction::from_fn(grid.clone(), |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            })
            .collect();
        Ok((a, b, normability_ratio(&hs, e)?))
    })?;
    let mut res = SweepResult::new("lp-square", "trial");
    let (mut lo, mut hi, mut norm_max) = (f64::INFINITY, 0.0f64, 0.0f64);
    for (i, &(a, b, n)) in out.iter().enumerate() {
        let mut row = SweepRow::value(i as f64, "square-function", b / a);
        row.input_norm = a;
        row.output_norm = b;
        res.push(row);
        res.push(SweepRow::value(i as f64, "normability", n));
        lo = lo.min(b / a);
        hi = hi.max(b / a);
        norm_max = norm_max.max(n);
    }
    // ‖Sg‖ ≤ C₁‖g‖ and ‖g‖ ≤ C₂‖Sg‖
    res.metric("upper_constant", hi);
    res.metric("lower_constant", 1.0 / lo);
    res.metric("normability_constant", norm_max);
    res.check_within("upper_constant", hi, par.bounds.0, par.bounds.1);
    res.check_within("lower_constant", 1.0 / lo, par.bounds.0, par.bounds.1);
    res.check_le("normability_constant", norm_max, par.normability_max);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LpSquareParams {
        LpSquareParams {
            time: (-40.0, 40.0, 2048),
            trials: 3,
            nodes: 12,
            ..Default::default()
        }
    }

    #[test]
    fn single_frequency() {
        let par = small();
        let times = TimeGrid::new(par.time.0, par.time.1, par.time.2).unwrap();
        let grid = Grid::gauss_hermite(1, 12).unwrap();
        let g = WavePacketSum {
            window: 4.0,
            terms: vec![(Complex64::new(1.0, 0.0), 1.5, 0.3)],
        }
        .sample(&times, &grid);
        let e = LorentzExponent::new(3.0, 2.0).unwrap();
        let (a, b) = square_function_norms(&g, &DyadicBump::default(), (-4, 4), 2.0, e).unwrap();
        assert!(b / a > 0.5 && b / a < 2.0, "{}", b / a);
    }

    #[test]
    fn normability_of_identical_pieces() {
        // n copies of h: (Σ|h|²)^{1/2} = √n|h|, so the ratio is exactly 1
        let grid = Grid::gauss_hermite(1, 10).unwrap();
        let h = GridFunction::from_real_fn(grid, |x| (-x[0] * x[0]).exp());
        let e = LorentzExponent::new(3.0, 2.0).unwrap();
        let r = normability_ratio(&vec![h; 4], e).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_and_wraparound() {
        let par = LpSquareParams {
            terms: 1,
            freq_range: (1.0, 1.0 + 1e-9),
            ..small()
        };
        assert!(lp_square(&par).is_ok());
        let wide = LpSquareParams {
            window: 30.0,
            ..small()
        };
        assert!(matches!(lp_square(&wide), Err(Error::Wraparound(_))));
        let times = TimeGrid::new(-40.0, 40.0, 512).unwrap();
        let grid = Grid::gauss_hermite(1, 4).unwrap();
        let zero = WavePacketSum { window: 4.0, terms: vec![] }.sample(&times, &grid);
        let e = LorentzExponent::new(3.0, 2.0).unwrap();
        let (a, b) = square_function_norms(&zero, &DyadicBump::default(), (-4, 4), 2.0, e).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
    }

    #[test]
    fn random_trials_within_bounds() {
        let res = lp_square(&small()).unwrap();
        assert!(res.passed(), "{:?}", res.checks);
    }
}
