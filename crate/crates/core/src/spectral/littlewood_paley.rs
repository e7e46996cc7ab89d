//! Dyadic decomposition in time frequency, `η(2^{−j}|D_t|)`, on uniform
//! samples via the FFT. Frequencies are in cycles per unit time, matching
//! the transform `∫ g(t) e^{−2πitτ} dt`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{param, Error, Result};
use crate::spectral::decomposition::smooth_step;
use crate::spectral::spacetime::{Linear, TimeFamily};

/// `sin²((π/2) S(x + 2))`, rising from 0 at `x = −2` to 1 at `x = −1`.
fn rise(x: f64) -> f64 {
    (0.5 * PI * smooth_step(x + 2.0)).sin().powi(2)
}

/// `ρ(ξ)` with `Σ_j ρ(2^{−j}ξ) = 1` for `ξ > 0`, supported in `[1/4, 1]`.
pub fn dyadic_psi(xi: f64) -> f64 {
    if xi <= 0.0 {
        return 0.0;
    }
    let x = xi.log2();
    rise(x) - rise(x - 1.0)
}

/// Smooth bump on `[1/4, 1]` with `Σ_j η(2^{−j}ξ)² = 1`.
#[derive(Clone)]
pub struct DyadicBump(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl fmt::Debug for DyadicBump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DyadicBump")
    }
}

impl Default for DyadicBump {
    fn default() -> Self {
        Self(Arc::new(|xi| dyadic_psi(xi).max(0.0).sqrt()))
    }
}

impl DyadicBump {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.0)(xi.abs())
    }

    /// `Σ_{j∈J} η(2^{−j}ξ)²`.
    pub fn partition_sum(&self, xi: f64, js: RangeInclusive<i32>) -> f64 {
        js.map(|j| self.eval(xi * 2f64.powi(-j)).powi(2)).sum()
    }
}

/// Frequencies `|ξ|` on which the pieces over `js` cover every scale:
/// `[2^{j_min − 1}, 2^{j_max − 1}]`.
pub fn resolved_band(js: &RangeInclusive<i32>) -> (f64, f64) {
    (2f64.powi(js.start() - 1), 2f64.powi(js.end() - 1))
}

/// FFT frequencies (cycles per unit) for `n` samples spaced `h`.
pub fn fft_frequencies(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let m = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            m / (n as f64 * h)
        })
        .collect()
}

fn filter_series(
    series: &[Vec<Complex64>],
    filters: &[Vec<f64>],
    planner: &mut FftPlanner<f64>,
) -> Vec<Vec<Vec<Complex64>>> {
    let n = series.first().map_or(0, Vec::len);
    let padded = filters.first().map_or(0, Vec::len);
    let fwd = planner.plan_fft_forward(padded);
    let inv = planner.plan_fft_inverse(padded);
    let norm = 1.0 / padded as f64;
    let mut out = vec![Vec::with_capacity(series.len()); filters.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); padded];
    for s in series {
        buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        buf[..n].copy_from_slice(s);
        fwd.process(&mut buf);
        for (o, f) in out.iter_mut().zip(filters) {
            let mut piece: Vec<Complex64> = buf.iter().zip(f).map(|(v, w)| v * (w * norm)).collect();
            inv.process(&mut piece);
            piece.truncate(n);
            o.push(piece);
        }
    }
    out
}

/// The pieces `η(2^{−j}|D_t|) g`, `j ∈ js`. The samples are zero-padded to
/// twice their length before transforming.
pub fn lp_time_decompose<T: Linear>(
    g: &TimeFamily<T>,
    eta: &DyadicBump,
    js: RangeInclusive<i32>,
) -> Result<Vec<TimeFamily<T>>> {
    multiplier_pieces(g, js.clone(), |j, xi| eta.eval(xi * 2f64.powi(-j)), Some((eta, js)))
}

/// `Σ_j η(2^{−j}|D_t|) piece_j`; equals `g` on the resolved band.
pub fn lp_reconstruct<T: Linear>(
    pieces: &[TimeFamily<T>],
    eta: &DyadicBump,
    js: RangeInclusive<i32>,
) -> Result<TimeFamily<T>> {
    if pieces.len() != js.clone().count() {
        return Err(Error::Shape(format!(
            "{} pieces for {} scales",
            pieces.len(),
            js.clone().count()
        )));
    }
    let mut total: Option<Vec<Vec<Complex64>>> = None;
    for (p, j) in pieces.iter().zip(js) {
        // pieces have smooth tails, so no endpoint check here
        let again = apply_multipliers(p, j..=j, |j, xi| eta.eval(xi * 2f64.powi(-j)))?;
        let s = again[0].to_series();
        match total.as_mut() {
            None => total = Some(s),
            Some(t) => {
                for (a, b) in t.iter_mut().zip(&s) {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                }
            }
        }
    }
    match (total, pieces.first()) {
        (Some(t), Some(first)) => first.from_series(&t),
        _ => param("no pieces to reconstruct"),
    }
}

/// Pieces `m_j(|D_t|) g` for an arbitrary family of frequency multipliers.
pub fn multiplier_pieces<T: Linear, M: Fn(i32, f64) -> f64>(
    g: &TimeFamily<T>,
    js: RangeInclusive<i32>,
    m: M,
    check: Option<(&DyadicBump, RangeInclusive<i32>)>,
) -> Result<Vec<TimeFamily<T>>> {
    let ratio = g.endpoint_ratio();
    if ratio > 1e-8 {
        return Err(Error::Wraparound(format!(
            "samples at the interval ends are not negligible (relative size {ratio:e})"
        )));
    }
    let n = g.times().len();
    let h = g.times().step();
    let padded = 2 * n;
    let freqs = fft_frequencies(padded, h);
    if let Some((eta, js)) = check {
        let (lo, hi) = resolved_band(&js);
        let mut worst: (f64, f64) = (f64::INFINITY, 0.0);
        for &xi in &freqs {
            let a = xi.abs();
            if a >= lo && a <= hi {
                let s = eta.partition_sum(a, js.clone());
                worst = (worst.0.min(s), worst.1.max(s));
            }
        }
        if worst.1 > 0.0 && (worst.0 < 0.5 || worst.1 > 2.0) {
            return param(format!(
                "dyadic bump fails the partition check: sum in [{}, {}]",
                worst.0, worst.1
            ));
        }
    }
    apply_multipliers(g, js, m)
}

fn apply_multipliers<T: Linear, M: Fn(i32, f64) -> f64>(
    g: &TimeFamily<T>,
    js: RangeInclusive<i32>,
    m: M,
) -> Result<Vec<TimeFamily<T>>> {
    let n = g.times().len();
    let freqs = fft_frequencies(2 * n, g.times().step());
    let filters: Vec<Vec<f64>> = js
        .map(|j| freqs.iter().map(|&xi| m(j, xi.abs())).collect())
        .collect();
    let mut planner = FftPlanner::new();
    let out = filter_series(&g.to_series(), &filters, &mut planner);
    out.iter().map(|s| g.from_series(s)).collect()
}

/// Remove all frequencies outside `[lo, hi]` in `|ξ|`.
pub fn band_limit<T: Linear>(g: &TimeFamily<T>, lo: f64, hi: f64) -> Result<TimeFamily<T>> {
    let mut v = multiplier_pieces(g, 0..=0, |_, xi| if xi >= lo && xi <= hi { 1.0 } else { 0.0 }, None)?;
    Ok(v.remove(0))
}
