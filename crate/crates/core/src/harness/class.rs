//! Numerical membership test for the multiplier class: size on the
//! integers, two summability conditions, and derivative decay away from 0.

use crate::error::{param, Error, Result};
use crate::spectral::decomposition::ScalarFn;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassRanges {
    /// Integers `|n| ≤ n_max` for the size condition.
    pub n_max: i64,
    /// Partial sums run to `sum_max`; the tail `S(N) − S(N/2)` is monitored.
    pub sum_max: u64,
    /// `t` sampled log-uniformly on `t₀ < |t| ≤ t_max`.
    pub t_max: f64,
    pub t_samples: usize,
    /// Relative tail above which a partial sum counts as divergent.
    pub tail_tol: f64,
    /// Finite-difference step for derivatives.
    pub fd_step: f64,
}

impl Default for ClassRanges {
    fn default() -> Self {
        Self {
            n_max: 1 << 12,
            sum_max: 1 << 16,
            t_max: 1e3,
            t_samples: 4000,
            tail_tol: 1e-2,
            fd_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub sum: f64,
    pub tail: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierClassReport {
    pub bound: f64,
    pub t0: f64,
    /// `sup_{|n| ≤ N} |G(n)|`.
    pub size: f64,
    pub even_sum: SeriesReport,
    pub variation: SeriesReport,
    /// `sup |G^{(l)}(t)| (1 + |t|)^{l+1}` for `l = 0, 1, …`.
    pub decay: Vec<f64>,
    pub pass: [bool; 4],
}

impl MultiplierClassReport {
    pub fn passed(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }

    /// Observed constants for the four conditions, `inf` for divergence.
    pub fn candidates(&self) -> [f64; 4] {
        let series = |s: &SeriesReport| if s.converged { s.sum } else { f64::INFINITY };
        [
            self.size,
            series(&self.even_sum),
            series(&self.variation),
            self.decay.iter().copied().fold(0.0, f64::max),
        ]
    }
}

fn series<F: FnMut(u64) -> f64>(n: u64, tol: f64, mut term: F) -> SeriesReport {
    let mut sum = 0.0;
    let mut half = 0.0;
    for k in 1..=n {
        let v = term(k);
        sum += v;
        if k == n / 2 {
            half = sum;
        }
    }
    let tail = sum - half;
    SeriesReport {
        sum,
        tail,
        converged: sum.is_finite() && tail <= tol * sum.max(1.0),
    }
}

/// `l`-th derivative by central differences of fourth order (`l ≤ 3`).
fn derivative(g: &ScalarFn, t: f64, l: usize, h: f64) -> num_complex::Complex64 {
    let f = |k: f64| g.eval(t + k * h);
    match l {
        0 => f(0.0),
        1 => (f(-2.0) - f(-1.0) * 8.0 + f(1.0) * 8.0 - f(2.0)) / (12.0 * h),
        2 => (-f(-2.0) + f(-1.0) * 16.0 - f(0.0) * 30.0 + f(1.0) * 16.0 - f(2.0)) / (12.0 * h * h),
        _ => (f(-3.0) - f(-2.0) * 8.0 + f(-1.0) * 13.0 - f(1.0) * 13.0 + f(2.0) * 8.0 - f(3.0))
            / (8.0 * h * h * h),
    }
}

/// Checks the size, summability, variation and decay conditions at
/// constant `bound` and threshold `t0`, with `0 ≤ l ≤ (d+2)/2`.
pub fn check_multiplier_class(
    g: &ScalarFn,
    bound: f64,
    t0: f64,
    d: usize,
    ranges: &ClassRanges,
) -> Result<MultiplierClassReport> {
    if !(t0 >= 0.0 && ranges.t_max > t0 && ranges.n_max > 0 && ranges.sum_max >= 2) {
        return param("class check needs t0 >= 0, t_max > t0 and nonempty ranges");
    }
    let lmax = (d + 2) / 2;
    if lmax > 3 {
        return param("derivatives above order 3 are not available");
    }
    let size = (-ranges.n_max..=ranges.n_max)
        .map(|n| g.eval(n as f64).norm())
        .fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) });
    let even_sum = series(ranges.sum_max, ranges.tail_tol, |k| {
        let k = k as f64;
        (g.eval(k) + g.eval(-k)).norm()
    });
    let variation = series(ranges.sum_max, ranges.tail_tol, |k| {
        let k = k as f64;
        (g.eval(k) * k - g.eval(k + 1.0) * (k + 1.0)).norm()
    });
    let mut decay = vec![0.0f64; lmax + 1];
    let (lo, hi) = ((t0 + 0.01 * (1.0 + t0)).ln(), ranges.t_max.ln());
    let h = ranges.fd_step;
    for i in 0..ranges.t_samples {
        let s = (lo + (hi - lo) * (i as f64 + 0.5) / ranges.t_samples as f64).exp();
        for t in [s, -s] {
            // stencil must stay inside |t| > t0
            let step = (h * (1.0 + t.abs())).min(0.25 * (t.abs() - t0));
            for (l, slot) in decay.iter_mut().enumerate() {
                let v = derivative(g, t, l, step);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Callback(format!("G or its derivative is not finite at t = {t}")));
                }
                *slot = slot.max(v.norm() * (1.0 + t.abs()).powi(l as i32 + 1));
            }
        }
    }
    let pass = [
        size <= bound,
        even_sum.converged && even_sum.sum <= bound,
        variation.converged && variation.sum <= bound,
        decay.iter().all(|&b| b <= bound),
    ];
    Ok(MultiplierClassReport {
        bound,
        t0,
        size,
        even_sum,
        variation,
        decay,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn finite_differences() {
        let g = ScalarFn::new(|t| Complex64::new(t.sin(), 0.0));
        for (l, want) in [(1, 0.3f64.cos()), (2, -0.3f64.sin()), (3, -0.3f64.cos())] {
            let v = derivative(&g, 0.3, l, 1e-2);
            assert!((v.re - want).abs() < 1e-6, "l = {l}");
        }
    }

    #[test]
    fn resolvent_symbol_is_in_the_class() {
        let r = check_multiplier_class(&ScalarFn::g_mu_tau(0.4, 0.3), 100.0, 1.0, 3, &ClassRanges::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.candidates().iter().all(|c| c.is_finite()));
        // |G(0)| = 1/|0.4 + 0.3i| = 2
        assert!((r.size - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_controls() {
        let one = check_multiplier_class(&ScalarFn::constant(1.0), 100.0, 1.0, 3, &ClassRanges::default()).unwrap();
        assert!(!one.pass[1] && !one.even_sum.converged);
        assert!(one.pass[0]);
        let pole = check_multiplier_class(&ScalarFn::g_mu_tau(0.0, 0.0), 100.0, 1.0, 3, &ClassRanges::default()).unwrap();
        assert!(!pole.pass[0] && pole.size.is_infinite());
        let nan = ScalarFn::new(|t| if t > 5.0 { Complex64::new(f64::NAN, 0.0) } else { 1.0.into() });
        assert!(matches!(
            check_multiplier_class(&nan, 1.0, 1.0, 3, &ClassRanges::default()),
            Err(Error::Callback(_))
        ));
    }
}
