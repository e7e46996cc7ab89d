//! Time families of spatial data and the space-time operator
//! `L_β = Δ − |x|² + ∂_t + 2β + d` with its inverse `S_β`.
//!
//! On level k, `L_β` acts as `∂_t + 2(β − k)` and `S_β` is convolution in
//! time with the one-sided exponential `κ_{β−k}`.

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::exponents::dist_to_naturals;
use crate::grid::{GridFunction, TimeGrid};
use crate::hermite::SpectralCoefficients;
use crate::quadrature::gauss_legendre;

/// Spatial data with a flat linear view.
pub trait Linear: Clone {
    fn flat(&self) -> Vec<Complex64>;
    fn with_flat(&self, values: &[Complex64]) -> Result<Self>;
}

impl Linear for GridFunction {
    fn flat(&self) -> Vec<Complex64> {
        self.values().to_vec()
    }

    fn with_flat(&self, values: &[Complex64]) -> Result<Self> {
        GridFunction::new(self.grid().clone(), values.to_vec())
    }
}

impl Linear for SpectralCoefficients {
    fn flat(&self) -> Vec<Complex64> {
        self.to_flat()
    }

    fn with_flat(&self, values: &[Complex64]) -> Result<Self> {
        SpectralCoefficients::with_flat(self, values)
    }
}

/// One spatial slice per sample of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFamily<T> {
    times: TimeGrid,
    slices: Vec<T>,
}

impl<T> TimeFamily<T> {
    pub fn new(times: TimeGrid, slices: Vec<T>) -> Result<Self> {
        if slices.len() != times.len() {
            return Err(Error::Shape(format!(
                "{} slices for {} time samples",
                slices.len(),
                times.len()
            )));
        }
        Ok(Self { times, slices })
    }

    pub fn from_fn<F: FnMut(f64) -> T>(times: TimeGrid, mut f: F) -> Self {
        let slices = times.times().into_iter().map(&mut f).collect();
        Self { times, slices }
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn slices(&self) -> &[T] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<T> {
        self.slices
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> TimeFamily<U> {
        TimeFamily {
            times: self.times.clone(),
            slices: self.slices.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, F: FnMut(&T) -> Result<U>>(&self, f: F) -> Result<TimeFamily<U>> {
        Ok(TimeFamily {
            times: self.times.clone(),
            slices: self.slices.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<T: Linear> TimeFamily<T> {
    /// `series[entry][time]`.
    pub fn to_series(&self) -> Vec<Vec<Complex64>> {
        let flats: Vec<Vec<Complex64>> = self.slices.iter().map(Linear::flat).collect();
        let n = flats.first().map_or(0, Vec::len);
        (0..n).map(|e| flats.iter().map(|f| f[e]).collect()).collect()
    }

    /// Inverse of [`Self::to_series`], reusing this family's layout.
    pub fn from_series(&self, series: &[Vec<Complex64>]) -> Result<Self> {
        let slices = self
            .slices
            .iter()
            .enumerate()
            .map(|(t, s)| {
                let flat: Vec<Complex64> = series.iter().map(|e| e[t]).collect();
                s.with_flat(&flat)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            times: self.times.clone(),
            slices,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.slices
            .iter()
            .flat_map(|s| s.flat())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest value on the first and last samples relative to the overall
    /// maximum.
    pub fn endpoint_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let edge = |s: &T| s.flat().iter().map(|v| v.norm()).fold(0.0, f64::max);
        edge(&self.slices[0]).max(edge(&self.slices[self.slices.len() - 1])) / peak
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Green's function of `c′ + 2a c = g`:
/// `e^{−2at}[t > 0]` for `a > 0`, `−e^{−2at}[t < 0]` for `a < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeKernel {
    rate: f64,
}

impl ModeKernel {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate.abs() >= 1e-8) {
            return Err(Error::GapViolation {
                dist: rate.abs(),
                required: 1e-8,
            });
        }
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn orientation(&self) -> Orientation {
        if self.rate > 0.0 {
            Orientation::Forward
        } else {
            Orientation::Backward
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.orientation() {
            Orientation::Forward if t > 0.0 => (-2.0 * self.rate * t).exp(),
            Orientation::Backward if t < 0.0 => -(-2.0 * self.rate * t).exp(),
            _ => 0.0,
        }
    }
}

pub fn mode_kernel_eval(a: f64, t: f64) -> Result<f64> {
    Ok(ModeKernel::new(a)?.eval(t))
}

/// Frequency-localized kernel
/// `(1/2) ∫ e^{2πitτ} ψ(|τ|/2^j) / (πiτ + a) dτ`, with `ψ` supported in
/// `[1/4, 1]`; the two half-lines are folded into one real integral.
pub fn mode_kernel_piece<F: Fn(f64) -> f64>(a: f64, j: i32, t: f64, psi: F) -> f64 {
    let scale = 2f64.powi(j);
    let (lo, hi) = (0.25 * scale, scale);
    let osc = 2.0 * std::f64::consts::PI * t.abs() * (hi - lo);
    let panels = (osc / 3.0).ceil() as usize + 4;
    let rule = crate::quadrature::composite_legendre(lo, hi, panels, 12);
    let pi = std::f64::consts::PI;
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&tau, &w)| {
            let (s, c) = (2.0 * pi * t * tau).sin_cos();
            w * psi(tau / scale) * (a * c + pi * tau * s) / (a * a + pi * pi * tau * tau)
        })
        .sum()
}

fn check_beta(beta: f64) -> Result<()> {
    let dist = dist_to_naturals(beta);
    if dist < 1e-8 {
        return Err(Error::GapViolation {
            dist,
            required: 1e-8,
        });
    }
    Ok(())
}

/// Weights of `∫₀^h k(u) L_m(u) du` for the cubic through four consecutive
/// samples, `offset` = position of the interval start inside the stencil.
fn interval_weights<K: Fn(f64) -> f64>(h: f64, offset: usize, kernel: K) -> [f64; 4] {
    let rule = gauss_legendre(16, 0.0, h);
    let nodes: [f64; 4] = std::array::from_fn(|m| (m as f64 - offset as f64) * h);
    let mut w = [0.0; 4];
    for (&u, &q) in rule.nodes.iter().zip(&rule.weights) {
        let k = kernel(u) * q;
        for m in 0..4 {
            let mut l = 1.0;
            for n in 0..4 {
                if n != m {
                    l *= (u - nodes[n]) / (nodes[m] - nodes[n]);
                }
            }
            w[m] += k * l;
        }
    }
    w
}

fn stencil_start(i: usize, n: usize) -> usize {
    i.saturating_sub(1).min(n - 4)
}

/// Bounded solution of `c′ + 2a c = g` on uniform samples: exact
/// exponential propagation with cubic interpolation of `g`.
pub fn solve_mode(g: &[Complex64], a: f64, h: f64) -> Vec<Complex64> {
    let n = g.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let decay = (-2.0 * a.abs() * h).exp();
    // weights for stencil offsets 0, 1, 2
    let weights: Vec<[f64; 4]> = (0..3)
        .map(|off| {
            if a > 0.0 {
                interval_weights(h, off, |u| (-2.0 * a * (h - u)).exp())
            } else {
                interval_weights(h, off, |u| -(2.0 * a * u).exp())
            }
        })
        .collect();
    let step = |i: usize| -> Complex64 {
        let b = stencil_start(i, n);
        let w = &weights[i - b];
        (0..4).map(|m| g[b + m] * w[m]).sum()
    };
    if a > 0.0 {
        for i in 0..n - 1 {
            c[i + 1] = c[i] * decay + step(i);
        }
    } else {
        for i in (0..n - 1).rev() {
            c[i] = c[i + 1] * decay + step(i);
        }
    }
    c
}

/// `S_β g`: per coefficient of level k, convolution with `κ_{β−k}`.
pub fn spacetime_inverse(
    g: &TimeFamily<SpectralCoefficients>,
    beta: f64,
) -> Result<TimeFamily<SpectralCoefficients>> {
    check_beta(beta)?;
    let n = g.times().len();
    if n < 4 {
        return param("space-time inverse needs at least four time samples");
    }
    let ratio = g.endpoint_ratio();
    if ratio > 1e-10 {
        return Err(Error::Truncation(format!(
            "time support reaches the interval ends (relative size {ratio:e})"
        )));
    }
    let h = g.times().step();
    let levels = g.slices()[0].flat_levels();
    let series = g.to_series();
    let out: Vec<Vec<Complex64>> = series
        .iter()
        .zip(&levels)
        .map(|(s, &k)| solve_mode(s, beta - k as f64, h))
        .collect();
    g.from_series(&out)
}

/// Fourth-order first derivative on uniform samples, one-sided at the ends.
pub fn time_derivative(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let s = 1.0 / (12.0 * h);
    for i in 2..n - 2 {
        d[i] = (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) * s;
    }
    let edge0 = |at: &dyn Fn(usize) -> Complex64| {
        at(0) * -25.0 + at(1) * 48.0 - at(2) * 36.0 + at(3) * 16.0 - at(4) * 3.0
    };
    let edge1 = |at: &dyn Fn(usize) -> Complex64| {
        at(0) * -3.0 - at(1) * 10.0 + at(2) * 18.0 - at(3) * 6.0 + at(4)
    };
    d[0] = edge0(&|m| v[m]) * s;
    d[1] = edge1(&|m| v[m]) * s;
    d[n - 1] = edge0(&|m| v[n - 1 - m]) * -s;
    d[n - 2] = edge1(&|m| v[n - 1 - m]) * -s;
    d
}

/// `L_β h`: per coefficient of level k, `∂_t h_k + 2(β − k) h_k`.
pub fn heat_hermite_apply(
    h: &TimeFamily<SpectralCoefficients>,
    beta: f64,
) -> Result<TimeFamily<SpectralCoefficients>> {
    let n = h.times().len();
    if n < 5 {
        return param("time differentiation needs at least five samples");
    }
    let step = h.times().step();
    let levels = h.slices()[0].flat_levels();
    let out: Vec<Vec<Complex64>> = h
        .to_series()
        .iter()
        .zip(&levels)
        .map(|(s, &k)| {
            let a = 2.0 * (beta - k as f64);
            time_derivative(s, step)
                .iter()
                .zip(s)
                .map(|(d, v)| d + v * a)
                .collect()
        })
        .collect();
    h.from_series(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::MultiIndex;
    use crate::quadrature::composite_legendre;
    use std::f64::consts::{E, PI};

    fn bump(t: f64, c: f64, w: f64) -> f64 {
        (-(t - c) * (t - c) / (2.0 * w * w)).exp()
    }

    /// `(1/2) ∫ e^{2πitτ}/(πiτ + a) dτ` folded onto `τ > 0`, truncated at
    /// `T` with the tail handled by the symmetric cutoff.
    fn tau_oracle(a: f64, t: f64) -> f64 {
        // cos part converges absolutely after subtracting nothing; the sin
        // part is the slowly convergent Dirichlet integral ∫ sin(2πtτ)/(πτ) → sgn(t)/2
        let big = 4000.0;
        let rule = composite_legendre(0.0, big, 40000, 8);
        let mut v = 0.0;
        for (&tau, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (s, c) = (2.0 * PI * t * tau).sin_cos();
            let den = a * a + PI * PI * tau * tau;
            v += w * (a * c / den + (PI * tau / den - 1.0 / (PI * tau.max(1e-300))) * s);
        }
        // ∫₀^∞ sin(2πtτ)/(πτ) dτ = sgn(t)/2
        v + 0.5 * t.signum()
    }

    #[test]
    fn mode_kernel_values() {
        assert!((mode_kernel_eval(1.0, 0.5).unwrap() - 1.0 / E).abs() < 1e-15);
        assert_eq!(mode_kernel_eval(1.0, -0.5).unwrap(), 0.0);
        assert!((mode_kernel_eval(-1.0, -0.5).unwrap() + 1.0 / E).abs() < 1e-15);
        assert!(mode_kernel_eval(0.0, 1.0).is_err());
        for (a, t) in [(1.0, 0.5), (1.0, -0.5), (-1.0, -0.5), (0.7, 1.3), (-2.0, 0.4)] {
            let k = mode_kernel_eval(a, t).unwrap();
            assert!((tau_oracle(a, t) - k).abs() < 1e-3, "a {a} t {t}: {} vs {k}", tau_oracle(a, t));
        }
    }

    #[test]
    fn scalar_solver_matches_convolution() {
        let times = TimeGrid::new(-4.0, 6.0, 2001).unwrap();
        let g: Vec<Complex64> = times.times().iter().map(|&t| bump(t, 0.5, 0.4).into()).collect();
        for a in [0.5, 3.0, -0.5, -2.5] {
            let c = solve_mode(&g, a, times.step());
            for &i in &[500usize, 1000, 1200, 1500] {
                let t = times.time(i);
                let rule = composite_legendre(-4.0, 6.0, 200, 12);
                let want: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&s, &w)| w * mode_kernel_eval(a, t - s).unwrap() * bump(s, 0.5, 0.4))
                    .sum();
                assert!((c[i].re - want).abs() < 1e-6, "a {a} t {t}");
            }
        }
    }

    fn family(kmax: usize, times: &TimeGrid) -> TimeFamily<SpectralCoefficients> {
        TimeFamily::from_fn(times.clone(), |t| {
            SpectralCoefficients::from_fn(2, kmax, |alpha| {
                let k = alpha.degree() as f64;
                Complex64::new(1.0 / (1.0 + k), 0.3 * k) * bump(t, 0.2 * k, 0.5)
            })
        })
    }

    #[test]
    fn inverse_pair() {
        let times = TimeGrid::new(-6.0, 8.0, 4001).unwrap();
        let g = family(6, &times);
        for beta in [0.5, 2.5, 7.3, -1.2] {
            let h = spacetime_inverse(&g, beta).unwrap();
            let back = heat_hermite_apply(&h, beta).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for (x, y) in g.to_series().iter().zip(back.to_series()) {
                for (u, v) in x.iter().zip(y) {
                    num += (u - v).norm_sqr();
                    den += u.norm_sqr();
                }
            }
            assert!((num / den).sqrt() < 1e-6, "beta {beta}: {}", (num / den).sqrt());
        }
    }

    #[test]
    fn causal_support_and_errors() {
        let times = TimeGrid::new(-3.0, 5.0, 801).unwrap();
        let alpha = MultiIndex::new(vec![1, 0]);
        let g = TimeFamily::from_fn(times.clone(), |t| {
            let mut c = SpectralCoefficients::zeros(2, 3);
            let v = if t > 0.0 && t < 2.0 { (PI * t / 2.0).sin().powi(4) } else { 0.0 };
            c.set(&alpha, v.into()).unwrap();
            c
        });
        let h = spacetime_inverse(&g, 2.5).unwrap();
        for (i, s) in h.slices().iter().enumerate() {
            if times.time(i) < -0.02 {
                assert!(s.get(&alpha).norm() < 1e-12);
            }
        }
        assert!(spacetime_inverse(&g, 2.0).is_err());
        let wide = TimeFamily::from_fn(times.clone(), |_| SpectralCoefficients::basis(&alpha, 3).unwrap());
        assert!(matches!(spacetime_inverse(&wide, 2.5), Err(Error::Truncation(_))));
        let zero = TimeFamily::from_fn(times, |_| SpectralCoefficients::zeros(2, 3));
        assert_eq!(spacetime_inverse(&zero, 2.5).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn heat_operator_properties() {
        let times = TimeGrid::new(0.0, 1.0, 101).unwrap();
        let alpha = MultiIndex::new(vec![2, 1]);
        let constant = TimeFamily::from_fn(times.clone(), |_| SpectralCoefficients::basis(&alpha, 4).unwrap());
        let out = heat_hermite_apply(&constant, 4.5).unwrap();
        for s in out.slices() {
            assert!((s.get(&alpha) - Complex64::new(3.0, 0.0)).norm() < 1e-10);
        }
        // e^{−2(β−k)t} times a window: only the window derivative survives
        let times = TimeGrid::new(-1.0, 3.0, 2001).unwrap();
        let beta = 4.5;
        let rate = 2.0 * (beta - 3.0);
        let h = TimeFamily::from_fn(times.clone(), |t| {
            let mut c = SpectralCoefficients::zeros(2, 4);
            c.set(&alpha, ((-rate * t).exp() * bump(t, 1.0, 0.3)).into()).unwrap();
            c
        });
        let out = heat_hermite_apply(&h, beta).unwrap();
        for (i, s) in out.slices().iter().enumerate() {
            let t = times.time(i);
            let want = (-rate * t).exp() * bump(t, 1.0, 0.3) * (-(t - 1.0) / 0.09);
            assert!((s.get(&alpha).re - want).abs() < 1e-6 * (1.0 + want.abs()));
        }
    }
}
