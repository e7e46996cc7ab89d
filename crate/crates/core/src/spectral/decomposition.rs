//! Multipliers of the form `G((2n + d − H)/2)`: the cutoff split into a
//! near part and a far part, the near part's time-kernel `ζ_n`, and the
//! Dirichlet-type partial sums `σ_k`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::multiplier::SpectralMultiplier;

/// A scalar function `G: ℝ → ℂ`.
#[derive(Clone)]
pub struct ScalarFn(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>);

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarFn")
    }
}

impl ScalarFn {
    pub fn new<F: Fn(f64) -> Complex64 + Send + Sync + 'static>(f: F) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.0)(t)
    }

    /// `G_{μ,τ}(t) = 1/(iτ + t + μ)`.
    pub fn g_mu_tau(mu: f64, tau: f64) -> Self {
        Self::new(move |t| 1.0 / Complex64::new(t + mu, tau))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c.into())
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }
}

fn mollifier(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth step: 0 for `u ≤ 0`, 1 for `u ≥ 1`.
pub fn smooth_step(u: f64) -> f64 {
    let a = mollifier(u);
    let b = mollifier(1.0 - u);
    if a + b == 0.0 {
        return if u >= 1.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Even cutoff equal to 1 on `[−1/2, 1/2]` and 0 outside `(−1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffPhi {
    /// Non-increasing on `t > 0`.
    Monotone,
    /// Same support, but with a bump on `1/2 < |t| < 1` that breaks
    /// monotonicity; used as a negative control.
    NonMonotone { amplitude: f64 },
}

impl CutoffPhi {
    pub fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        let base = smooth_step(2.0 * (1.0 - a));
        match *self {
            CutoffPhi::Monotone => base,
            CutoffPhi::NonMonotone { amplitude } => {
                if a <= 0.5 {
                    base
                } else {
                    let s = (2.0 * PI * (a - 0.5)).sin();
                    base * (1.0 + amplitude * s * s)
                }
            }
        }
    }
}

/// Near and far parts `(𝒥_n, 𝒦_n)` of `G(n − k)` as level multipliers.
pub fn jn_kn_multipliers(
    g: &ScalarFn,
    n: usize,
    phi: CutoffPhi,
) -> (SpectralMultiplier, SpectralMultiplier) {
    let (g1, g2) = (g.clone(), g.clone());
    let nf = n as f64;
    let near = SpectralMultiplier::new(move |k| {
        let m = nf - k as f64;
        g1.eval(m) * phi.eval(m / nf)
    });
    let far = SpectralMultiplier::new(move |k| {
        let m = nf - k as f64;
        g2.eval(m) * (1.0 - phi.eval(m / nf))
    });
    (near, far)
}

/// `Σ_{j=1}^n G(j) φ(j/n) (Π_{n−j} − Π_{n+j})` as a level multiplier.
pub fn i1_multiplier(g: &ScalarFn, n: usize, phi: CutoffPhi) -> SpectralMultiplier {
    let g = g.clone();
    SpectralMultiplier::new(move |k| {
        let nf = n as f64;
        if k < n {
            let j = n - k;
            g.eval(j as f64) * phi.eval(j as f64 / nf)
        } else if k > n && k <= 2 * n {
            let j = k - n;
            -g.eval(j as f64) * phi.eval(j as f64 / nf)
        } else {
            0.0.into()
        }
    })
}

/// `Σ_{j=1}^n (G(−j) + G(j)) φ(j/n) Π_{n+j}` as a level multiplier.
pub fn i2_multiplier(g: &ScalarFn, n: usize, phi: CutoffPhi) -> SpectralMultiplier {
    let g = g.clone();
    SpectralMultiplier::new(move |k| {
        if k > n && k <= 2 * n {
            let j = (k - n) as f64;
            (g.eval(-j) + g.eval(j)) * phi.eval(j / n as f64)
        } else {
            0.0.into()
        }
    })
}

/// `m_n(t) = t G((2n+d−t)/2) (1 − φ((2n+d−t)/2n))`.
pub fn m_n(g: &ScalarFn, n: usize, d: usize, phi: CutoffPhi, t: f64) -> Complex64 {
    let arg = (2.0 * n as f64 + d as f64 - t) / 2.0;
    t * g.eval(arg) * (1.0 - phi.eval(arg / n as f64))
}

/// `ζ_n(t) = −(i/π) e^{i(t/2)(2n+d)} Σ_{k=1}^n G(k) sin(tk) φ(k/n)`.
pub fn zeta_n(g: &ScalarFn, n: usize, d: usize, phi: CutoffPhi, t: f64) -> Complex64 {
    let weights: Vec<Complex64> = (1..=n)
        .map(|k| g.eval(k as f64) * phi.eval(k as f64 / n as f64))
        .collect();
    zeta_from_weights(&weights, n, d, t)
}

/// `ζ_n(t)` with precomputed `G(k) φ(k/n)`, `k = 1..=n`.
pub fn zeta_from_weights(weights: &[Complex64], n: usize, d: usize, t: f64) -> Complex64 {
    let sum = sine_sum(weights, t);
    let pre = Complex64::new(0.0, -1.0 / PI) * Complex64::from_polar(1.0, 0.5 * t * (2 * n + d) as f64);
    pre * sum
}

/// `Σ_k w_k sin(kt)`, `k = 1, 2, …`, with the rotation recurrence
/// re-anchored every 256 terms.
pub fn sine_sum(weights: &[Complex64], t: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, t);
    let mut rot = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, w) in weights.iter().enumerate() {
        let k = i + 1;
        if k % 256 == 0 {
            rot = Complex64::from_polar(1.0, k as f64 * t);
        } else {
            rot *= step;
        }
        acc += w * rot.im;
    }
    acc
}

/// `σ_k(t) = Σ_{j=1}^k sin(jt)/j`.
pub fn sigma_partial(k: usize, t: f64) -> f64 {
    (1..=k).map(|j| (j as f64 * t).sin() / j as f64).sum()
}

/// `max_{1 ≤ k ≤ kmax} |σ_k(t)|` in a single pass over j.
pub fn sigma_running_max(kmax: usize, t: f64) -> f64 {
    let step = Complex64::from_polar(1.0, t);
    let mut rot = Complex64::new(1.0, 0.0);
    let mut acc = 0.0f64;
    let mut best = 0.0f64;
    for j in 1..=kmax {
        if j % 256 == 0 {
            rot = Complex64::from_polar(1.0, j as f64 * t);
        } else {
            rot *= step;
        }
        acc += rot.im / j as f64;
        best = best.max(acc.abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_properties() {
        let phi = CutoffPhi::Monotone;
        let mut prev = 1.0;
        for i in 0..=2000 {
            let t = i as f64 * 6e-4;
            let v = phi.eval(t);
            assert_eq!(v, phi.eval(-t));
            assert!(v <= prev + 1e-15);
            if t <= 0.5 {
                assert_eq!(v, 1.0);
            }
            if t >= 1.0 {
                assert_eq!(v, 0.0);
            }
            prev = v;
        }
        let bad = CutoffPhi::NonMonotone { amplitude: 0.8 };
        let rises = (0..1000)
            .map(|i| 0.5 + i as f64 * 5e-4)
            .any(|t| bad.eval(t + 5e-4) > bad.eval(t) + 1e-6);
        assert!(rises);
        assert_eq!(bad.eval(1.0), 0.0);
        assert_eq!(bad.eval(0.3), 1.0);
    }

    #[test]
    fn near_far_partition() {
        let g = ScalarFn::g_mu_tau(0.4, 0.3);
        for n in [1, 5, 17] {
            let (j, k) = jn_kn_multipliers(&g, n, CutoffPhi::Monotone);
            for lvl in 0..=4 * n {
                let m = n as f64 - lvl as f64;
                assert_eq!(j.eval(lvl) + k.eval(lvl), {
                    // exact: φ + (1 − φ) in floating point
                    let phi = CutoffPhi::Monotone.eval(m / n as f64);
                    g.eval(m) * phi + g.eval(m) * (1.0 - phi)
                });
                assert!((j.eval(lvl) + k.eval(lvl) - g.eval(m)).norm() < 1e-15);
                if (m.abs()) >= n as f64 {
                    assert_eq!(j.eval(lvl), Complex64::new(0.0, 0.0));
                }
                if m.abs() <= n as f64 / 2.0 {
                    assert_eq!(k.eval(lvl), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn near_part_reindexing_identity() {
        let g = ScalarFn::g_mu_tau(-0.2, 1.1);
        for n in [1, 3, 8, 21] {
            let phi = CutoffPhi::Monotone;
            let (j, _) = jn_kn_multipliers(&g, n, phi);
            let i1 = i1_multiplier(&g, n, phi);
            let i2 = i2_multiplier(&g, n, phi);
            for k in 0..=2 * n {
                let center = if k == n { g.eval(0.0) } else { 0.0.into() };
                let rhs = i1.eval(k) + i2.eval(k) + center;
                assert!((j.eval(k) - rhs).norm() < 1e-15, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn far_part_factorization() {
        let g = ScalarFn::g_mu_tau(0.4, 0.3);
        let d = 3;
        for n in [2, 9, 40] {
            let (_, far) = jn_kn_multipliers(&g, n, CutoffPhi::Monotone);
            for k in 0..=5 * n {
                let lam = (2 * k + d) as f64;
                let v = m_n(&g, n, d, CutoffPhi::Monotone, lam) / lam;
                assert!((far.eval(k) - v).norm() < 1e-15 * (1.0 + v.norm()));
            }
        }
    }

    #[test]
    fn zeta_basic() {
        let z = ScalarFn::zero();
        assert_eq!(zeta_n(&z, 10, 3, CutoffPhi::Monotone, 0.7).norm(), 0.0);
        let g = ScalarFn::g_mu_tau(0.4, 0.3);
        let n = 64;
        for t in [-2.0, 0.1, 1.3, 3.0] {
            let direct: Complex64 = (1..=n)
                .map(|k| g.eval(k as f64) * (t * k as f64).sin() * CutoffPhi::Monotone.eval(k as f64 / n as f64))
                .sum();
            let z = zeta_n(&g, n, 3, CutoffPhi::Monotone, t);
            assert!((z.norm() - direct.norm() / PI).abs() < 1e-13);
        }
    }

    #[test]
    fn sigma_properties() {
        for k in [1, 7, 100] {
            assert_eq!(sigma_partial(k, 0.0), 0.0);
            assert!((sigma_partial(k, -0.4) + sigma_partial(k, 0.4)).abs() < 1e-15);
        }
        let t = 0.37;
        let best = (1..=500).map(|k| sigma_partial(k, t).abs()).fold(0.0, f64::max);
        assert!((sigma_running_max(500, t) - best).abs() < 1e-12);
    }
}
