//! Closed-form action of functions of H on centred Gaussians.
//!
//! For `g_a(x) = e^{−a|x|²/2}` and complex ζ with `Re ζ ≥ 0`,
//! `e^{−ζH} g_a = D^{−d/2} e^{−A|x|²/2}` where
//! `D = cosh 2ζ + a sinh 2ζ`, `A = (a cosh 2ζ + sinh 2ζ) / D`.
//! These formulas give exact references for quantities that would
//! otherwise need very fine grids (narrow or dilated bumps).

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{param, Error, Result};
use crate::quadrature::{composite_legendre, Rule};
use crate::spectral::multiplier::spectral_distance;

/// `amp · e^{−width |x|²/2}` in d dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub amp: Complex64,
    pub width: Complex64,
}

impl Gaussian {
    pub fn eval_r2(&self, r2: f64) -> Complex64 {
        self.amp * (-0.5 * r2 * self.width).exp()
    }
}

/// `e^{−itH} g_a` with the branch of `D^{−d/2}` continued from `t = 0`.
pub fn schrodinger_gaussian(a: f64, t: f64, d: usize) -> Gaussian {
    let (s, c) = (2.0 * t).sin_cos();
    let dd = Complex64::new(c, a * s);
    let width = Complex64::new(a * c, s) / dd;
    // D winds once around 0 per period π
    let turns = (t / PI).floor();
    let mut arg = (a * s).atan2(c);
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    let arg = arg + 2.0 * PI * turns;
    let amp = Complex64::from_polar(dd.norm().powf(-(d as f64) / 2.0), -(d as f64) / 2.0 * arg);
    Gaussian { amp, width }
}

/// `e^{−sH} g_a` for real `s ≥ 0`.
pub fn heat_gaussian(a: f64, s: f64, d: usize) -> Gaussian {
    let (ch, sh) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    let dd = ch + a * sh;
    Gaussian {
        amp: dd.powf(-(d as f64) / 2.0).into(),
        width: ((a * ch + sh) / dd).into(),
    }
}

/// `H g_a = (ad − (a² − 1)|x|²) g_a`.
pub fn hermite_apply_gaussian(a: f64, d: usize, r2: f64) -> f64 {
    (a * d as f64 - (a * a - 1.0) * r2) * (-0.5 * a * r2).exp()
}

/// `‖g_a‖_p^p = (2π/(ap))^{d/2}`.
pub fn gaussian_lp_norm(a: f64, p: f64, d: usize) -> f64 {
    (2.0 * PI / (a * p)).powf(d as f64 / 2.0).powf(1.0 / p)
}

/// One-dimensional Hermite coefficients of `e^{−a(x−c)²/2}`, `n ≤ kmax`,
/// by Gauss–Legendre on a window covering the bump.
pub fn shifted_gaussian_coefficients(a: f64, c: f64, kmax: usize) -> Vec<Complex64> {
    let half = 12.0 / a.sqrt();
    let (lo, hi) = (c - half, c + half);
    let panels = ((hi - lo) * (kmax as f64 + 1.0).sqrt()).ceil() as usize + 8;
    let rule = composite_legendre(lo, hi, panels, 16);
    crate::hermite::coefficients_1d(
        |x| (-0.5 * a * (x - c) * (x - c)).exp().into(),
        kmax,
        &rule,
    )
}

/// Time-quadrature controls for the closed-form resolvent.
#[derive(Debug, Clone, Copy)]
pub struct PeriodQuadrature {
    pub panels: usize,
    pub order: usize,
}

impl PeriodQuadrature {
    /// Panels scaled to the oscillation `e^{izt}` and the bandwidth of `g_a`.
    pub fn for_problem(a: f64, z: Complex64) -> Self {
        let freq = z.re.abs() + 2.0 * (a + 1.0 / a) + 8.0;
        Self {
            panels: (freq * 0.6).ceil() as usize + 8,
            order: 16,
        }
    }
}

/// `(H − z)^{−1} g_a` at the squared radii `r2`, through
/// `(H − z)^{−1} = i/(1 − e^{iπ(z−d)}) ∫₀^π e^{izt} e^{−itH} dt`
/// (conjugate form when `Im z < 0`).
pub fn gaussian_resolvent(
    a: f64,
    z: Complex64,
    d: usize,
    r2: &[f64],
    quad: PeriodQuadrature,
) -> Result<Vec<Complex64>> {
    let dist = spectral_distance(z, d);
    if dist < 1e-8 {
        return Err(Error::SpectralPoint {
            re: z.re,
            im: z.im,
            dist,
        });
    }
    let i = Complex64::i();
    let upper = z.im >= 0.0;
    let sign = if upper { 1.0 } else { -1.0 };
    let e = (sign * i * PI * (z - d as f64)).exp();
    let pref = sign * i / (1.0 - e);
    let rule: Rule = composite_legendre(0.0, PI, quad.panels, quad.order);
    let mut out = vec![Complex64::new(0.0, 0.0); r2.len()];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        // e^{itH} g_a is the complex conjugate of e^{−itH} g_a (a real)
        let mut g = schrodinger_gaussian(a, t, d);
        if !upper {
            g.amp = g.amp.conj();
            g.width = g.width.conj();
        }
        let phase = (sign * i * z * t).exp() * w;
        for (o, &r) in out.iter_mut().zip(r2) {
            *o += phase * g.eval_r2(r);
        }
    }
    for o in out.iter_mut() {
        *o *= pref;
    }
    Ok(out)
}

/// `H^{−s} g_a` at squared radii `r2`, through the heat integral
/// `(1/Γ(s)) ∫₀^∞ t^{s−1} e^{−tH} g_a dt` in the variable `u = ln t`.
pub fn gaussian_fractional_inverse(a: f64, s: f64, d: usize, r2: &[f64]) -> Result<Vec<f64>> {
    if !(s > 0.0 && s < d as f64 / 2.0) {
        return param(format!("H^(-s) needs 0 < s < d/2, got s = {s}"));
    }
    // the bump has heat time scale 1/a; the integrand decays like e^{(s−d)t}
    let lo = (1e-6 / a.max(1.0)).ln() - 20.0 / s;
    let hi = (60.0 / (d as f64 - s)).ln();
    let panels = ((hi - lo) * 4.0).ceil() as usize;
    let rule = composite_legendre(lo, hi, panels, 12);
    let g = gamma(s);
    let mut out = vec![0.0; r2.len()];
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = u.exp();
        let heat = heat_gaussian(a, t, d);
        let weight = w * (s * u).exp() / g;
        let (amp, width) = (heat.amp.re, heat.width.re);
        for (o, &r) in out.iter_mut().zip(r2) {
            *o += weight * amp * (-0.5 * r * width).exp();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::hermite::{analyze, synthesize, SpectralCoefficients};
    use crate::grid::GridFunction;
    use crate::spectral::multiplier::{fractional_inverse, propagator_spectral, resolvent, InverseRoute};

    fn gaussian_coeffs(a: f64, d: usize, kmax: usize) -> SpectralCoefficients {
        let one = shifted_gaussian_coefficients(a, 0.0, kmax);
        SpectralCoefficients::from_separable(&vec![one; d], kmax)
    }

    #[test]
    fn phi0_is_stationary() {
        for t in [0.2, 1.0, 2.5, 4.0, -0.7] {
            let g = schrodinger_gaussian(1.0, t, 3);
            assert!((g.width - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            let want = Complex64::from_polar(1.0, -3.0 * t);
            assert!((g.amp - want).norm() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn evolution_matches_spectral_route() {
        let a = 2.3;
        let kmax = 60;
        let c = gaussian_coeffs(a, 1, kmax);
        let grid = Grid::gauss_hermite(1, 80).unwrap();
        for t in [0.3, 1.4, 2.2, 3.0, 5.0] {
            let ev = synthesize(&propagator_spectral(&c, t), &grid).unwrap();
            let g = schrodinger_gaussian(a, t, 1);
            for (v, x) in ev.values().iter().zip(&grid.axis(0).nodes) {
                assert!((v - g.eval_r2(x * x)).norm() < 1e-9, "t = {t}");
            }
        }
    }

    #[test]
    fn apply_h_matches_spectral() {
        let a = 0.6;
        let grid = Grid::gauss_hermite(2, 70).unwrap();
        let f = GridFunction::from_real_fn(grid.clone(), |x| (-0.5 * a * (x[0] * x[0] + x[1] * x[1])).exp());
        let c = analyze(&f, 60).unwrap();
        let hc = c.scale_levels(|k| ((2 * k + 2) as f64).into());
        let hf = synthesize(&hc, &grid).unwrap();
        for (i, v) in hf.values().iter().enumerate() {
            let p = grid.point(i);
            let r2 = p[0] * p[0] + p[1] * p[1];
            if r2 < 16.0 {
                assert!((v.re - hermite_apply_gaussian(a, 2, r2)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn resolvent_period_integral() {
        let a = 1.7;
        let d = 3;
        let kmax = 70;
        let c = gaussian_coeffs(a, d, kmax);
        let grid = Grid::gauss_hermite(3, 8).unwrap();
        let r2: Vec<f64> = (0..grid.len())
            .map(|i| grid.point(i).iter().map(|x| x * x).sum())
            .collect();
        for z in [
            Complex64::new(8.0, 0.0),
            Complex64::new(12.0, 10.0),
            Complex64::new(-3.0, -4.0),
            Complex64::new(22.0, -50.0),
        ] {
            let exact = synthesize(&resolvent(&c, z, 1).unwrap(), &grid).unwrap();
            let closed = gaussian_resolvent(a, z, d, &r2, PeriodQuadrature::for_problem(a, z)).unwrap();
            for (u, v) in exact.values().iter().zip(&closed) {
                assert!((u - v).norm() < 1e-8 * (1.0 + u.norm()), "z = {z}: {u} vs {v}");
            }
        }
        assert!(gaussian_resolvent(a, Complex64::new(5.0, 0.0), d, &r2, PeriodQuadrature { panels: 4, order: 4 }).is_err());
    }

    #[test]
    fn heat_integral_matches_spectral() {
        let a = 3.0;
        let d = 3;
        let kmax = 60;
        let c = gaussian_coeffs(a, d, kmax);
        let grid = Grid::gauss_hermite(3, 6).unwrap();
        let r2: Vec<f64> = (0..grid.len())
            .map(|i| grid.point(i).iter().map(|x| x * x).sum())
            .collect();
        let exact = synthesize(&fractional_inverse(&c, 1.0, InverseRoute::Spectral).unwrap(), &grid).unwrap();
        let closed = gaussian_fractional_inverse(a, 1.0, d, &r2).unwrap();
        for (u, v) in exact.values().iter().zip(&closed) {
            assert!((u.re - v).abs() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn gaussian_norms() {
        // ∫ e^{-x²} dx = √π
        assert!((gaussian_lp_norm(2.0, 1.0, 1) - PI.sqrt()).abs() < 1e-15);
        assert!((gaussian_lp_norm(1.0, 2.0, 1) - PI.powf(0.25)).abs() < 1e-15);
    }
}
