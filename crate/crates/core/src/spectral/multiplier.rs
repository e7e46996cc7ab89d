//! Functions of H acting level by level: `m(H) = Σ m(2k+d) Π_k`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{param, Error, Result};
use crate::grid::GridFunction;
use crate::hermite::{analyze, synthesize, SpectralCoefficients};
use crate::quadrature::adaptive_integrate;

/// A rule `k ↦ m(k)` indexed by eigenvalue level.
#[derive(Clone)]
pub struct SpectralMultiplier {
    rule: Arc<dyn Fn(usize) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for SpectralMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SpectralMultiplier")
    }
}

impl SpectralMultiplier {
    pub fn new<F: Fn(usize) -> Complex64 + Send + Sync + 'static>(rule: F) -> Self {
        Self { rule: Arc::new(rule) }
    }

    pub fn real<F: Fn(usize) -> f64 + Send + Sync + 'static>(rule: F) -> Self {
        Self::new(move |k| Complex64::new(rule(k), 0.0))
    }

    pub fn identity() -> Self {
        Self::real(|_| 1.0)
    }

    /// `k ↦ 2k + d`, the action of H itself.
    pub fn eigenvalue(d: usize) -> Self {
        Self::real(move |k| (2 * k + d) as f64)
    }

    /// `k ↦ [k = j]`, i.e. Π_j.
    pub fn indicator(j: usize) -> Self {
        Self::real(move |k| if k == j { 1.0 } else { 0.0 })
    }

    /// `k ↦ 2k + d − z`, i.e. H − z.
    pub fn shifted(d: usize, z: Complex64) -> Self {
        Self::new(move |k| Complex64::new((2 * k + d) as f64, 0.0) - z)
    }

    pub fn eval(&self, k: usize) -> Complex64 {
        (self.rule)(k)
    }

    pub fn compose(&self, other: &SpectralMultiplier) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |k| a.eval(k) * b.eval(k))
    }

    pub fn sum(&self, other: &SpectralMultiplier) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |k| a.eval(k) + b.eval(k))
    }
}

pub fn multiplier_apply(f: &SpectralCoefficients, m: &SpectralMultiplier) -> SpectralCoefficients {
    f.scale_levels(|k| m.eval(k))
}

/// Grid route: analyze at `kmax`, scale, synthesize on the same grid.
pub fn multiplier_apply_grid(
    f: &GridFunction,
    m: &SpectralMultiplier,
    kmax: usize,
) -> Result<GridFunction> {
    let c = analyze(f, kmax)?;
    synthesize(&multiplier_apply(&c, m), f.grid())
}

/// `Π_k f` by the Hermite expansion.
pub fn project_expansion(f: &SpectralCoefficients, k: usize) -> SpectralCoefficients {
    if k > f.kmax() {
        return SpectralCoefficients::zeros(f.dim(), f.kmax());
    }
    f.level_part(k)
}

/// `e^{−itH} f = Σ e^{−it(2k+d)} Π_k f`.
pub fn propagator_spectral(f: &SpectralCoefficients, t: f64) -> SpectralCoefficients {
    let d = f.dim();
    f.scale_levels(|k| Complex64::from_polar(1.0, -t * (2 * k + d) as f64))
}

/// Distance from `z` to the spectrum `2ℕ₀ + d`.
pub fn spectral_distance(z: Complex64, d: usize) -> f64 {
    let x = (z.re - d as f64) / 2.0;
    let k = x.round().max(0.0);
    (z - Complex64::new(2.0 * k + d as f64, 0.0)).norm()
}

/// `(H − z)^{−m}` on band-limited data.
pub fn resolvent(f: &SpectralCoefficients, z: Complex64, m: u32) -> Result<SpectralCoefficients> {
    if m == 0 {
        return param("resolvent power m must be positive");
    }
    let d = f.dim();
    let dist = spectral_distance(z, d);
    if dist < 1e-8 {
        return Err(Error::SpectralPoint {
            re: z.re,
            im: z.im,
            dist,
        });
    }
    Ok(f.scale_levels(|k| (Complex64::new((2 * k + d) as f64, 0.0) - z).powi(-(m as i32))))
}

/// Resolvent of grid data, together with an upper bound for the part of
/// `(H − z)^{−m} f` lost to truncation at `kmax`.
#[derive(Debug, Clone)]
pub struct Truncated {
    pub value: GridFunction,
    pub tail_bound: f64,
}

pub fn resolvent_grid(f: &GridFunction, z: Complex64, m: u32, kmax: usize) -> Result<Truncated> {
    let c = analyze(f, kmax)?;
    let out = resolvent(&c, z, m)?;
    let total = crate::grid::lebesgue_norm(f, 2.0)?;
    let defect = (total * total - c.l2_norm().powi(2)).max(0.0).sqrt();
    let d = f.grid().dim();
    // sup over k > kmax of |2k+d−z|^{−m}
    let sup = ((kmax + 1)..(kmax + 1 + (z.re.abs() as usize) / 2 + 2))
        .map(|k| (Complex64::new((2 * k + d) as f64, 0.0) - z).norm())
        .fold(f64::INFINITY, f64::min)
        .powi(-(m as i32));
    Ok(Truncated {
        value: synthesize(&out, f.grid())?,
        tail_bound: defect * sup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseRoute {
    Spectral,
    HeatIntegral,
}

/// `H^{−s}` for `0 < s < d/2`.
pub fn fractional_inverse(
    f: &SpectralCoefficients,
    s: f64,
    route: InverseRoute,
) -> Result<SpectralCoefficients> {
    let d = f.dim();
    if !(s > 0.0 && s < d as f64 / 2.0) {
        return param(format!("H^(-s) needs 0 < s < d/2 = {}, got s = {s}", d as f64 / 2.0));
    }
    Ok(match route {
        InverseRoute::Spectral => f.scale_levels(|k| ((2 * k + d) as f64).powf(-s).into()),
        InverseRoute::HeatIntegral => {
            let g = gamma(s);
            f.scale_levels(|k| (heat_integral(s, (2 * k + d) as f64) / g).into())
        }
    })
}

/// `∫₀^∞ t^{s−1} e^{−λt} dt` by adaptive quadrature in `u = ln t`.
pub(crate) fn heat_integral(s: f64, lambda: f64) -> f64 {
    // integrand e^{su − λe^u}; the mass sits near u = ln(s/λ)
    let peak = (s / lambda).ln();
    let lo = peak - 40.0 / s;
    let hi = peak + 5.0;
    let f = |u: f64| (s * u - lambda * u.exp()).exp();
    let mut total = 0.0;
    let mut a = lo;
    while a < hi {
        let b = (a + 1.0).min(hi);
        total += adaptive_integrate(f, a, b, 1e-16);
        a = b;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::hermite::{level_indices, MultiIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(d: usize, kmax: usize, seed: u64) -> SpectralCoefficients {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralCoefficients::from_fn(d, kmax, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn max_diff(a: &SpectralCoefficients, b: &SpectralCoefficients) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|((_, x), (_, y))| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_and_eigenvalue() {
        let f = random(2, 8, 1);
        assert_eq!(multiplier_apply(&f, &SpectralMultiplier::identity()), f);
        let alpha = MultiIndex(vec![3, 2]);
        let phi = SpectralCoefficients::basis(&alpha, 8).unwrap();
        let hphi = multiplier_apply(&phi, &SpectralMultiplier::eigenvalue(2));
        assert_eq!(hphi.get(&alpha), Complex64::new(12.0, 0.0));
        let p = multiplier_apply(&f, &SpectralMultiplier::indicator(4));
        assert_eq!(p, project_expansion(&f, 4));
    }

    #[test]
    fn grid_route_energy() {
        // ⟨Hf, f⟩ = Σ (2|α|+d)|c_α|²
        let f = random(1, 12, 2);
        let g = Grid::gauss_hermite(1, 20).unwrap();
        let fg = synthesize(&f, &g).unwrap();
        let hf = multiplier_apply_grid(&fg, &SpectralMultiplier::eigenvalue(1), 14).unwrap();
        let e = crate::grid::quad_inner(&hf, &fg).unwrap();
        let want: f64 = f.iter().map(|(a, c)| (2 * a.degree() + 1) as f64 * c.norm_sqr()).sum();
        assert!((e.re - want).abs() < 1e-8 * want);
        assert!(e.im.abs() < 1e-8 * want);
    }

    #[test]
    fn projections_complete_and_orthogonal() {
        let f = random(2, 6, 3);
        let mut acc = SpectralCoefficients::zeros(2, 6);
        for k in 0..=6 {
            acc = acc.add(&project_expansion(&f, k)).unwrap();
        }
        assert!(max_diff(&acc, &f) < 1e-15);
        let p = project_expansion(&f, 3);
        assert_eq!(project_expansion(&p, 3), p);
    }

    #[test]
    fn propagator_phase_and_unitarity() {
        let phi0 = SpectralCoefficients::basis(&MultiIndex::zero(3), 4).unwrap();
        let out = propagator_spectral(&phi0, 0.7);
        let want = Complex64::from_polar(1.0, -0.7 * 3.0);
        assert!((out.get(&MultiIndex::zero(3)) - want).norm() < 1e-15);
        let f = random(2, 10, 4);
        let n = propagator_spectral(&f, 1.3).l2_norm();
        assert!((n - f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn resolvent_identities() {
        let f = random(3, 6, 5);
        let z = Complex64::new(7.3, 0.4);
        let r = resolvent(&f, z, 1).unwrap();
        let back = multiplier_apply(&r, &SpectralMultiplier::shifted(3, z));
        assert!(max_diff(&back, &f) < 1e-12);
        let rr = resolvent(&r, z, 1).unwrap();
        let r2 = resolvent(&f, z, 2).unwrap();
        assert!(max_diff(&rr, &r2) < 1e-10);
        assert!(matches!(
            resolvent(&f, Complex64::new(5.0, 0.0), 1),
            Err(Error::SpectralPoint { .. })
        ));
        // Φ_α near its eigenvalue
        for eps in [1e-1, 1e-2] {
            for m in 1..=3 {
                let alpha = MultiIndex(vec![2, 0, 1]);
                let p = SpectralCoefficients::basis(&alpha, 4).unwrap();
                let z = Complex64::new(9.0 - eps, 0.0);
                let out = resolvent(&p, z, m).unwrap();
                let ratio = out.l2_norm() / p.l2_norm();
                assert!((ratio / eps.powi(-(m as i32)) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn resolvent_grid_reports_tail() {
        let g = Grid::gauss_hermite(1, 40).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] - 1.0).powi(2)).exp());
        let out = resolvent_grid(&f, Complex64::new(4.0, 0.0), 1, 6).unwrap();
        assert!(out.tail_bound > 0.0 && out.tail_bound.is_finite());
    }

    #[test]
    fn fractional_routes_agree() {
        let f = random(3, 10, 6);
        for s in [0.3, 1.0, 1.4] {
            let a = fractional_inverse(&f, s, InverseRoute::Spectral).unwrap();
            let b = fractional_inverse(&f, s, InverseRoute::HeatIntegral).unwrap();
            let rel = a.add(&b.scale((-1.0).into())).unwrap().l2_norm() / a.l2_norm();
            assert!(rel < 1e-8, "s = {s}: {rel}");
        }
        let a = fractional_inverse(&f, 0.4, InverseRoute::Spectral).unwrap();
        let ab = fractional_inverse(&a, 0.7, InverseRoute::Spectral).unwrap();
        let c = fractional_inverse(&f, 1.1, InverseRoute::Spectral).unwrap();
        assert!(max_diff(&ab, &c) < 1e-10);
        assert!(fractional_inverse(&f, 1.5, InverseRoute::Spectral).is_err());
        assert!(fractional_inverse(&f, 0.0, InverseRoute::Spectral).is_err());
        let lv = level_indices(2, 3);
        let phi = SpectralCoefficients::basis(&lv[1], 4).unwrap();
        let out = fractional_inverse(&phi, 1.0, InverseRoute::Spectral).unwrap();
        assert!((out.get(&lv[1]).re - 1.0 / 7.0).abs() < 1e-15);
    }
}
