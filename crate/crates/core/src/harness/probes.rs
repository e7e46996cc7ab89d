//! Seeded probe families in Hermite-coefficient form.
//!
//! Probe `i` of a family is a pure function of `(seed, i)`: each index gets
//! its own ChaCha stream, so families can be evaluated in any order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::hermite::{coefficients_1d, hermite_values, level_indices, SpectralCoefficients};
use crate::quadrature::composite_legendre;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeKind {
    /// `Π e^{−a(x_i − c_i)²/2} e^{iξ_i x_i}`, width `a` log-uniform.
    GaussianBumps {
        width: (f64, f64),
        center: f64,
        modulation: f64,
    },
    /// `Π_k δ_{x0}`: coefficients `Φ_α(x0)` on level `k`.
    HermitePackets { level: usize, center: f64 },
    /// Characteristic functions of boxes, side lengths log-uniform.
    Indicators { side: (f64, f64), center: f64 },
    /// Uniform complex coefficients on the levels `lo..=hi`.
    RandomBandlimited { levels: (usize, usize) },
}

impl ProbeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeKind::GaussianBumps { .. } => "gaussian-bumps",
            ProbeKind::HermitePackets { .. } => "hermite-packets",
            ProbeKind::Indicators { .. } => "indicators",
            ProbeKind::RandomBandlimited { .. } => "random-bandlimited",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFamily {
    pub kind: ProbeKind,
    pub dim: usize,
    pub kmax: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub id: String,
    pub params: Vec<f64>,
    pub coeffs: SpectralCoefficients,
    /// `|E|` for indicator probes.
    pub measure: Option<f64>,
}

impl ProbeFamily {
    pub fn new(kind: ProbeKind, dim: usize, kmax: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return param("probe dimension must be positive");
        }
        match &kind {
            ProbeKind::GaussianBumps { width, .. } if !(width.0 > 0.0 && width.1 >= width.0) => {
                return param("gaussian-bump widths need 0 < lo <= hi")
            }
            ProbeKind::Indicators { side, .. } if !(side.0 > 0.0 && side.1 >= side.0) => {
                return param("indicator sides need 0 < lo <= hi")
            }
            ProbeKind::HermitePackets { level, .. } if *level > kmax => {
                return param(format!("packet level {level} above kmax {kmax}"))
            }
            ProbeKind::RandomBandlimited { levels } if levels.0 > levels.1 || levels.1 > kmax => {
                return param("random probe levels must satisfy lo <= hi <= kmax")
            }
            _ => {}
        }
        Ok(Self {
            kind,
            dim,
            kmax,
            seed,
        })
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    fn draw_params(&self, index: usize) -> Vec<f64> {
        let mut rng = self.rng(index);
        let d = self.dim;
        let log_uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
            if hi == lo {
                lo
            } else {
                (rng.gen_range(lo.ln()..hi.ln())).exp()
            }
        };
        let sym = |rng: &mut ChaCha8Rng, r: f64| if r > 0.0 { rng.gen_range(-r..r) } else { 0.0 };
        match &self.kind {
            ProbeKind::GaussianBumps {
                width,
                center,
                modulation,
            } => {
                let mut p = vec![log_uniform(&mut rng, *width)];
                p.extend((0..d).map(|_| sym(&mut rng, *center)));
                p.extend((0..d).map(|_| sym(&mut rng, *modulation)));
                p
            }
            ProbeKind::HermitePackets { center, .. } => (0..d).map(|_| sym(&mut rng, *center)).collect(),
            ProbeKind::Indicators { side, center } => {
                let mut p = Vec::with_capacity(2 * d);
                for _ in 0..d {
                    let c = sym(&mut rng, *center);
                    let s = log_uniform(&mut rng, *side);
                    p.push(c - 0.5 * s);
                    p.push(c + 0.5 * s);
                }
                p
            }
            ProbeKind::RandomBandlimited { .. } => vec![],
        }
    }

    pub fn generate(&self, index: usize) -> Result<Probe> {
        let params = self.draw_params(index);
        let mut probe = self.build(&params, index)?;
        probe.id = format!("{}-{index}", self.kind.name());
        Ok(probe)
    }

    /// The probe with explicit parameters, as used by the optimizer.
    pub fn build(&self, params: &[f64], index: usize) -> Result<Probe> {
        let d = self.dim;
        let kmax = self.kmax;
        let id = format!("{}-{index}", self.kind.name());
        match &self.kind {
            ProbeKind::GaussianBumps { .. } => {
                if params.len() != 1 + 2 * d || !(params[0] > 0.0) {
                    return param("gaussian bump needs (width, centre, modulation)");
                }
                let a = params[0];
                let factors: Vec<Vec<Complex64>> = (0..d)
                    .map(|i| bump_coefficients_1d(a, params[1 + i], params[1 + d + i], kmax))
                    .collect();
                Ok(Probe {
                    id,
                    params: params.to_vec(),
                    coeffs: SpectralCoefficients::from_separable(&factors, kmax),
                    measure: None,
                })
            }
            ProbeKind::HermitePackets { level, .. } => {
                if params.len() != d {
                    return param("packet needs a centre in R^d");
                }
                let mut tables = vec![vec![0.0; *level + 1]; d];
                for (t, &x) in tables.iter_mut().zip(params) {
                    hermite_values(*level, x, t);
                }
                let mut c = SpectralCoefficients::zeros(d, kmax);
                for (slot, alpha) in c.level_mut(*level).iter_mut().zip(level_indices(*level, d)) {
                    let v: f64 = alpha.components().iter().zip(&tables).map(|(&n, t)| t[n]).product();
                    *slot = v.into();
                }
                Ok(Probe {
                    id,
                    params: params.to_vec(),
                    coeffs: c,
                    measure: None,
                })
            }
            ProbeKind::Indicators { .. } => {
                if params.len() != 2 * d || params.chunks(2).any(|w| !(w[1] > w[0])) {
                    return param("indicator needs d intervals [lo, hi] with lo < hi");
                }
                let factors: Vec<Vec<Complex64>> =
                    params.chunks(2).map(|w| interval_coefficients_1d(w[0], w[1], kmax)).collect();
                let measure = params.chunks(2).map(|w| w[1] - w[0]).product();
                Ok(Probe {
                    id,
                    params: params.to_vec(),
                    coeffs: SpectralCoefficients::from_separable(&factors, kmax),
                    measure: Some(measure),
                })
            }
            ProbeKind::RandomBandlimited { levels } => {
                let mut rng = self.rng(index);
                let mut c = SpectralCoefficients::zeros(d, kmax);
                for k in levels.0..=levels.1 {
                    for v in c.level_mut(k) {
                        *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                }
                Ok(Probe {
                    id,
                    params: vec![],
                    coeffs: c,
                    measure: None,
                })
            }
        }
    }
}

/// `∫ e^{−a(x−c)²/2} e^{iξx} h_n(x) dx`, `n ≤ kmax`.
pub fn bump_coefficients_1d(a: f64, c: f64, xi: f64, kmax: usize) -> Vec<Complex64> {
    let half = 12.0 / a.sqrt();
    let (lo, hi) = (c - half, c + half);
    let osc = (xi.abs() + (2.0 * kmax as f64 + 1.0).sqrt()) * (hi - lo);
    let panels = (osc / 2.0).ceil() as usize + 8;
    let rule = composite_legendre(lo, hi, panels, 16);
    coefficients_1d(
        |x| Complex64::from_polar((-0.5 * a * (x - c) * (x - c)).exp(), xi * x),
        kmax,
        &rule,
    )
}

/// `∫_lo^hi h_n(x) dx`, `n ≤ kmax`.
pub fn interval_coefficients_1d(lo: f64, hi: f64, kmax: usize) -> Vec<Complex64> {
    let osc = (2.0 * kmax as f64 + 1.0).sqrt() * (hi - lo);
    let panels = (osc / 2.0).ceil() as usize + 2;
    let rule = composite_legendre(lo, hi, panels, 16);
    coefficients_1d(|_| Complex64::new(1.0, 0.0), kmax, &rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{lebesgue_norm, Grid};
    use crate::hermite::{analyze, hermite_1d, phi, synthesize, MultiIndex};
    use crate::quadrature::adaptive_integrate;

    #[test]
    fn generation_is_pure() {
        let fam = ProbeFamily::new(
            ProbeKind::GaussianBumps {
                width: (0.5, 4.0),
                center: 1.0,
                modulation: 2.0,
            },
            2,
            12,
            7,
        )
        .unwrap();
        let a = fam.generate(3).unwrap();
        let _ = fam.generate(0).unwrap();
        assert_eq!(a, fam.generate(3).unwrap());
        assert_ne!(a.params, fam.generate(4).unwrap().params);
        let other = ProbeFamily { seed: 8, ..fam };
        assert_ne!(a.params, other.generate(3).unwrap().params);
    }

    #[test]
    fn bump_coefficients_match_grid_analysis() {
        let kmax = 40;
        let c = bump_coefficients_1d(2.0, 0.4, 1.5, kmax);
        let grid = Grid::gauss_hermite(1, 120).unwrap();
        let f = crate::grid::GridFunction::from_fn(grid, |x| {
            Complex64::from_polar((-(x[0] - 0.4f64).powi(2)).exp(), 1.5 * x[0])
        });
        let want = analyze(&f, kmax).unwrap();
        for (n, v) in c.iter().enumerate() {
            assert!((v - want.level(n)[0]).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn packets_and_indicators() {
        let fam = ProbeFamily::new(ProbeKind::HermitePackets { level: 3, center: 1.0 }, 2, 5, 1).unwrap();
        let p = fam.build(&[0.3, -0.2], 0).unwrap();
        let alpha = MultiIndex::new(vec![1, 2]);
        assert!((p.coeffs.get(&alpha).re - phi(&alpha, &[0.3, -0.2]).unwrap()).abs() < 1e-15);
        assert_eq!(p.coeffs.level(2).iter().map(|v| v.norm()).sum::<f64>(), 0.0);

        // a long interval recovers ∫ h_0 = π^{1/4} √2
        let c = interval_coefficients_1d(-15.0, 15.0, 4);
        assert!((c[0].re - std::f64::consts::PI.powf(0.25) * 2f64.sqrt()).abs() < 1e-12);
        assert!(c[1].norm() < 1e-12);

        let fam = ProbeFamily::new(
            ProbeKind::Indicators {
                side: (0.5, 2.0),
                center: 0.5,
            },
            1,
            200,
            3,
        )
        .unwrap();
        let p = fam.generate(0).unwrap();
        let (lo, hi) = (p.params[0], p.params[1]);
        assert!((p.measure.unwrap() - (hi - lo)).abs() < 1e-15);
        for n in [0usize, 7, 50, 199] {
            let want = adaptive_integrate(|x| hermite_1d(n, x), lo, hi, 1e-14);
            assert!((p.coeffs.level(n)[0].re - want).abs() < 1e-12, "n = {n}");
        }
        let l2 = p.coeffs.l2_norm();
        let grid = Grid::gauss_hermite(1, 210).unwrap();
        let f = synthesize(&p.coeffs, &grid).unwrap();
        let n = lebesgue_norm(&f, 2.0).unwrap();
        assert!((n - l2).abs() < 1e-10 * l2);
    }

    #[test]
    fn random_probes_live_on_their_levels() {
        let fam = ProbeFamily::new(ProbeKind::RandomBandlimited { levels: (2, 3) }, 3, 6, 11).unwrap();
        let p = fam.generate(5).unwrap();
        let norms = p.coeffs.level_norms();
        assert_eq!(norms[1], 0.0);
        assert!(norms[2] > 0.0 && norms[3] > 0.0);
        assert_eq!(norms[4], 0.0);
        assert!(ProbeFamily::new(ProbeKind::RandomBandlimited { levels: (2, 9) }, 3, 6, 0).is_err());
    }
}
