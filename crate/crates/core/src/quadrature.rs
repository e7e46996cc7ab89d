//! One-dimensional quadrature rules: Gauss–Hermite (with the Gaussian
//! weight folded into the weights), Gauss–Legendre, composite rules and an
//! adaptive Gauss–Kronrod integrator.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{param, Result};
use crate::hermite::hermite_values;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// N-point Gauss–Hermite rule whose weights already contain the factor
/// `e^{x²}`, so `Σ wᵢ f(xᵢ) ≈ ∫ f dx` for `f` with Gaussian decay.
///
/// Nodes come from the symmetric Jacobi matrix (Golub–Welsch) and are then
/// polished by Newton steps on the normalized Hermite function `h_N`. The
/// weights use the Christoffel sum `1 / Σ_{n<N} h_n(xᵢ)²`, which never
/// overflows.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    if n == 0 {
        return param("gauss-hermite rule needs at least one node");
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut values = vec![0.0; n + 1];
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            hermite_values(n, *x, &mut values);
            // h_N'(x) = sqrt(2N) h_{N-1}(x) - x h_N(x)
            let deriv = (2.0 * n as f64).sqrt() * values[n - 1] - *x * values[n];
            if deriv == 0.0 {
                break;
            }
            let step = values[n] / deriv;
            *x -= step;
            if step.abs() < 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // enforce exact symmetry
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            hermite_values(n - 1, x, &mut values[..n]);
            1.0 / values[..n].iter().map(|h| h * h).sum::<f64>()
        })
        .collect();
    for i in 0..n / 2 {
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(Rule { nodes, weights })
}

/// N-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
    let (unit_nodes, unit_weights) = legendre_unit(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    Rule {
        nodes: unit_nodes.iter().map(|t| mid + half * t).collect(),
        weights: unit_weights.iter().map(|w| half * w).collect(),
    }
}

fn legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` nodes.
pub fn composite_legendre(a: f64, b: f64, panels: usize, order: usize) -> Rule {
    let (unit_nodes, unit_weights) = legendre_unit(order);
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (t, w) in unit_nodes.iter().zip(&unit_weights) {
            nodes.push(lo + 0.5 * h * (t + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Rule { nodes, weights }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration on a finite interval.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol.max(1e-15 * value.abs()) || depth == 0 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth - 1) + recurse(f, mid, b, 0.5 * tol, depth - 1)
    }
    recurse(&mut f, a, b, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_point_hermite_closed_form() {
        let rule = gauss_hermite(2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((rule.nodes[0] + r).abs() < 1e-15);
        assert!((rule.nodes[1] - r).abs() < 1e-15);
        let integral = rule.integrate(|x| (-x * x).exp());
        assert!((integral - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hermite_rule_is_symmetric_and_positive() {
        for n in [1, 5, 16, 33, 128] {
            let rule = gauss_hermite(n).unwrap();
            for i in 0..n {
                assert!(rule.weights[i] > 0.0);
                assert_eq!(rule.nodes[i], -rule.nodes[n - 1 - i]);
                assert_eq!(rule.weights[i], rule.weights[n - 1 - i]);
            }
        }
        assert!(gauss_hermite(0).is_err());
    }

    #[test]
    fn hermite_rule_integrates_gaussian_moments() {
        let rule = gauss_hermite(20).unwrap();
        // ∫ x^4 e^{-x^2} dx = 3√π/4
        let v = rule.integrate(|x| x.powi(4) * (-x * x).exp());
        assert!((v - 0.75 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre(6, -1.0, 2.0);
        // exact up to degree 11
        let v = rule.integrate(|x| x.powi(11));
        let exact = (2f64.powi(12) - 1.0) / 12.0;
        assert!((v - exact).abs() < 1e-10 * exact);
        let c = composite_legendre(0.0, PI, 7, 10);
        assert!((c.integrate(f64::sin) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = adaptive_integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-9 * exact);
    }
}
