//! L²-normalized Hermite functions, multi-indices and the analysis /
//! synthesis pair between grid samples and Hermite coefficients.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, GridKind};

const FRAC_1_PI_QUARTER: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
const LN_RESCALE_BY: f64 = -345.387_763_949_107; // ln 1e-150

/// Fill `out[0..=nmax]` with `h_0(x), …, h_nmax(x)`.
///
/// The recurrence runs on a mantissa with a separate log-scale so that
/// neither the Gaussian seed (which underflows near |x| ≈ 38) nor the
/// growth of the polynomial part causes trouble.
pub fn hermite_values(nmax: usize, x: f64, out: &mut [f64]) {
    assert!(out.len() > nmax, "output slice too short");
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = FRAC_1_PI_QUARTER;
    out[0] = cur * log_scale.exp();
    for n in 0..nmax {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale -= LN_RESCALE_BY;
        }
        out[n + 1] = cur * log_scale.exp();
    }
}

/// The normalized Hermite function `h_n(x)`.
pub fn hermite_1d(n: usize, x: f64) -> f64 {
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = FRAC_1_PI_QUARTER;
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale -= LN_RESCALE_BY;
        }
    }
    cur * log_scale.exp()
}

/// Matrix `[n][i] = h_n(x_i)` for `n ≤ nmax`, row-major.
pub fn hermite_matrix(nmax: usize, nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let mut mat = vec![0.0; (nmax + 1) * m];
    let mut col = vec![0.0; nmax + 1];
    for (i, &x) in nodes.iter().enumerate() {
        hermite_values(nmax, x, &mut col);
        for n in 0..=nmax {
            mat[n * m + i] = col[n];
        }
    }
    mat
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        Self(components)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = α₁ + … + α_d`.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `Φ_α(x) = Π h_{α_i}(x_i)`.
pub fn phi(alpha: &MultiIndex, point: &[f64]) -> Result<f64> {
    if alpha.dim() != point.len() {
        return Err(Error::Shape(format!(
            "multi-index of dimension {} at a point of dimension {}",
            alpha.dim(),
            point.len()
        )));
    }
    Ok(alpha
        .0
        .iter()
        .zip(point)
        .map(|(&n, &x)| hermite_1d(n, x))
        .product())
}

/// Number of multi-indices of degree `sum` with `parts` components.
pub fn level_multiplicity(sum: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(sum == 0);
    }
    binomial(sum + parts - 1, parts - 1)
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All α with `|α| = k` in lexicographic order, largest first component
/// first: for `k = 2, d = 3` this is (2,0,0), (1,1,0), (1,0,1), (0,2,0),
/// (0,1,1), (0,0,2).
pub fn level_indices(k: usize, d: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(level_multiplicity(k, d));
    let mut cur = vec![0; d];
    fn rec(pos: usize, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        let d = cur.len();
        if pos + 1 == d {
            cur[pos] = rem;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for v in (0..=rem).rev() {
            cur[pos] = v;
            rec(pos + 1, rem - v, cur, out);
        }
    }
    if d > 0 {
        rec(0, k, &mut cur, &mut out);
    }
    out
}

/// Position of `alpha` inside `level_indices(|α|, d)`.
pub fn level_rank(alpha: &MultiIndex) -> usize {
    let d = alpha.dim();
    let mut rem = alpha.degree();
    let mut rank = 0;
    for (i, &a) in alpha.0.iter().enumerate() {
        if i + 1 == d {
            break;
        }
        for v in (a + 1)..=rem {
            rank += level_multiplicity(rem - v, d - i - 1);
        }
        rem -= a;
    }
    rank
}

/// Hermite coefficients `c_α`, `|α| ≤ K_max`, stored level by level in the
/// order of [`level_indices`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    dim: usize,
    kmax: usize,
    levels: Vec<Vec<Complex64>>,
}

impl SpectralCoefficients {
    pub fn zeros(dim: usize, kmax: usize) -> Self {
        let levels = (0..=kmax)
            .map(|k| vec![Complex64::new(0.0, 0.0); level_multiplicity(k, dim)])
            .collect();
        Self { dim, kmax, levels }
    }

    pub fn from_fn<F: FnMut(&MultiIndex) -> Complex64>(dim: usize, kmax: usize, mut f: F) -> Self {
        let levels = (0..=kmax)
            .map(|k| level_indices(k, dim).iter().map(&mut f).collect())
            .collect();
        Self { dim, kmax, levels }
    }

    /// Single basis element `Φ_α`.
    pub fn basis(alpha: &MultiIndex, kmax: usize) -> Result<Self> {
        let mut c = Self::zeros(alpha.dim(), kmax.max(alpha.degree()));
        c.set(alpha, Complex64::new(1.0, 0.0))?;
        Ok(c)
    }

    /// Tensor product of one-dimensional coefficient sequences, truncated
    /// at total degree `kmax`.
    pub fn from_separable(factors: &[Vec<Complex64>], kmax: usize) -> Self {
        let dim = factors.len();
        Self::from_fn(dim, kmax, |alpha| {
            alpha
                .0
                .iter()
                .zip(factors)
                .map(|(&n, f)| f.get(n).copied().unwrap_or_default())
                .product()
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn level(&self, k: usize) -> &[Complex64] {
        &self.levels[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.levels[k]
    }

    pub fn get(&self, alpha: &MultiIndex) -> Complex64 {
        if alpha.dim() != self.dim || alpha.degree() > self.kmax {
            return Complex64::new(0.0, 0.0);
        }
        self.levels[alpha.degree()][level_rank(alpha)]
    }

    pub fn set(&mut self, alpha: &MultiIndex, value: Complex64) -> Result<()> {
        if alpha.dim() != self.dim {
            return Err(Error::Shape("multi-index dimension mismatch".into()));
        }
        if alpha.degree() > self.kmax {
            return Err(Error::Parameter(format!(
                "|α| = {} exceeds K_max = {}",
                alpha.degree(),
                self.kmax
            )));
        }
        let r = level_rank(alpha);
        self.levels[alpha.degree()][r] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        self.levels.iter().enumerate().flat_map(move |(k, lvl)| {
            level_indices(k, self.dim).into_iter().zip(lvl.iter().copied())
        })
    }

    /// `c_α ↦ m(|α|) c_α`.
    pub fn scale_levels<F: FnMut(usize) -> Complex64>(&self, mut m: F) -> Self {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, lvl)| {
                let s = m(k);
                lvl.iter().map(|c| c * s).collect()
            })
            .collect();
        Self {
            dim: self.dim,
            kmax: self.kmax,
            levels,
        }
    }

    /// Keep only level `k`.
    pub fn level_part(&self, k: usize) -> Self {
        self.scale_levels(|j| if j == k { 1.0.into() } else { 0.0.into() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape("coefficient dimension mismatch".into()));
        }
        let kmax = self.kmax.max(other.kmax);
        let mut out = Self::zeros(self.dim, kmax);
        for (k, lvl) in out.levels.iter_mut().enumerate() {
            for (i, v) in lvl.iter_mut().enumerate() {
                if k <= self.kmax {
                    *v += self.levels[k][i];
                }
                if k <= other.kmax {
                    *v += other.levels[k][i];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.scale_levels(|_| s)
    }

    /// `(Σ |c_α|²)^{1/2}`, the L² norm of the synthesized function.
    pub fn l2_norm(&self) -> f64 {
        self.levels
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖Π_k f‖₂` for every level.
    pub fn level_norms(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| l.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Drop levels above `kmax`, or pad with zero levels up to it.
    pub fn truncate(&self, kmax: usize) -> Self {
        let mut levels: Vec<Vec<Complex64>> = self.levels.iter().take(kmax + 1).cloned().collect();
        for k in levels.len()..=kmax {
            levels.push(vec![Complex64::new(0.0, 0.0); level_multiplicity(k, self.dim)]);
        }
        Self {
            dim: self.dim,
            kmax,
            levels,
        }
    }

    /// Only level `k`, stored with `kmax = k`.
    pub fn level_only(&self, k: usize) -> Self {
        let mut out = Self::zeros(self.dim, k);
        if k <= self.kmax {
            out.levels[k] = self.levels[k].clone();
        }
        out
    }

    /// All coefficients, level by level.
    pub fn to_flat(&self) -> Vec<Complex64> {
        self.levels.iter().flatten().copied().collect()
    }

    /// Same layout, new values.
    pub fn with_flat(&self, values: &[Complex64]) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::Shape(format!(
                "{} values for {} coefficients",
                values.len(),
                self.len()
            )));
        }
        let mut it = values.iter().copied();
        let levels = self
            .levels
            .iter()
            .map(|l| it.by_ref().take(l.len()).collect())
            .collect();
        Ok(Self {
            dim: self.dim,
            kmax: self.kmax,
            levels,
        })
    }

    /// Level of each entry of [`Self::to_flat`].
    pub fn flat_levels(&self) -> Vec<usize> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(k, l)| std::iter::repeat_n(k, l.len()))
            .collect()
    }

    /// Dense cube `[α₁][α₂]…` with side `kmax + 1`, zero outside the simplex.
    fn to_cube(&self) -> Vec<Complex64> {
        let side = self.kmax + 1;
        let mut cube = vec![Complex64::new(0.0, 0.0); side.pow(self.dim as u32)];
        for (k, lvl) in self.levels.iter().enumerate() {
            for (alpha, c) in level_indices(k, self.dim).iter().zip(lvl) {
                cube[cube_offset(alpha, side)] = *c;
            }
        }
        cube
    }

    fn from_cube(dim: usize, kmax: usize, cube: &[Complex64]) -> Self {
        let side = kmax + 1;
        Self::from_fn(dim, kmax, |alpha| cube[cube_offset(alpha, side)])
    }
}

fn cube_offset(alpha: &MultiIndex, side: usize) -> usize {
    alpha.0.iter().fold(0, |acc, &a| acc * side + a)
}

/// Apply a row-major `rows × shape[axis]` matrix along one axis of a tensor
/// flattened last-axis-fastest.
pub(crate) fn contract_axis<M>(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    matrix: &[M],
    rows: usize,
) -> Vec<Complex64>
where
    M: Copy + std::ops::Mul<Complex64, Output = Complex64>,
{
    let cols = shape[axis];
    debug_assert_eq!(matrix.len(), rows * cols);
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
    for o in 0..outer {
        let src = &data[o * cols * inner..(o + 1) * cols * inner];
        let dst = &mut out[o * rows * inner..(o + 1) * rows * inner];
        for r in 0..rows {
            let mrow = &matrix[r * cols..(r + 1) * cols];
            let drow = &mut dst[r * inner..(r + 1) * inner];
            for (c, &m) in mrow.iter().enumerate() {
                let srow = &src[c * inner..(c + 1) * inner];
                for (d, s) in drow.iter_mut().zip(srow) {
                    *d += m * *s;
                }
            }
        }
    }
    out
}

/// Minimum Gauss–Hermite node count for `analyze` at level `kmax`.
pub fn required_nodes(kmax: usize) -> usize {
    kmax + 2
}

/// `c_α = quad_inner(f, Φ_α)` for all `|α| ≤ kmax`.
pub fn analyze(f: &GridFunction, kmax: usize) -> Result<SpectralCoefficients> {
    let grid = f.grid();
    if grid.kind() != GridKind::GaussHermite {
        return Err(Error::Parameter(
            "analysis needs a gauss-hermite grid".into(),
        ));
    }
    let d = grid.dim();
    let mut shape = grid.shape();
    for &n in &shape {
        if n < required_nodes(kmax) {
            return Err(Error::Resolution {
                nodes: n,
                kmax,
                needed: required_nodes(kmax),
            });
        }
    }
    let mut data = f.values().to_vec();
    for axis in 0..d {
        let rule = grid.axis(axis);
        let mut mat = hermite_matrix(kmax, &rule.nodes);
        let n = rule.len();
        for row in mat.chunks_mut(n) {
            for (v, w) in row.iter_mut().zip(&rule.weights) {
                *v *= w;
            }
        }
        data = contract_axis(&data, &shape, axis, &mat, kmax + 1);
        shape[axis] = kmax + 1;
    }
    Ok(SpectralCoefficients::from_cube(d, kmax, &data))
}

/// `Σ c_α Φ_α` sampled on the nodes of `grid` (any grid kind).
pub fn synthesize(coeffs: &SpectralCoefficients, grid: &Arc<Grid>) -> Result<GridFunction> {
    let d = grid.dim();
    if coeffs.dim() != d {
        return Err(Error::Shape(format!(
            "coefficients of dimension {} on a grid of dimension {d}",
            coeffs.dim()
        )));
    }
    let kmax = coeffs.kmax();
    let mut shape = vec![kmax + 1; d];
    let mut data = coeffs.to_cube();
    for axis in 0..d {
        let rule = grid.axis(axis);
        let n = rule.len();
        let h = hermite_matrix(kmax, &rule.nodes);
        // transpose to [i][n]
        let mut mat = vec![0.0; n * (kmax + 1)];
        for k in 0..=kmax {
            for i in 0..n {
                mat[i * (kmax + 1) + k] = h[k * n + i];
            }
        }
        data = contract_axis(&data, &shape, axis, &mat, n);
        shape[axis] = n;
    }
    GridFunction::new(grid.clone(), data)
}

/// One-dimensional coefficients `∫ f h_n` for `n ≤ kmax`, by a quadrature
/// rule supplied by the caller.
pub fn coefficients_1d<F: FnMut(f64) -> Complex64>(
    mut f: F,
    kmax: usize,
    rule: &crate::quadrature::Rule,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); kmax + 1];
    let mut h = vec![0.0; kmax + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = f(x) * w;
        hermite_values(kmax, x, &mut h);
        for (o, hn) in out.iter_mut().zip(&h) {
            *o += fx * *hn;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::quad_inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms_and_parity() {
        assert!((hermite_1d(0, 0.0) - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_1d(1, 0.0), 0.0);
        for n in 0..30 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            for x in [0.3, 1.7, 4.4] {
                assert!((hermite_1d(n, -x) - s * hermite_1d(n, x)).abs() < 1e-14);
            }
        }
        // h_1 = √2 x h_0
        let x = 0.8;
        assert!((hermite_1d(1, x) - 2f64.sqrt() * x * hermite_1d(0, x)).abs() < 1e-15);
    }

    #[test]
    fn values_match_single_evaluation() {
        let mut buf = vec![0.0; 301];
        for x in [-45.0, -3.2, 0.0, 7.5, 49.0] {
            hermite_values(300, x, &mut buf);
            for n in [0, 1, 17, 150, 300] {
                let single = hermite_1d(n, x);
                assert!((buf[n] - single).abs() <= 1e-14 * single.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn bounded_for_large_degree_and_argument() {
        let mut buf = vec![0.0; 2001];
        let mut x = -60.0;
        while x <= 60.0 {
            hermite_values(2000, x, &mut buf);
            assert!(buf.iter().all(|v| v.is_finite() && v.abs() <= 1.1));
            x += 0.37;
        }
        let v = hermite_1d(10_000, 50.0);
        assert!(v.is_finite() && v.abs() <= 1.1);
        let v = hermite_1d(10_000, 141.0);
        assert!(v.is_finite() && v.abs() <= 1.1);
    }

    #[test]
    fn level_enumeration() {
        let idx = level_indices(2, 3);
        let want = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];
        assert_eq!(idx.len(), 6);
        for (a, w) in idx.iter().zip(want) {
            assert_eq!(a.0, w.to_vec());
        }
        assert_eq!(level_indices(0, 4), vec![MultiIndex::zero(4)]);
        assert_eq!(level_indices(5, 1), vec![MultiIndex(vec![5])]);
        for d in 1..5 {
            for k in 0..9 {
                let lv = level_indices(k, d);
                for (r, a) in lv.iter().enumerate() {
                    assert_eq!(level_rank(a), r);
                }
            }
            let kk = 7;
            let total: usize = (0..=kk).map(|k| level_indices(k, d).len()).sum();
            assert_eq!(total, binomial(kk + d, d));
        }
    }

    #[test]
    fn phi_values() {
        let z = MultiIndex::zero(3);
        let v = phi(&z, &[0.0; 3]).unwrap();
        assert!((v - std::f64::consts::PI.powf(-0.75)).abs() < 1e-15);
        assert_eq!(phi(&MultiIndex(vec![2, 1, 0]), &[0.0; 3]).unwrap(), 0.0);
        assert!(phi(&z, &[0.0; 2]).is_err());
    }

    #[test]
    fn tensor_orthonormality() {
        let g = Grid::gauss_hermite(2, 12).unwrap();
        let idx: Vec<_> = (0..5).flat_map(|k| level_indices(k, 2)).collect();
        let samples: Vec<_> = idx
            .iter()
            .map(|a| GridFunction::from_real_fn(g.clone(), |x| phi(a, x).unwrap()))
            .collect();
        for (i, a) in samples.iter().enumerate() {
            for (j, b) in samples.iter().enumerate() {
                let v = quad_inner(a, b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn analyze_recovers_basis_element() {
        let g = Grid::gauss_hermite(3, 14).unwrap();
        let beta = MultiIndex(vec![3, 0, 5]);
        let f = GridFunction::from_real_fn(g.clone(), |x| phi(&beta, x).unwrap());
        let c = analyze(&f, 12).unwrap();
        for (alpha, v) in c.iter() {
            let want = if alpha == beta { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-10, "{alpha}: {v}");
        }
        let zero = analyze(&GridFunction::zeros(g.clone()), 12).unwrap();
        assert!(zero.iter().all(|(_, v)| v == Complex64::new(0.0, 0.0)));
        assert!(matches!(
            analyze(&f, 13),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn round_trip_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kmax = 10;
        let rand_coeffs = |rng: &mut ChaCha8Rng| {
            SpectralCoefficients::from_fn(2, kmax, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        };
        let c = rand_coeffs(&mut rng);
        let c2 = rand_coeffs(&mut rng);
        let g = Grid::gauss_hermite(2, 16).unwrap();
        let f = synthesize(&c, &g).unwrap();
        let back = analyze(&f, kmax).unwrap();
        for ((_, a), (_, b)) in c.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
        // Parseval on band-limited data
        let n2 = crate::grid::lebesgue_norm(&f, 2.0).unwrap();
        assert!((n2 - c.l2_norm()).abs() < 1e-8);
        let s1 = synthesize(&c.add(&c2).unwrap(), &g).unwrap();
        let s2 = f.add(&synthesize(&c2, &g).unwrap()).unwrap();
        for (a, b) in s1.values().iter().zip(s2.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_coefficient_synthesizes_phi() {
        let alpha = MultiIndex(vec![2, 1]);
        let c = SpectralCoefficients::basis(&alpha, 4).unwrap();
        let g = Grid::uniform_box(2, 3.0, 9).unwrap();
        let f = synthesize(&c, &g).unwrap();
        for (i, v) in f.values().iter().enumerate() {
            let x = g.point(i);
            assert!((v.re - phi(&alpha, &x).unwrap()).abs() < 1e-14);
        }
    }
}
