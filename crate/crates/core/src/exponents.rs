//! Exact rational geometry of the admissible exponent pentagon.
//!
//! Points are `(x, y) = (1/p, 1/q)`. The region is the closed pentagon
//! `C → 𝒜 → ℬ → ℬ′ → 𝒜′` with `C = (1/2, 1/2)`, minus the vertices `ℬ`, `ℬ′`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{param, Result};

pub type Q = Ratio<i64>;

pub const MAX_DENOMINATOR: i64 = 1_000_000;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `(1/p, 1/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentPoint {
    pub x: Q,
    pub y: Q,
}

impl ExponentPoint {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    /// From `p`, `q` in `[1, ∞]`; see [`rationalize`].
    pub fn from_pq(p: f64, q: f64) -> Result<Rationalized<Self>> {
        let x = reciprocal(p)?;
        let y = reciprocal(q)?;
        Ok(Rationalized {
            value: Self::new(x.value, y.value),
            exact: x.exact && y.exact,
        })
    }

    pub fn p(&self) -> f64 {
        inverse_f64(self.x)
    }

    pub fn q(&self) -> f64 {
        inverse_f64(self.y)
    }

    pub fn gap(&self) -> Q {
        self.x - self.y
    }

    /// `(d/2)(1/p − 1/q)`.
    pub fn gamma(&self, d: usize) -> Q {
        self.gap() * q(d as i64, 2)
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        let half = q(1, 2);
        Self::new((self.x + other.x) * half, (self.y + other.y) * half)
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn inverse_f64(r: Q) -> f64 {
    if r.is_zero() {
        f64::INFINITY
    } else {
        *r.denom() as f64 / *r.numer() as f64
    }
}

/// A value converted from floating point, with `exact = false` when the
/// continued-fraction approximation had to round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rationalized<T> {
    pub value: T,
    pub exact: bool,
}

/// Best rational approximation with denominator at most [`MAX_DENOMINATOR`].
pub fn rationalize(v: f64) -> Result<Rationalized<Q>> {
    if !v.is_finite() {
        return param(format!("cannot rationalize {v}"));
    }
    let neg = v < 0.0;
    let target = v.abs();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = target;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let k2 = a * k1 + k0;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        let h2 = a * h1 + h0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if (h1 as f64 / k1 as f64 - target).abs() <= f64::EPSILON * target.max(1.0) || frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    let r = Q::new(if neg { -h1 } else { h1 }, k1);
    let back = *r.numer() as f64 / *r.denom() as f64;
    Ok(Rationalized {
        value: r,
        exact: (back - v).abs() <= 4.0 * f64::EPSILON * v.abs().max(1.0),
    })
}

/// `1/p` for `p ∈ [1, ∞]`.
pub fn reciprocal(p: f64) -> Result<Rationalized<Q>> {
    if p.is_nan() || p < 1.0 {
        return param(format!("exponent must lie in [1, inf], got {p}"));
    }
    if p.is_infinite() {
        return Ok(Rationalized {
            value: Q::zero(),
            exact: true,
        });
    }
    // 1/p is rationalized through p so that p = 4/3 gives exactly 3/4
    let r = rationalize(p)?;
    Ok(Rationalized {
        value: r.value.recip(),
        exact: r.exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialPoints {
    pub a: ExponentPoint,
    pub b: ExponentPoint,
    pub d: ExponentPoint,
    pub b_dual: ExponentPoint,
    pub a_dual: ExponentPoint,
    pub center: ExponentPoint,
}

pub fn special_points(d: usize) -> Result<SpecialPoints> {
    if d < 3 {
        return param(format!("the exponent pentagon needs d >= 3, got {d}"));
    }
    let d = d as i64;
    let a = ExponentPoint::new(q(d + 2, 2 * d), q(1, 2));
    let b = ExponentPoint::new(q(d * d + 2 * d - 4, 2 * d * (d - 1)), q(d - 2, 2 * (d - 1)));
    let dd = ExponentPoint::new(q(d + 2, 2 * d), q(d - 2, 2 * d));
    Ok(SpecialPoints {
        a,
        b,
        d: dd,
        b_dual: dual(&b),
        a_dual: dual(&a),
        center: ExponentPoint::new(q(1, 2), q(1, 2)),
    })
}

pub fn dual(pt: &ExponentPoint) -> ExponentPoint {
    ExponentPoint::new(Q::one() - pt.y, Q::one() - pt.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionStatus {
    Inside,
    Boundary,
    ExcludedVertex,
    Outside,
}

impl RegionStatus {
    pub fn admissible(&self) -> bool {
        matches!(self, RegionStatus::Inside | RegionStatus::Boundary)
    }
}

impl fmt::Display for RegionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionStatus::Inside => "inside",
            RegionStatus::Boundary => "boundary",
            RegionStatus::ExcludedVertex => "excluded-vertex",
            RegionStatus::Outside => "outside",
        })
    }
}

pub fn pentagon(d: usize) -> Result<[ExponentPoint; 5]> {
    let s = special_points(d)?;
    Ok([s.center, s.a, s.b, s.b_dual, s.a_dual])
}

fn cross(o: &ExponentPoint, a: &ExponentPoint, b: &ExponentPoint) -> Q {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

pub fn region_contains(pt: &ExponentPoint, d: usize) -> Result<RegionStatus> {
    let verts = pentagon(d)?;
    let s = special_points(d)?;
    if *pt == s.b || *pt == s.b_dual {
        return Ok(RegionStatus::ExcludedVertex);
    }
    // orientation from the signed area
    let mut area = Q::zero();
    for i in 0..5 {
        area += cross(&verts[0], &verts[i], &verts[(i + 1) % 5]);
    }
    let orient = area.signum();
    let mut on_edge = false;
    for i in 0..5 {
        let c = cross(&verts[i], &verts[(i + 1) % 5], pt) * orient;
        if c.is_negative() {
            return Ok(RegionStatus::Outside);
        }
        if c.is_zero() {
            on_edge = true;
        }
    }
    Ok(if on_edge {
        RegionStatus::Boundary
    } else {
        RegionStatus::Inside
    })
}

/// Strictly between `ℬ` and `ℬ′` on `x − y = 2/d`.
pub fn on_critical_open_segment(pt: &ExponentPoint, d: usize) -> Result<bool> {
    let s = special_points(d)?;
    if pt.gap() != q(2, d as i64) {
        return Ok(false);
    }
    let (lo, hi) = (s.b.x.min(s.b_dual.x), s.b.x.max(s.b_dual.x));
    Ok(pt.x > lo && pt.x < hi)
}

/// `d/(2𝔯) + 1/𝔰 ≤ 1`.
pub fn potential_class_ok(r: f64, s: f64, d: usize) -> Result<bool> {
    let ir = reciprocal(r)?.value;
    let is = reciprocal(s)?.value;
    Ok(ir * q(d as i64, 2) + is <= Q::one())
}

/// Exponents and weight parameter of the Carleman inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlemanParams {
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

impl CarlemanParams {
    /// `β = 2α − d/q − 2/s`.
    pub fn beta(&self, d: usize) -> f64 {
        2.0 * self.alpha - d as f64 / self.q - 2.0 / self.s
    }

    /// `γ = (d/2)(1/p − 1/q)`.
    pub fn gamma(&self, d: usize) -> f64 {
        0.5 * d as f64 * (1.0 / self.p - 1.0 / self.q)
    }

    /// Power of `t` in the right-hand weight:
    /// `−α + 1 − (d/2)(1/p − 1/q) − (1/r − 1/s)`.
    pub fn rhs_power(&self, d: usize) -> f64 {
        -self.alpha + 1.0 - self.gamma(d) - (1.0 / self.r - 1.0 / self.s)
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }
}

pub fn dist_to_naturals(beta: f64) -> f64 {
    if beta <= 0.0 {
        0.0 - beta
    } else {
        (beta - beta.round()).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Region(RegionStatus),
    TimeOrder,
    ExcludedTimePoint { x: Q, y: Q },
    TimeGap { lower: bool },
    PEqualsTwo,
    QEqualsTwo,
    LorentzMismatch,
    CriticalNeedsTwo,
    BetaInteger { dist: f64 },
    Rounded,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Region(s) => write!(f, "(1/p, 1/q) {s} the admissible region"),
            Violation::TimeOrder => write!(f, "need 1 <= r <= s <= inf"),
            Violation::ExcludedTimePoint { x, y } => write!(f, "(1/r, 1/s) = ({x}, {y}) is excluded"),
            Violation::TimeGap { lower: true } => write!(f, "1/r - 1/s < 0"),
            Violation::TimeGap { lower: false } => write!(f, "1/r - 1/s > 1 - gamma"),
            Violation::PEqualsTwo => write!(f, "p != 2 required"),
            Violation::QEqualsTwo => write!(f, "q != 2 required"),
            Violation::LorentzMismatch => write!(f, "need a = b in [1, inf]"),
            Violation::CriticalNeedsTwo => write!(f, "critical line needs a = b = 2"),
            Violation::BetaInteger { dist } => write!(f, "beta within {dist:e} of an integer"),
            Violation::Rounded => write!(f, "exponents rounded to rationals"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub beta: f64,
    pub gamma: Q,
    pub dist_beta: f64,
    pub violations: Vec<Violation>,
    /// Floating inputs were not exactly representable with the
    /// denominator bound.
    pub rounded: bool,
}

impl Admissibility {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn carleman_admissible(params: &CarlemanParams, d: usize) -> Result<Admissibility> {
    let pt = ExponentPoint::from_pq(params.p, params.q)?;
    let ir = reciprocal(params.r)?;
    let is = reciprocal(params.s)?;
    let ia = reciprocal(params.a)?;
    let ib = reciprocal(params.b)?;
    let rounded = !(pt.exact && ir.exact && is.exact && ia.exact && ib.exact);
    let pt = pt.value;
    let (ir, is) = (ir.value, is.value);
    let gamma = pt.gamma(d);
    let mut v = Vec::new();

    let status = region_contains(&pt, d)?;
    if !status.admissible() {
        v.push(Violation::Region(status));
    }
    if is > ir {
        v.push(Violation::TimeOrder);
    }
    if (ir == Q::one() && is == gamma) || (ir == Q::one() - gamma && is.is_zero()) {
        v.push(Violation::ExcludedTimePoint { x: ir, y: is });
    }
    let diff = ir - is;
    if diff.is_negative() {
        v.push(Violation::TimeGap { lower: true });
    } else if diff > Q::one() - gamma {
        v.push(Violation::TimeGap { lower: false });
    }
    if gamma < Q::one() {
        if pt.x == q(1, 2) {
            v.push(Violation::PEqualsTwo);
        }
        if pt.y == q(1, 2) {
            v.push(Violation::QEqualsTwo);
        }
        if ia.value != ib.value {
            v.push(Violation::LorentzMismatch);
        }
    } else if ia.value != q(1, 2) || ib.value != q(1, 2) {
        v.push(Violation::CriticalNeedsTwo);
    }
    let beta = params.beta(d);
    let dist = dist_to_naturals(beta);
    if dist < 1e-8 {
        v.push(Violation::BetaInteger { dist });
    }
    Ok(Admissibility {
        beta,
        gamma,
        dist_beta: dist,
        violations: v,
        rounded,
    })
}
