//! Lower bounds for operator norms: the best ratio over a probe family,
//! optionally refined by coordinate ascent on the winner's parameters.

use crate::error::{Error, Result};
use crate::harness::probes::{Probe, ProbeFamily};
use crate::harness::sweep::BoundEstimate;

/// Derivative-free maximization of `f` over a parameter vector. Each step
/// tries `±h` along one coordinate; a full cycle without improvement
/// halves `h`.
pub fn coordinate_ascent<F: FnMut(&[f64]) -> Option<f64>>(
    start: &[f64],
    mut value: f64,
    steps: usize,
    initial: f64,
    mut f: F,
) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    if x.is_empty() {
        return (x, value);
    }
    let mut h = initial;
    let mut improved_in_cycle = false;
    for step in 0..steps {
        let i = step % x.len();
        for sign in [1.0, -1.0] {
            let mut y = x.clone();
            y[i] += sign * h * x[i].abs().max(1.0);
            if let Some(v) = f(&y) {
                if v > value {
                    x = y;
                    value = v;
                    improved_in_cycle = true;
                    break;
                }
            }
        }
        if i + 1 == x.len() {
            if !improved_in_cycle {
                h *= 0.5;
            }
            improved_in_cycle = false;
        }
    }
    (x, value)
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// returning the best point visited.
pub fn golden_max<F: FnMut(f64) -> f64>(lo: f64, hi: f64, evals: usize, mut f: F) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 2..evals.max(2) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// `max` over `count` probes of `out/in`, where `norms` returns
/// `(input norm, output norm)` of a probe. Probes with zero input norm are
/// skipped; `steps > 0` refines the best probe by coordinate ascent.
pub fn opnorm_lower<F: FnMut(&Probe) -> Result<(f64, f64)>>(
    family: &ProbeFamily,
    count: usize,
    steps: usize,
    mut norms: F,
) -> Result<BoundEstimate> {
    let mut best: Option<(BoundEstimate, Probe, usize)> = None;
    for i in 0..count {
        let probe = family.generate(i)?;
        let (inp, out) = norms(&probe)?;
        if !(inp > 0.0) {
            continue;
        }
        let est = BoundEstimate::new(probe.id.clone(), inp, out);
        if best.as_ref().is_none_or(|b| est.ratio > b.0.ratio) {
            best = Some((est, probe, i));
        }
    }
    let (mut est, probe, index) = best.ok_or(Error::DegenerateProbe)?;
    if steps > 0 && !probe.params.is_empty() {
        let (x, _) = coordinate_ascent(&probe.params, est.ratio, steps, 0.25, |params| {
            let p = family.build(params, index).ok()?;
            let (inp, out) = norms(&p).ok()?;
            if !(inp > 0.0) {
                return None;
            }
            Some(out / inp).filter(|r| r.is_finite())
        });
        if x != probe.params {
            let p = family.build(&x, index)?;
            let (inp, out) = norms(&p)?;
            let refined = BoundEstimate::new(format!("{}-opt", probe.id), inp, out);
            est = est.max(refined);
        }
    }
    Ok(est)
}
