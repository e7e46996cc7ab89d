//! The named sweeps. Each takes a parameter struct with desk-scale
//! defaults and returns a [`SweepResult`](super::SweepResult).

pub mod carleman;
pub mod kernel;
pub mod lp_square;
pub mod multiplier;
pub mod projection;
pub mod resolvent;
pub mod smoothing;
pub mod sobolev;
pub mod strichartz;
pub mod zeta;

use rayon::prelude::*;

use crate::error::Result;
use crate::exponents::{region_contains, ExponentPoint, RegionStatus};

/// `f` over `items` in parallel; output order follows `items`.
pub(crate) fn par_map<T: Sync, R: Send, F: Fn(&T) -> Result<R> + Sync + Send>(items: &[T], f: F) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

/// Region status of `(1/p, 1/q)`; `None` when the point cannot be placed.
pub(crate) fn region_of(p: f64, q: f64, d: usize) -> Option<RegionStatus> {
    let pt = ExponentPoint::from_pq(p, q).ok()?.value;
    region_contains(&pt, d).ok()
}
