//! Operator-norm lower bounds over probe families and the named sweeps.

pub mod class;
pub mod experiments;
pub mod opnorm;
pub mod probes;
pub mod sweep;

pub use class::{check_multiplier_class, ClassRanges, MultiplierClassReport};
pub use opnorm::{coordinate_ascent, golden_max, opnorm_lower};
pub use probes::{Probe, ProbeFamily, ProbeKind};
pub use sweep::{fmt_num, loglog_slope, slope, spread, BoundEstimate, Check, SweepKey, SweepResult, SweepRow};
