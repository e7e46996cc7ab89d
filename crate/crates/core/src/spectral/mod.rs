//! Operators built from the Hermite spectral decomposition.

pub mod decomposition;
pub mod gaussian;
pub mod littlewood_paley;
pub mod mehler;
pub mod multiplier;
pub mod spacetime;

pub use mehler::{
    calibrate_mehler_1d, mehler_constant, project, project_integral, propagator,
    propagator_mehler, IntegralOptions, ProjectionRoute, PropagatorRoute,
};
pub use multiplier::{
    fractional_inverse, multiplier_apply, multiplier_apply_grid, project_expansion,
    propagator_spectral, resolvent, resolvent_grid, spectral_distance, InverseRoute,
    SpectralMultiplier,
};
