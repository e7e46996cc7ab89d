//! e^{-itH} by two routes against the closed form on a Gaussian, and a
//! resolvent identity.

use num_complex::Complex64;

use hermite_spectral::error::Result;
use hermite_spectral::grid::{lebesgue_norm, Grid, GridFunction};
use hermite_spectral::hermite::{analyze, synthesize};
use hermite_spectral::spectral::gaussian::schrodinger_gaussian;
use hermite_spectral::spectral::mehler::default_source_grid;
use hermite_spectral::spectral::{multiplier_apply, propagator_mehler, propagator_spectral, resolvent, SpectralMultiplier};

fn main() -> Result<()> {
    let (a, t) = (2.0, 0.4);
    let target = Grid::gauss_hermite(1, 40)?;
    let exact = {
        let g = schrodinger_gaussian(a, t, 1);
        GridFunction::from_fn(target.clone(), |x| g.eval_r2(x[0] * x[0]))
    };
    let norm = lebesgue_norm(&exact, 2.0)?;

    let g0 = GridFunction::from_real_fn(target.clone(), |x| (-a * x[0] * x[0] / 2.0).exp());
    let spectral = synthesize(&propagator_spectral(&analyze(&g0, 36)?, t), &target)?;
    println!("spectral route error {:.2e}", lebesgue_norm(&spectral.sub(&exact)?, 2.0)? / norm);

    let src = default_source_grid(1, 36, &target, (2.0 * t).sin().abs())?;
    let g0 = GridFunction::from_real_fn(src, |x| (-a * x[0] * x[0] / 2.0).exp());
    let kernel = propagator_mehler(&g0, t, &target)?;
    println!("kernel route error   {:.2e}", lebesgue_norm(&kernel.sub(&exact)?, 2.0)? / norm);

    // (H - z)(H - z)^{-1} f = f
    let z = Complex64::new(6.0, 3.0);
    let f = analyze(&g0_on(&target), 30)?;
    let inv = resolvent(&f, z, 1)?;
    let back = multiplier_apply(&inv, &SpectralMultiplier::shifted(1, z));
    let diff = back.add(&f.scale(Complex64::new(-1.0, 0.0)))?.l2_norm();
    println!("resolvent identity defect {diff:.2e}");
    Ok(())
}

fn g0_on(grid: &std::sync::Arc<Grid>) -> GridFunction {
    GridFunction::from_real_fn(grid.clone(), |x| x[0] * (-x[0] * x[0]).exp())
}
