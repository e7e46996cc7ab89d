//! Gauss-Hermite and uniform grids, quadrature and time grids.

use hermite_spectral::error::Result;
use hermite_spectral::grid::{lebesgue_norm, quad_inner, Grid, GridFunction, TimeGrid};

fn main() -> Result<()> {
    let two = Grid::gauss_hermite(1, 2)?;
    println!("2-point nodes: {:?}", two.axis(0).nodes);

    // ∫ e^{-x²} dx = √π, exactly on two nodes
    let g = GridFunction::from_real_fn(two, |x| (-x[0] * x[0]).exp());
    let ones = GridFunction::from_real_fn(g.grid().clone(), |_| 1.0);
    println!("quadrature of e^(-x^2): {:.15}  (sqrt(pi) = {:.15})", quad_inner(&ones, &g)?.re, std::f64::consts::PI.sqrt());

    let gh = Grid::gauss_hermite(3, 32)?;
    println!("d=3, N=32: {} cells, shape {:?}", gh.len(), gh.shape());

    let boxed = Grid::uniform_box(3, 6.0, 61)?;
    for p in [1.5, 2.0, 6.0] {
        let f = GridFunction::from_real_fn(boxed.clone(), |x| (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp());
        let exact = (2.0 * std::f64::consts::PI / p).powf(1.5 / p);
        println!("||e^(-|x|^2/2)||_{p}: {:.10} vs {:.10}", lebesgue_norm(&f, p)?, exact);
    }

    let times = TimeGrid::new(-1.0, 1.0, 9)?;
    println!("time step {} on {} samples", times.step(), times.len());
    Ok(())
}
