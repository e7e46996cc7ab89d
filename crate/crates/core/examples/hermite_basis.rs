//! Hermite functions, eigenspaces and the analysis/synthesis pair.

use hermite_spectral::error::Result;
use hermite_spectral::grid::{lebesgue_norm, Grid, GridFunction};
use hermite_spectral::hermite::{analyze, hermite_1d, level_indices, level_multiplicity, synthesize};

fn main() -> Result<()> {
    for n in [0, 1, 10, 1000, 5000] {
        println!("h_{n}(0.5) = {:+.6e}", hermite_1d(n, 0.5));
    }
    println!("h_2000 at x = 60: {:e}", hermite_1d(2000, 60.0));

    let level = level_indices(2, 3);
    println!("level 2 in d=3 has {} indices ({}):", level.len(), level_multiplicity(2, 3));
    for a in &level {
        println!("  {:?}", a.components());
    }

    // analyze then synthesize reproduces a band-limited function
    let grid = Grid::gauss_hermite(2, 24)?;
    let f = GridFunction::from_real_fn(grid.clone(), |x| (x[0] - 0.3 * x[1]) * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
    let c = analyze(&f, 12)?;
    let back = synthesize(&c, &grid)?;
    let err = lebesgue_norm(&back.sub(&f)?, 2.0)? / lebesgue_norm(&f, 2.0)?;
    println!("level norms: {:?}", &c.level_norms()[..4]);
    println!("round-trip relative error {err:.2e}");
    Ok(())
}
