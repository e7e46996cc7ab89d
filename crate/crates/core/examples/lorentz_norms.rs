//! Lorentz quasi-norms from the decreasing rearrangement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hermite_spectral::error::Result;
use hermite_spectral::grid::{lebesgue_norm, Grid, GridFunction};
use hermite_spectral::lorentz::{lorentz_norm, rearrange, LorentzExponent};

fn main() -> Result<()> {
    let grid = Grid::uniform_box(2, 4.0, 81)?;

    // indicator of a disc: (p/a)^{1/a} |E|^{1/p}
    let ind = GridFunction::from_real_fn(grid.clone(), |x| if x[0] * x[0] + x[1] * x[1] < 4.0 { 1.0 } else { 0.0 });
    let measure = rearrange(&ind).total_measure();
    for (p, a) in [(2.0, 2.0), (3.0, 1.0), (1.5, 4.0), (3.0, f64::INFINITY)] {
        let e = LorentzExponent::new(p, a)?;
        let closed = if a.is_infinite() { measure.powf(1.0 / p) } else { (p / a).powf(1.0 / a) * measure.powf(1.0 / p) };
        println!("L^({p},{a}) of the disc: {:.12} vs {:.12}", lorentz_norm(&ind, e), closed);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = GridFunction::from_real_fn(grid, |_| rng.gen_range(-1.0..1.0));
    for p in [1.5, 3.0, 6.0] {
        let lp = lorentz_norm(&f, LorentzExponent::lebesgue(p)?);
        let weak = lorentz_norm(&f, LorentzExponent::weak(p)?);
        println!("p = {p}: L^(p,p) {lp:.10}, L^p {:.10}, weak {weak:.10}", lebesgue_norm(&f, p)?);
    }
    Ok(())
}
