//! The admissible pentagon in the (1/p, 1/q) square, and the Carleman
//! admissibility predicate.

use hermite_spectral::error::Result;
use hermite_spectral::exponents::{
    carleman_admissible, pentagon, region_contains, special_points, CarlemanParams, ExponentPoint,
};

fn main() -> Result<()> {
    let d = 3;
    for v in pentagon(d)? {
        println!("vertex ({}, {})", v.x, v.y);
    }
    let sp = special_points(d)?;
    println!("D = ({}, {}), gamma = {}", sp.d.x, sp.d.y, sp.d.gamma(d));

    for (p, q) in [(2.0, 6.0), (6.0 / 5.0, 6.0), (4.0 / 3.0, 12.0), (1.1, 1.5)] {
        let pt = ExponentPoint::from_pq(p, q)?;
        println!("(p, q) = ({p:.4}, {q}): {:?}", region_contains(&pt.value, d)?);
    }

    let base = CarlemanParams {
        alpha: 0.7,
        p: 4.0 / 3.0,
        q: 3.0,
        r: 2.0,
        s: 2.0,
        a: 2.0,
        b: 2.0,
    };
    for alpha in [0.7, 1.0, 1.7] {
        let c = base.with_alpha(alpha);
        let adm = carleman_admissible(&c, d)?;
        println!("alpha {alpha}: beta {:.4}, admissible {}, {:?}", c.beta(d), adm.is_ok(), adm.violations);
    }
    Ok(())
}
