//! Two small sweeps run straight from the library.

use hermite_spectral::error::Result;
use hermite_spectral::harness::experiments::{projection, zeta};
use hermite_spectral::harness::SweepResult;

fn show(res: &SweepResult) {
    println!("{}: {} rows", res.experiment, res.rows.len());
    for (k, v) in res.summary.iter().take(6) {
        println!("  {k} = {v:.6}");
    }
    for c in &res.checks {
        println!("  {} = {:.4} ({}) {}", c.name, c.value, c.bound, if c.passed { "pass" } else { "FAIL" });
    }
}

fn main() -> Result<()> {
    let proj = projection::ProjectionParams {
        ks: (1..=12).collect(),
        nodes: 32,
        probes: 4,
        ..Default::default()
    };
    show(&projection::projection_sweep(&proj)?);

    let z = zeta::ZetaParams {
        ns: (4..=9).map(|e| 1 << e).collect(),
        ..Default::default()
    };
    show(&zeta::zeta_sweep(&z)?);
    Ok(())
}
