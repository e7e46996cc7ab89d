//! The registry behind `hermite-verify`: describe an experiment, then run
//! a trimmed config and print the files it wrote.

use hermite_spectral::cli::{find, names, run_config, ExperimentConfig};
use hermite_spectral::error::{Error, Result};

fn main() -> Result<()> {
    println!("registered: {}", names().join(", "));
    let exp = find("multiplier-class").ok_or_else(|| Error::Config("missing".into()))?;
    print!("{}", exp.describe());

    let mut cfg: ExperimentConfig = exp.default_config(7);
    cfg.set("ranges", "n_max", "512");
    cfg.set("ranges", "sum_max", "8192");
    cfg.set("ranges", "t_samples", "500");
    let text = cfg.to_string();
    assert_eq!(ExperimentConfig::parse(&text)?, cfg);

    let dir = std::env::temp_dir().join("hermite-verify-example");
    let out = run_config(&cfg, &dir, Some(1))?;
    println!("passed: {}", out.passed);
    for path in [&out.csv, &out.summary, &out.config] {
        println!("--- {}", path.display());
        let body = std::fs::read_to_string(path).map_err(|e| Error::Config(e.to_string()))?;
        for line in body.lines().take(8) {
            println!("{line}");
        }
    }
    Ok(())
}
