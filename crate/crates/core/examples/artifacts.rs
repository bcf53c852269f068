//! Writing run artifacts (CSV, summary, effective config) and reading the
//! summary back, as the plotting scripts do.
//!
//! ```bash
//! cargo run --release --example artifacts -- /tmp/adp-out
//! ```

use std::path::PathBuf;

use adp_asmc::config::ScenarioConfig;
use adp_asmc::output::run_to_dir;
use adp_asmc::sim::{parse_summary, COLUMNS};

pub fn run_example(dir: PathBuf) -> anyhow::Result<()> {
    let mut cfg = ScenarioConfig::with_seed(5);
    cfg.name = "artifacts_demo".into();
    cfg.duration = 5.0;
    cfg.adp.beta_w = 100.0;
    cfg.output.decimate = 100;

    let (_, paths) = run_to_dir(&cfg, &dir)?;
    let csv = std::fs::read_to_string(&paths.csv)?;
    println!(
        "{} has {} rows of {} columns",
        paths.csv.display(),
        csv.lines().count() - 1,
        COLUMNS.len()
    );
    for (k, v) in parse_summary(&std::fs::read_to_string(&paths.summary)?) {
        if ["iae", "iacm", "iae_v", "int_tx", "status"].contains(&k.as_str()) {
            println!("{k:>8} = {v}");
        }
    }
    println!("effective config in {}", paths.config.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("adp-asmc-artifacts"));
    run_example(dir)
}
