//! Same scenario with two thrust laws: the adaptive super-twisting law plus
//! the actor-critic thrust, and the fast-terminal super-twisting baseline.
//! Prints the comparison table of the integral indices.
//!
//! ```bash
//! cargo run --release --example ftsm_baseline
//! ```

use std::path::Path;

use adp_asmc::config::{load_scenario, AirspeedLaw};
use adp_asmc::sim::run;

pub fn run_example() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper_default.toml");
    let base = load_scenario(&path, &[])?;

    println!(
        "{:<10} {:>10} {:>10} {:>10} {:>10}",
        "law", "IAE", "IACM", "int|e_V|", "int T_x"
    );
    let mut thrust = Vec::new();
    for law in [AirspeedLaw::Agst, AirspeedLaw::FtsmGst] {
        let mut cfg = base.clone();
        cfg.control.airspeed_law = law;
        let out = run(&cfg, |_| {})?;
        let m = out.totals;
        println!(
            "{:<10} {:>10.3} {:>10.3} {:>10.3} {:>10.3}",
            format!("{law:?}"),
            m.iae,
            m.iacm,
            m.iae_v,
            m.int_tx
        );
        thrust.push(m.int_tx);
    }
    if thrust[0] <= thrust[1] {
        println!(
            "adaptive law uses less thrust ({:.1} vs {:.1} N s)",
            thrust[0], thrust[1]
        );
    } else {
        println!(
            "warning: adaptive law uses more thrust ({:.1} vs {:.1} N s)",
            thrust[0], thrust[1]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
