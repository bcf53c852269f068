//! Scenario files, dotted-path overrides and validation errors.
//!
//! ```bash
//! cargo run --example config_overrides
//! ```

use adp_asmc::config::{parse_document, resolve_scenario, to_toml, ScenarioConfig};

const FILE: &str = r#"
name = "override_demo"
seed = 11
duration = 30.0

[reference.v_d]
kind = "constant"
value = 18.0
"#;

/// Keys the file leaves out take library defaults, so overrides can address
/// any of them.
fn load(overrides: &[&str]) -> adp_asmc::Result<ScenarioConfig> {
    let doc = parse_document(FILE, "inline")?;
    let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    resolve_scenario(doc, &overrides)
}

pub fn run_example() -> anyhow::Result<()> {
    let cfg = load(&["dt=2e-3", "reference.theta_d_deg[2].to=30", "integrator=euler"])?;
    println!("dt={} steps={} integrator={:?}", cfg.dt, cfg.steps(), cfg.integrator);
    println!("psi command: {:?}", cfg.reference.theta_d_deg[2]);

    for bad in [&["attitude_smc.kappa0=1.5"][..], &["dt=-1"], &["adp.no_such_key=1"]] {
        match load(bad) {
            Ok(_) => println!("{bad:?}: accepted"),
            Err(e) => println!("{bad:?}: {e}"),
        }
    }

    let text = to_toml(&cfg)?;
    println!("effective config is {} lines of TOML", text.lines().count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
