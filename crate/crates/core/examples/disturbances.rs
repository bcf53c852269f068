//! Disturbance profiles: the default profile, a custom one declared in TOML,
//! and the effect of each on the closed loop over 30 s.
//!
//! ```bash
//! cargo run --release --example disturbances
//! ```

use adp_asmc::config::ScenarioConfig;
use adp_asmc::disturbance::DisturbanceProfile;
use adp_asmc::sim::run;

const GUSTY: &str = r#"
d_v = { kind = "piecewise", breakpoints = [10.0, 12.0], pieces = [
    { kind = "zero" },
    { kind = "polynomial", coeffs = [-20.0, 2.0] },
    { kind = "sine", amplitude = 1.0, omega = 0.5 },
] }

[[d_m]]
kind = "sum"
terms = [{ kind = "sine", amplitude = 0.5, omega = 2.0 }, { kind = "polynomial", coeffs = [0.1] }]

[[d_m]]
kind = "zero"

[[d_m]]
kind = "sine"
amplitude = 0.3
omega = 1.0
phase = 0.5
"#;

pub fn run_example() -> anyhow::Result<()> {
    let gusty: DisturbanceProfile = toml::from_str(GUSTY)?;
    gusty.validate()?;

    let default = DisturbanceProfile::standard();
    println!("{:>5} {:>28} {:>9}", "t", "default d_m", "d_v");
    for t in [0.0, 4.9, 5.0, 6.0, 10.0] {
        let d = default.sample(t);
        println!(
            "{t:>5.1} [{:>8.4}, {:>8.4}, {:>8.4}] {:>9.4}",
            d.d_m[0], d.d_m[1], d.d_m[2], d.d_v
        );
    }

    for (name, profile) in [
        ("none", DisturbanceProfile::none()),
        ("default", default),
        ("gusty", gusty),
    ] {
        let mut cfg = ScenarioConfig::with_seed(3);
        cfg.duration = 30.0;
        cfg.adp.beta_w = 100.0;
        cfg.attitude_smc.k1_init = 30.0;
        cfg.disturbance = profile;
        let out = run(&cfg, |_| {})?;
        println!(
            "{name:<8} IAE={:.3} IACM={:.3} int|e_V|={:.3} status={}",
            out.totals.iae,
            out.totals.iacm,
            out.totals.iae_v,
            if out.abort.is_some() { "abort" } else { "ok" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
