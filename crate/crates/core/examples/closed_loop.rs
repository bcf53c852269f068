//! Full closed loop from the canned scenario file: adaptive super-twisting
//! attitude and airspeed loops with the actor-critic controller on top.
//!
//! ```bash
//! cargo run --release --example closed_loop
//! ```

use std::path::Path;

use adp_asmc::config::load_scenario;
use adp_asmc::sim::run;

/// Time of the last sample at or above `tol` (0 when it never is).
fn reaching_time(samples: &[(f64, f64)], tol: f64) -> f64 {
    samples
        .iter()
        .filter(|(_, v)| *v >= tol)
        .map(|(t, _)| *t)
        .fold(0.0, f64::max)
}

pub fn run_example() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper_default.toml");
    let cfg = load_scenario(&path, &[])?;

    let mut s_norm = Vec::with_capacity(cfg.steps());
    let mut s_v = Vec::with_capacity(cfg.steps());
    let mut worst_att: f64 = 0.0;
    let mut worst_v: f64 = 0.0;
    let outcome = run(&cfg, |r| {
        s_norm.push((r.t, r.s.norm()));
        s_v.push((r.t, r.s_v.abs()));
        if r.t > 20.0 {
            worst_att = worst_att.max(r.e_theta.norm());
            worst_v = worst_v.max(r.e_v.abs());
        }
    })?;
    if let Some(a) = &outcome.abort {
        anyhow::bail!("run aborted at t={} s: {}", a.t, a.error);
    }

    let last = outcome.last.expect("non-empty run");
    println!("steps            {}", outcome.steps);
    println!("reaching ||S||   {:.3} s", reaching_time(&s_norm, 1e-2));
    println!("reaching |S_V|   {:.3} s", reaching_time(&s_v, 1e-2));
    println!("max ||e_Θ|| >20s {worst_att:.4} rad");
    println!("max |e_V| >20s   {worst_v:.4} m/s");
    println!(
        "final gains      k1={:.3} L={:.3} r={:.3} Lv={:.3} rv={:.3}",
        last.k1, last.l, last.r, last.lv, last.rv
    );
    println!("final weights    |Wc|={:.3} |Wa|={:.3}", last.wc_norm, last.wa_norm);
    let m = outcome.totals;
    println!(
        "IAE={:.4} IACM={:.4} int|e_V|={:.4} int T_x={:.4}",
        m.iae, m.iacm, m.iae_v, m.int_tx
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
