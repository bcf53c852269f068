//! Fixed-step closed-loop engine, references, logging and metrics.
//!
//! Each step evaluates the actor-critic first, splits its output into the
//! moment and thrust parts, adds the sliding-mode terms and holds the total
//! over the step. The plant and both integral-manifold integrals are
//! advanced together with the configured integrator so the manifolds stay
//! consistent with the state. Controller memory advances with forward Euler.

mod engine;
pub mod metrics;
pub mod record;
pub mod reference;

use std::fmt::Write as _;

pub use engine::{
    com_state, reference_at, run, run_simulation, without_disturbance, Abort, ReferenceSample, RunOutcome, Simulation,
};
pub use metrics::{MetricSample, MetricTotals, Metrics};
pub use record::{CsvSink, ScenarioRecord, COLUMNS};

use crate::config::{AirspeedLaw, ScenarioConfig};

/// Flat `key=value` summary of a run, one pair per line.
pub fn summary_text(cfg: &ScenarioConfig, out: &RunOutcome) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}={v}");
    };
    kv("name", cfg.name.clone());
    kv("seed", cfg.seed.to_string());
    kv("dt", format!("{:?}", cfg.dt));
    kv("duration", format!("{:?}", cfg.duration));
    kv("integrator", format!("{:?}", cfg.integrator).to_lowercase());
    kv(
        "airspeed_law",
        match cfg.control.airspeed_law {
            AirspeedLaw::Agst => "agst".into(),
            AirspeedLaw::FtsmGst => "ftsm_gst".into(),
        },
    );
    kv("adp_enabled", cfg.control.adp_enabled.to_string());
    kv("adp.beta_w", format!("{:?}", cfg.adp.beta_w));
    kv("adp.c0", format!("{:?}", cfg.adp.c0));
    kv("adp.a0", format!("{:?}", cfg.adp.a0));
    kv("adp.gamma_a", cfg.adp.gamma_a.to_string());
    kv("adp.gamma_b", cfg.adp.gamma_b.to_string());
    kv("attitude_smc.k20", format!("{:?}", cfg.attitude_smc.k20));
    kv("steps_planned", cfg.steps().to_string());
    kv("steps", out.steps.to_string());
    kv("iae", format!("{:?}", out.totals.iae));
    kv("iacm", format!("{:?}", out.totals.iacm));
    kv("iae_v", format!("{:?}", out.totals.iae_v));
    kv("int_tx", format!("{:?}", out.totals.int_tx));
    if let Some(last) = &out.last {
        kv("final_t", format!("{:?}", last.t));
        kv("final_wc_norm", format!("{:?}", last.wc_norm));
        kv("final_wa_norm", format!("{:?}", last.wa_norm));
    }
    match &out.abort {
        Some(a) => {
            kv("status", "abort".into());
            kv("abort_t", format!("{:?}", a.t));
            kv("abort", a.error.to_string());
        }
        None => kv("status", "ok".into()),
    }
    s
}

/// Parses a summary back into ordered pairs.
pub fn parse_summary(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
