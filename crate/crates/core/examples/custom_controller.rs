//! Plugging an external thrust law into the engine. The PI law below
//! replaces the built-in thrust channel while the attitude loop and the
//! actor-critic moment stay in place.
//!
//! ```bash
//! cargo run --release --example custom_controller
//! ```

use adp_asmc::baselines::{AirspeedController, ControlContext};
use adp_asmc::config::ScenarioConfig;
use adp_asmc::sim::{run_simulation, Simulation};
use adp_asmc::Result;

/// Feed-forward drag and gravity compensation plus PI on the airspeed error.
struct PiThrust {
    kp: f64,
    ki: f64,
    integral: f64,
}

impl AirspeedController for PiThrust {
    fn name(&self) -> &str {
        "pi-thrust"
    }

    fn thrust(&mut self, ctx: &ControlContext) -> Result<f64> {
        let aq = ctx.airspeed;
        let e = ctx.com.e_v;
        let m = ctx.uav.mass;
        let feed_forward = aq.drag + m * (aq.g_v + ctx.airspeed_dot_ref);
        let t = (feed_forward - m * (self.kp * e + self.ki * self.integral)) / aq.thrust_projection();
        self.integral += e * ctx.dt;
        Ok(t)
    }
}

pub fn run_example() -> anyhow::Result<()> {
    let mut cfg = ScenarioConfig::with_seed(7);
    cfg.name = "pi_thrust".into();
    cfg.duration = 20.0;
    cfg.adp.beta_w = 100.0;
    cfg.attitude_smc.k1_init = 30.0;

    let pi = PiThrust {
        kp: 2.0,
        ki: 0.5,
        integral: 0.0,
    };
    let sim = Simulation::new(&cfg)?.with_airspeed_controller(Box::new(pi));
    let mut worst: f64 = 0.0;
    let out = run_simulation(sim, |r| {
        if r.t > 10.0 {
            worst = worst.max(r.e_v.abs());
        }
    })?;
    println!("status {}", if out.abort.is_some() { "abort" } else { "ok" });
    println!("max |e_V| after 10 s with the PI thrust law: {worst:.4} m/s");
    println!("int T_x = {:.2} N s", out.totals.int_tx);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
