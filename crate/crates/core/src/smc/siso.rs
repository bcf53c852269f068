//! Scalar demo: `ẋ = u + d(t)` driven by the adaptive super-twisting law with
//! the manifold taken as `S = x`.

use super::airspeed::{normalized_control, phi_v3, AirspeedSmcParams, AirspeedSmcState};
use serde::{Deserialize, Serialize};

use crate::disturbance::siso_d;
use crate::error::{Error, Result};

/// A scalar sliding-mode controller for the demo plant. Implementations hold
/// their own memory; `control` is called once per step before `advance`.
pub trait SisoController {
    fn control(&mut self, sliding: f64, dt: f64) -> f64;
    fn advance(&mut self, sliding: f64, dt: f64);
    /// First-layer gain for logging.
    fn gain(&self) -> f64;
    /// Second-layer gain for logging.
    fn second_layer_gain(&self) -> f64;
    /// Last acceleration term for logging (zero when not applicable).
    fn accel_term(&self) -> f64 {
        0.0
    }
}

/// Adaptive generalized super-twisting controller with unit input gain.
#[derive(Debug, Clone)]
pub struct AgstController {
    pub params: AirspeedSmcParams,
    pub state: AirspeedSmcState,
    last_phi3: f64,
}

impl AgstController {
    pub fn new(params: AirspeedSmcParams) -> Self {
        Self {
            state: AirspeedSmcState::new(&params),
            params,
            last_phi3: 0.0,
        }
    }
}

impl SisoController for AgstController {
    fn control(&mut self, sliding: f64, dt: f64) -> f64 {
        let rate = self.state.commanded_lv_rate(&self.params, dt);
        self.last_phi3 = if self.params.accel_term {
            phi_v3(sliding, self.state.gain_lv(&self.params), rate, self.params.s_deadzone)
        } else {
            0.0
        };
        normalized_control(&self.state, sliding, rate, &self.params)
    }

    fn advance(&mut self, sliding: f64, dt: f64) {
        self.state.advance(sliding, &self.params, dt);
    }

    fn gain(&self) -> f64 {
        self.state.gain_lv(&self.params)
    }

    fn second_layer_gain(&self) -> f64 {
        self.state.r_v
    }

    fn accel_term(&self) -> f64 {
        self.last_phi3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SisoConfig {
    pub duration: f64,
    pub dt: f64,
    pub x0: f64,
    /// Use the piecewise demo disturbance; `false` runs disturbance-free.
    pub disturbance: bool,
}

impl Default for SisoConfig {
    fn default() -> Self {
        Self {
            duration: 30.0,
            dt: 1e-3,
            x0: 1.0,
            disturbance: true,
        }
    }
}

impl SisoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config("siso.dt", "must be > 0"));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0 && self.duration <= 30.0) {
            return Err(Error::config("siso.duration", "must lie in [0, 30] s"));
        }
        if !self.x0.is_finite() {
            return Err(Error::config("siso.x0", "must be finite"));
        }
        Ok(())
    }
}

/// One logged sample of the demo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SisoRecord {
    pub t: f64,
    pub x: f64,
    pub u: f64,
    pub d: f64,
    pub lv: f64,
    pub rv: f64,
    pub phi_v3: f64,
}

pub const SISO_CSV_HEADER: &str = "t,x,u,d,lv,rv,phi_v3";

impl SisoRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.t, self.x, self.u, self.d, self.lv, self.rv, self.phi_v3
        )
    }
}

/// Simulates the demo plant with forward Euler and returns one record per
/// step, the last one at `t = duration`.
pub fn run_siso<C: SisoController>(controller: &mut C, cfg: &SisoConfig) -> Result<Vec<SisoRecord>> {
    cfg.validate()?;
    let steps = (cfg.duration / cfg.dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = cfg.x0;
    for k in 0..steps {
        let t = k as f64 * cfg.dt;
        let d = if cfg.disturbance { siso_d(t)? } else { 0.0 };
        let u = controller.control(x, cfg.dt);
        out.push(SisoRecord {
            t,
            x,
            u,
            d,
            lv: controller.gain(),
            rv: controller.second_layer_gain(),
            phi_v3: controller.accel_term(),
        });
        controller.advance(x, cfg.dt);
        x += (u + d) * cfg.dt;
        if !x.is_finite() {
            return Err(Error::NonFinite("siso state"));
        }
    }
    let t_end = steps as f64 * cfg.dt;
    out.push(SisoRecord {
        t: t_end,
        x,
        u: f64::NAN,
        d: f64::NAN,
        lv: controller.gain(),
        rv: controller.second_layer_gain(),
        phi_v3: controller.accel_term(),
    });
    Ok(out)
}

/// Runs the adaptive super-twisting demo with `params`.
pub fn run_siso_demo(params: AirspeedSmcParams, cfg: &SisoConfig) -> Result<Vec<SisoRecord>> {
    params.validate("siso")?;
    let mut c = AgstController::new(params);
    run_siso(&mut c, cfg)
}
