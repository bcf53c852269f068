//! Comparison controllers and the plug-in interface the engine accepts.
//!
//! Only the FTSM-GST thrust law is implemented. The other baselines are
//! shipped as parameter records ([`LssAsosmParams`], [`ActaParams`],
//! [`AsosmParams`]) so external implementations of [`AirspeedController`] or
//! [`AttitudeController`] can be configured the same way.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::dynamics::{AirspeedQuantities, ComState, UavParams, UavState};
use crate::error::{Error, Result};
use crate::math::{gst_phi1_scalar, gst_phi2_scalar, sig};

/// What a controller sees at one step.
#[derive(Debug, Clone, Copy)]
pub struct ControlContext<'a> {
    pub t: f64,
    pub dt: f64,
    pub uav: &'a UavParams,
    pub state: &'a UavState,
    pub com: &'a ComState,
    pub airspeed: &'a AirspeedQuantities,
    pub euler_dd_ref: Vector3<f64>,
    pub airspeed_dot_ref: f64,
}

/// Thrust-channel controller with private memory. `thrust` is called once
/// per step and may advance its own state by `ctx.dt`.
pub trait AirspeedController: Send {
    fn name(&self) -> &str;
    fn thrust(&mut self, ctx: &ControlContext) -> Result<f64>;
}

/// Moment-channel controller with private memory.
pub trait AttitudeController: Send {
    fn name(&self) -> &str;
    fn moment(&mut self, ctx: &ControlContext) -> Result<Vector3<f64>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FtsmGstParams {
    pub k_s: f64,
    pub gamma_f1: f64,
    pub gamma_f2: f64,
    pub k1f: f64,
    pub k2f: f64,
}

impl Default for FtsmGstParams {
    fn default() -> Self {
        Self {
            k_s: 1.5,
            gamma_f1: 1.2,
            gamma_f2: 0.88,
            k1f: 4.0,
            k2f: 1.5,
        }
    }
}

impl FtsmGstParams {
    pub fn validate(&self) -> Result<()> {
        for (k, v) in [("k_s", self.k_s), ("k1f", self.k1f), ("k2f", self.k2f)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("ftsm_gst.{k}"), "must be > 0"));
            }
        }
        if !(self.gamma_f1.is_finite() && self.gamma_f1 >= 1.0) {
            return Err(Error::config("ftsm_gst.gamma_f1", "γ_f1 ≥ 1 required"));
        }
        if !(self.gamma_f2 > 0.0 && self.gamma_f2 < 1.0) {
            return Err(Error::config("ftsm_gst.gamma_f2", "γ_f2 ∈ (0,1) required"));
        }
        Ok(())
    }

    /// `⌈e⌋^{γ_f1} + ⌈e⌋^{γ_f2}`
    pub fn surface_integrand(&self, e_v: f64) -> f64 {
        sig(e_v, self.gamma_f1) + sig(e_v, self.gamma_f2)
    }
}

/// `S_vf = e_V + k_s ∫(⌈e_V⌋^{γ_f1} + ⌈e_V⌋^{γ_f2}) dτ`, with `integral`
/// holding the bare integral.
pub fn ftsm_surface(e_v: f64, integral: f64, params: &FtsmGstParams) -> f64 {
    e_v + params.k_s * integral
}

/// `T_x = m/(cos α cos β) · [D/m + g_v + V̇_d − k_s(…) − k₁f φ_f1 + z_f]`
pub fn ftsm_gst_thrust(
    z_f: f64,
    e_v: f64,
    surface: f64,
    params: &FtsmGstParams,
    uav: &UavParams,
    aq: &AirspeedQuantities,
    airspeed_dot_ref: f64,
) -> f64 {
    let m = uav.mass;
    let inner = aq.drag / m + aq.g_v + airspeed_dot_ref
        - params.k_s * params.surface_integrand(e_v)
        - params.k1f * gst_phi1_scalar(surface)
        + z_f;
    m / aq.thrust_projection() * inner
}

/// FTSM-GST thrust controller; surface integral and `z_f` advance with
/// forward Euler.
#[derive(Debug, Clone, Default)]
pub struct FtsmGst {
    pub params: FtsmGstParams,
    pub integral: f64,
    pub z_f: f64,
}

impl FtsmGst {
    pub fn new(params: FtsmGstParams) -> Self {
        Self {
            params,
            integral: 0.0,
            z_f: 0.0,
        }
    }

    pub fn surface(&self, e_v: f64) -> f64 {
        ftsm_surface(e_v, self.integral, &self.params)
    }
}

impl AirspeedController for FtsmGst {
    fn name(&self) -> &str {
        "ftsm_gst"
    }

    fn thrust(&mut self, ctx: &ControlContext) -> Result<f64> {
        let e = ctx.com.e_v;
        let s = self.surface(e);
        let tx = ftsm_gst_thrust(
            self.z_f,
            e,
            s,
            &self.params,
            ctx.uav,
            ctx.airspeed,
            ctx.airspeed_dot_ref,
        );
        self.integral += self.params.surface_integrand(e) * ctx.dt;
        self.z_f -= self.params.k2f * gst_phi2_scalar(s) * ctx.dt;
        Ok(tx)
    }
}

/// Parameter record for the LSS-ASOSM attitude baseline. The algorithm is
/// not implemented here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LssAsosmParams {
    pub lambda_l: f64,
    pub k: f64,
    pub mu: f64,
    pub k_min: f64,
    pub epsilon: f64,
}

impl Default for LssAsosmParams {
    fn default() -> Self {
        Self {
            lambda_l: 1.0,
            k: 15.0,
            mu: 0.005,
            k_min: 0.8,
            epsilon: 1.35,
        }
    }
}

/// Parameter record for the ACTA attitude baseline (not implemented).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActaParams {
    pub l: f64,
    pub k1t: f64,
    pub k2t: f64,
    pub k3t: f64,
    pub k4t: f64,
}

impl Default for ActaParams {
    fn default() -> Self {
        Self {
            l: 5.0,
            k1t: 1.1,
            k2t: 1.1,
            k3t: 1.2,
            k4t: 1.2,
        }
    }
}

/// Parameter record for the ASOSM airspeed baseline (not implemented).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AsosmParams {
    pub k_v: f64,
    pub mu: f64,
    pub k_v_min: f64,
    pub epsilon_v: f64,
}

impl Default for AsosmParams {
    fn default() -> Self {
        Self {
            k_v: 12.0,
            mu: 0.01,
            k_v_min: 0.8,
            epsilon_v: 1.0,
        }
    }
}
