//! Scalar generalized super-twisting thrust controller on the integral
//! sliding manifold
//! `S_V = e_V − ∫ (−g_v − V̇_d + (cos α cos β T_xa − D)/m) dτ`.
//!
//! Both gains scale with the single adaptive `L_v`. The acceleration term
//! `φ_v3 = −L̇_v φ_v1 / (2 L_v φ'_v1)` compensates for the gain motion.

use serde::{Deserialize, Serialize};

use super::{dual_layer_step, low_pass_step, RLaw};
use crate::error::{Error, Result};
use crate::math::{gst_phi1_prime_scalar, gst_phi1_scalar, gst_phi2_scalar, sign};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AirspeedSmcParams {
    pub k1v: f64,
    pub k2v: f64,
    pub lv0: f64,
    /// `l_v`, with `0 < 1/l_v < 1`; the default is 0.99.
    pub lv: f64,
    pub eps_v: f64,
    pub lambda_v0: f64,
    pub r_bar_v: f64,
    pub e_b: f64,
    pub r_mv: f64,
    pub tau_f: f64,
    pub l_floor: f64,
    /// `|S_V|` below which `φ_v3` is taken as its limit 0.
    pub s_deadzone: f64,
    pub r_law: RLaw,
    /// Include `φ_v3` in the thrust law.
    pub accel_term: bool,
}

impl Default for AirspeedSmcParams {
    fn default() -> Self {
        Self {
            k1v: 5.0,
            k2v: 3.0,
            lv0: 0.55,
            lv: 0.99,
            eps_v: 0.05,
            lambda_v0: 0.01,
            r_bar_v: 5.0,
            e_b: 0.3,
            r_mv: 0.5,
            tau_f: 0.01,
            l_floor: 0.01,
            s_deadzone: 1e-6,
            r_law: RLaw::Rate,
            accel_term: true,
        }
    }
}

impl AirspeedSmcParams {
    /// Gains used for the scalar demo plant `ẋ = u + d(t)`.
    pub fn siso_demo() -> Self {
        Self {
            k1v: 1.35,
            k2v: 1.26,
            lv0: 0.26,
            lv: 0.99,
            eps_v: 0.05,
            lambda_v0: 0.38,
            r_bar_v: 7.0,
            e_b: 0.15,
            r_mv: 0.6,
            ..Self::default()
        }
    }

    pub fn validate(&self, section: &str) -> Result<()> {
        let positive = [
            ("k1v", self.k1v),
            ("k2v", self.k2v),
            ("lv0", self.lv0),
            ("lv", self.lv),
            ("eps_v", self.eps_v),
            ("lambda_v0", self.lambda_v0),
            ("r_bar_v", self.r_bar_v),
            ("e_b", self.e_b),
            ("r_mv", self.r_mv),
            ("tau_f", self.tau_f),
            ("l_floor", self.l_floor),
            ("s_deadzone", self.s_deadzone),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{section}.{k}"), "must be > 0"));
            }
        }
        if self.l_floor > self.lv0 {
            return Err(Error::config(format!("{section}.l_floor"), "must not exceed lv0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirspeedSmcState {
    pub z_v: f64,
    pub delta_lv: f64,
    pub r_v: f64,
    pub u_eqv_bar: f64,
    /// `∫ (−g_v − V̇_d + (cos α cos β T_xa − D)/m) dτ`
    pub ism_integral: f64,
    /// `ΔL̇_v` applied over the last step.
    pub lv_dot_last: f64,
}

impl AirspeedSmcState {
    pub fn new(params: &AirspeedSmcParams) -> Self {
        Self {
            z_v: 0.0,
            delta_lv: 0.0,
            r_v: params.r_mv,
            u_eqv_bar: 0.0,
            ism_integral: 0.0,
            lv_dot_last: 0.0,
        }
    }

    pub fn gain_lv(&self, params: &AirspeedSmcParams) -> f64 {
        params.lv0 + self.delta_lv
    }

    /// `ē_v = 0.5 L_v − |ū_eqv| / l_v − ε_v`
    pub fn e_bar_v(&self, params: &AirspeedSmcParams) -> f64 {
        0.5 * self.gain_lv(params) - self.u_eqv_bar.abs() / params.lv - params.eps_v
    }

    /// `ΔL̇_v` the gain law will apply over the coming step.
    pub fn commanded_lv_rate(&self, params: &AirspeedSmcParams, dt: f64) -> f64 {
        adapt_lv(self, params, dt).3
    }
}

pub fn sliding_sv(e_v: f64, ism_integral: f64) -> f64 {
    e_v - ism_integral
}

/// `φ_v3 = −L̇_v φ_v1 / (2 L_v φ'_v1)`, zero on the manifold or when the gain
/// is at rest.
pub fn phi_v3(sliding: f64, gain_lv: f64, lv_rate: f64, deadzone: f64) -> f64 {
    if sliding.abs() < deadzone || lv_rate == 0.0 {
        return 0.0;
    }
    -lv_rate * gst_phi1_scalar(sliding) / (2.0 * gain_lv * gst_phi1_prime_scalar(sliding))
}

/// Normalized thrust command before the `m / (cos α cos β)` scaling:
/// `−k₁ᵥ √(L_v/2) φ_v1 + z_v + φ_v3`.
pub fn normalized_control(state: &AirspeedSmcState, sliding: f64, lv_rate: f64, params: &AirspeedSmcParams) -> f64 {
    let lv = state.gain_lv(params);
    let accel = if params.accel_term {
        phi_v3(sliding, lv, lv_rate, params.s_deadzone)
    } else {
        0.0
    };
    -params.k1v * (lv / 2.0).sqrt() * gst_phi1_scalar(sliding) + state.z_v + accel
}

/// `T_xs = m / (cos α cos β) · (−k₁ᵥ √(L_v/2) φ_v1 + z_v + φ_v3)`
pub fn control_txs(
    state: &AirspeedSmcState,
    sliding: f64,
    thrust_projection: f64,
    mass: f64,
    lv_rate: f64,
    params: &AirspeedSmcParams,
) -> f64 {
    mass / thrust_projection * normalized_control(state, sliding, lv_rate, params)
}

/// One step of the dual-layer law. Returns `(ΔL_v, r_v, L_v, ΔL̇_v)`.
pub fn adapt_lv(state: &AirspeedSmcState, params: &AirspeedSmcParams, dt: f64) -> (f64, f64, f64, f64) {
    let step = dual_layer_step(
        state.e_bar_v(params),
        state.delta_lv,
        params.lv0,
        params.l_floor,
        state.r_v,
        params.lambda_v0,
        params.r_bar_v,
        params.e_b,
        params.r_mv,
        params.r_law,
        dt,
    );
    (step.delta_l, step.r, params.lv0 + step.delta_l, step.delta_l_rate)
}

/// Low-pass filter of `(k₂ᵥ L_v / 2)⌈S_V⌋⁰`.
pub fn filter_u_eqv(u_eqv_bar: f64, sliding: f64, gain_lv: f64, params: &AirspeedSmcParams, dt: f64) -> f64 {
    low_pass_step(u_eqv_bar, params.k2v * gain_lv / 2.0 * sign(sliding), params.tau_f, dt)
}

impl AirspeedSmcState {
    /// Forward-Euler step of `z_v`, `L_v`, `r_v` and the filter.
    pub fn advance(&mut self, sliding: f64, params: &AirspeedSmcParams, dt: f64) {
        let lv = self.gain_lv(params);
        let z_v = self.z_v - params.k2v * lv * gst_phi2_scalar(sliding) * dt;
        let (delta_lv, r_v, _, rate) = adapt_lv(self, params, dt);
        self.u_eqv_bar = filter_u_eqv(self.u_eqv_bar, sliding, lv, params, dt);
        self.z_v = z_v;
        self.delta_lv = delta_lv;
        self.r_v = r_v;
        self.lv_dot_last = rate;
    }
}
