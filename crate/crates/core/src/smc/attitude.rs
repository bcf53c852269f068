//! Multivariable generalized super-twisting moment controller on the
//! integral sliding manifold
//! `S = z_Θ − ∫ (R_Θ I⁻¹ M_a − Θ̈_d) dτ`.
//!
//! The first-order gain `k₁` grows while the manifold is not reached. The
//! integral gain `k₂₀ L` follows a dual-layer law driven by the filtered
//! equivalent control.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{dual_layer_step, low_pass_step, RLaw};
use crate::dynamics::{com_attitude_g, rotation_r_theta, UavParams, UavState};
use crate::error::{Error, Result};
use crate::math::{gst_phi1, gst_phi2, msign};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttitudeSmcParams {
    pub k20: f64,
    pub kappa1: f64,
    pub kappa0: f64,
    pub l0: f64,
    /// Product `a·l`, in `(0, 1)`.
    pub al: f64,
    pub eps: f64,
    pub lambda0: f64,
    pub r_bar: f64,
    pub e_bar: f64,
    pub r_m: f64,
    /// Equivalent-control filter time constant, s.
    pub tau_f: f64,
    pub k1_init: f64,
    pub l_floor: f64,
    /// `‖S‖` below which `k₁` is frozen.
    pub s_deadzone: f64,
    pub r_law: RLaw,
}

impl Default for AttitudeSmcParams {
    fn default() -> Self {
        Self {
            k20: 1.0,
            kappa1: 8.0,
            kappa0: 0.2,
            l0: 0.3,
            al: 0.99,
            eps: 0.01,
            lambda0: 0.01,
            r_bar: 10.0,
            e_bar: 0.1,
            r_m: 0.6,
            tau_f: 0.01,
            k1_init: 1.0,
            l_floor: 0.01,
            s_deadzone: 1e-6,
            r_law: RLaw::Rate,
        }
    }
}

impl AttitudeSmcParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k20", self.k20),
            ("kappa1", self.kappa1),
            ("l0", self.l0),
            ("eps", self.eps),
            ("lambda0", self.lambda0),
            ("r_bar", self.r_bar),
            ("r_m", self.r_m),
            ("tau_f", self.tau_f),
            ("k1_init", self.k1_init),
            ("l_floor", self.l_floor),
            ("s_deadzone", self.s_deadzone),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("attitude_smc.{k}"), "must be > 0"));
            }
        }
        if !(self.kappa0 > 0.0 && self.kappa0 < 1.0) {
            return Err(Error::config("attitude_smc.kappa0", "κ₀ ∈ (0,1) required"));
        }
        if !(self.e_bar > 0.0 && self.e_bar < 1.0) {
            return Err(Error::config("attitude_smc.e_bar", "ē ∈ (0,1) required"));
        }
        if !(self.al > 0.0 && self.al < 1.0) {
            return Err(Error::config("attitude_smc.al", "0 < a·l < 1 required"));
        }
        if self.l_floor > self.l0 {
            return Err(Error::config("attitude_smc.l_floor", "must not exceed l0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeSmcState {
    /// Auxiliary super-twisting integrator.
    pub z1: Vector3<f64>,
    pub k1: f64,
    /// `ΔL`, so that `L = L₀ + ΔL`.
    pub delta_l: f64,
    pub r: f64,
    /// Filtered equivalent control.
    pub u_eq_bar: Vector3<f64>,
    /// `∫ (R_Θ I⁻¹ M_a − Θ̈_d) dτ`, advanced by the simulation together with
    /// the plant.
    pub ism_integral: Vector3<f64>,
}

impl AttitudeSmcState {
    pub fn new(params: &AttitudeSmcParams) -> Self {
        Self {
            z1: Vector3::zeros(),
            k1: params.k1_init,
            delta_l: 0.0,
            r: params.r_m,
            u_eq_bar: Vector3::zeros(),
            ism_integral: Vector3::zeros(),
        }
    }

    pub fn gain_l(&self, params: &AttitudeSmcParams) -> f64 {
        params.l0 + self.delta_l
    }

    /// `e_Δ = 0.5 L − ‖ū_eq‖ / (a l) − ε`
    pub fn e_delta(&self, params: &AttitudeSmcParams) -> f64 {
        0.5 * self.gain_l(params) - self.u_eq_bar.norm() / params.al - params.eps
    }
}

/// `S = z_Θ − ∫(…)`
pub fn sliding_s(z_theta: &Vector3<f64>, ism_integral: &Vector3<f64>) -> Vector3<f64> {
    z_theta - ism_integral
}

/// `M_s = I R_Θ⁻¹ (−k₁ Φ₁(S) + z₁ − G(z_Θ))`
pub fn control_ms(
    uav: &UavParams,
    s: &UavState,
    smc: &AttitudeSmcState,
    sliding: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    let r_theta = rotation_r_theta(&s.euler, uav.euler_convention, uav.theta_margin)?;
    let r_inv = r_theta.try_inverse().ok_or(Error::PitchSingularity {
        theta: s.euler[1],
        margin: uav.theta_margin,
    })?;
    let g = com_attitude_g(uav, s)?;
    Ok(uav.inertia() * r_inv * (-gst_phi1(sliding) * smc.k1 + smc.z1 - g))
}

/// `k̇₁ = κ₁‖S‖ + κ₀` outside the dead-zone, zero inside.
pub fn adapt_k1(k1: f64, sliding: &Vector3<f64>, params: &AttitudeSmcParams, dt: f64) -> f64 {
    let n = sliding.norm();
    if n > params.s_deadzone {
        k1 + (params.kappa1 * n + params.kappa0) * dt
    } else {
        k1
    }
}

/// One step of the dual-layer law for `L` and `r`. Returns the new
/// `(ΔL, r, L)`.
pub fn adapt_l(smc: &AttitudeSmcState, params: &AttitudeSmcParams, dt: f64) -> (f64, f64, f64) {
    let step = dual_layer_step(
        smc.e_delta(params),
        smc.delta_l,
        params.l0,
        params.l_floor,
        smc.r,
        params.lambda0,
        params.r_bar,
        params.e_bar,
        params.r_m,
        params.r_law,
        dt,
    );
    (step.delta_l, step.r, params.l0 + step.delta_l)
}

/// Low-pass filter of `(k₂₀ L / 2)⌈S⌋⁰`.
pub fn filter_u_eq(
    u_eq_bar: &Vector3<f64>,
    sliding: &Vector3<f64>,
    gain_l: f64,
    params: &AttitudeSmcParams,
    dt: f64,
) -> Vector3<f64> {
    let input = msign(sliding) * (params.k20 * gain_l / 2.0);
    Vector3::from_fn(|i, _| low_pass_step(u_eq_bar[i], input[i], params.tau_f, dt))
}

impl AttitudeSmcState {
    /// Forward-Euler step of `z₁`, `k₁`, `L`, `r` and the filter, every rate
    /// evaluated at the start of the step.
    pub fn advance(&mut self, sliding: &Vector3<f64>, params: &AttitudeSmcParams, dt: f64) {
        let l = self.gain_l(params);
        let z1 = self.z1 - gst_phi2(sliding) * (params.k20 * l * dt);
        let k1 = adapt_k1(self.k1, sliding, params, dt);
        let (delta_l, r, _) = adapt_l(self, params, dt);
        let u_eq_bar = filter_u_eq(&self.u_eq_bar, sliding, l, params, dt);
        self.z1 = z1;
        self.k1 = k1;
        self.delta_l = delta_l;
        self.r = r;
        self.u_eq_bar = u_eq_bar;
    }
}
