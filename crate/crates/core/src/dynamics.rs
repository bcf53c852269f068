//! Six-degree-of-freedom rigid-body plant and the control-oriented quantities
//! derived from it.
//!
//! Frames: `R_I` maps body-frame vectors into the inertial frame, so
//! `ṗ = R_I v`. The Euler-rate matrix `R_Θ` maps body rates to Euler-angle
//! rates. Two row layouts are available, see [`EulerConvention`].

use nalgebra::{Matrix3, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::disturbance::DisturbanceSample;
use crate::error::{Error, Result};
use crate::math::ZERO_TOL;

/// Row layout of the Euler-rate matrix `R_Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EulerConvention {
    /// Rows ordered `θ̇, ψ̇, φ̇`: `[0, cφ, −sφ]`, `[0, sφ/cθ, cφ/cθ]`, `[1, sφ tθ, cφ tθ]`.
    #[default]
    ThetaPsiPhi,
    /// Textbook ZYX kinematics: `[1, sφ tθ, cφ tθ]`, `[0, cφ, −sφ]`, `[0, sφ/cθ, cφ/cθ]`.
    Standard,
}

/// How the sideslip angle is computed from the body velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BetaConvention {
    /// `β = asin(u / v)`, longitudinal over lateral body velocity.
    LongitudinalOverLateral,
    /// `β = asin(v / V)`, lateral body velocity over airspeed.
    #[default]
    Standard,
}

/// Direction of the inertial z axis; gravity is `[0, 0, ∓g]` accordingly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InertialZ {
    /// Gravity vector `[0, 0, −g]`. Projecting it on the flight path gives
    /// `V̇ = … − g_v`, the sign used by the airspeed model.
    #[default]
    Up,
    /// Gravity vector `[0, 0, +g]` (NED).
    Down,
}

/// Aerodynamic force model `F` in the translational equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AeroModel {
    /// Drag `D = k_D V²` along `−v̂` only.
    Drag,
    /// Drag plus an ideal normal force that cancels every acceleration
    /// perpendicular to `v̂`, so `α` and `β` stay at their initial values.
    #[default]
    PathHold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UavParams {
    /// kg
    pub mass: f64,
    /// kg·m²
    pub ixx: f64,
    pub iyy: f64,
    pub izz: f64,
    pub ixz: f64,
    /// Magnitude of gravitational acceleration, m/s².
    pub gravity: f64,
    pub inertial_z: InertialZ,
    /// Quadratic drag coefficient `k_D`, N·s²/m².
    pub drag_coeff: f64,
    pub aero: AeroModel,
    pub euler_convention: EulerConvention,
    pub beta_convention: BetaConvention,
    /// Pitch keep-out band around ±π/2, rad.
    pub theta_margin: f64,
    /// Angle-of-attack / sideslip keep-out band around ±π/2, rad.
    pub flow_margin: f64,
    /// m/s
    pub min_airspeed: f64,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            mass: 1.56,
            ixx: 0.5528,
            iyy: 0.6335,
            izz: 1.0783,
            ixz: 0.0015,
            gravity: 9.81,
            inertial_z: InertialZ::Up,
            drag_coeff: 0.02,
            aero: AeroModel::PathHold,
            euler_convention: EulerConvention::ThetaPsiPhi,
            beta_convention: BetaConvention::Standard,
            theta_margin: 0.1,
            flow_margin: 0.05,
            min_airspeed: 0.1,
        }
    }
}

impl UavParams {
    pub fn inertia(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.ixx, 0.0, self.ixz, //
            0.0, self.iyy, 0.0, //
            self.ixz, 0.0, self.izz,
        )
    }

    pub fn inertia_inv(&self) -> Matrix3<f64> {
        // validated positive definite, so the inverse exists
        self.inertia().try_inverse().expect("inertia matrix must be invertible")
    }

    pub fn gravity_vector(&self) -> Vector3<f64> {
        match self.inertial_z {
            InertialZ::Up => Vector3::new(0.0, 0.0, -self.gravity),
            InertialZ::Down => Vector3::new(0.0, 0.0, self.gravity),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("uav.{key}"), "must be > 0"))
            }
        };
        pos("mass", self.mass)?;
        pos("gravity", self.gravity)?;
        pos("theta_margin", self.theta_margin)?;
        pos("flow_margin", self.flow_margin)?;
        pos("min_airspeed", self.min_airspeed)?;
        if !(self.drag_coeff.is_finite() && self.drag_coeff >= 0.0) {
            return Err(Error::config("uav.drag_coeff", "must be >= 0"));
        }
        // leading principal minors of the x-z coupled inertia
        let i = self.inertia();
        if !(i[(0, 0)] > 0.0 && i[(1, 1)] > 0.0 && i.determinant() > 0.0 && {
            self.ixx * self.izz - self.ixz * self.ixz > 0.0
        }) {
            return Err(Error::config("uav.inertia", "inertia matrix must be positive definite"));
        }
        Ok(())
    }
}

/// Full rigid-body state. Also used to carry its own time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UavState {
    /// Inertial position, m.
    pub position: Vector3<f64>,
    /// Body velocity `[u, v, w]`, m/s.
    pub velocity: Vector3<f64>,
    /// Euler angles `[φ, θ, ψ]`, rad.
    pub euler: Vector3<f64>,
    /// Body rates `[p, q, r]`, rad/s.
    pub rates: Vector3<f64>,
}

impl UavState {
    pub fn to_vector(&self) -> SVector<f64, 12> {
        let mut x = SVector::<f64, 12>::zeros();
        x.fixed_rows_mut::<3>(0).copy_from(&self.position);
        x.fixed_rows_mut::<3>(3).copy_from(&self.velocity);
        x.fixed_rows_mut::<3>(6).copy_from(&self.euler);
        x.fixed_rows_mut::<3>(9).copy_from(&self.rates);
        x
    }

    pub fn from_vector(x: &SVector<f64, 12>) -> Self {
        Self {
            position: x.fixed_rows::<3>(0).into(),
            velocity: x.fixed_rows::<3>(3).into(),
            euler: x.fixed_rows::<3>(6).into(),
            rates: x.fixed_rows::<3>(9).into(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|v| v.is_finite())
    }
}

/// Tracking errors of the two control-oriented models.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComState {
    /// `Θ − Θ_d`
    pub e_theta: Vector3<f64>,
    /// `ė_Θ`
    pub z_theta: Vector3<f64>,
    /// `V − V_d`
    pub e_v: f64,
}

/// Wind-axis quantities entering the airspeed model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirspeedQuantities {
    pub airspeed: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Attitude coupling term of the airspeed dynamics.
    pub g_v: f64,
    pub drag: f64,
}

impl AirspeedQuantities {
    /// `cos α cos β`
    pub fn thrust_projection(&self) -> f64 {
        self.alpha.cos() * self.beta.cos()
    }
}

fn check_pitch(theta: f64, margin: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() < std::f64::consts::FRAC_PI_2 - margin {
        Ok(())
    } else {
        Err(Error::PitchSingularity { theta, margin })
    }
}

/// Stacks the three kinematic rows in the order used by `conv`.
fn stack_rows(conv: EulerConvention, a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Matrix3<f64> {
    let rows = match conv {
        EulerConvention::ThetaPsiPhi => [b, c, a],
        EulerConvention::Standard => [a, b, c],
    };
    Matrix3::from_row_slice(&[
        rows[0][0], rows[0][1], rows[0][2], //
        rows[1][0], rows[1][1], rows[1][2], //
        rows[2][0], rows[2][1], rows[2][2],
    ])
}

/// Euler-rate matrix `R_Θ` with `Θ̇ = R_Θ ω`.
pub fn rotation_r_theta(euler: &Vector3<f64>, conv: EulerConvention, theta_margin: f64) -> Result<Matrix3<f64>> {
    let (phi, theta) = (euler[0], euler[1]);
    check_pitch(theta, theta_margin)?;
    let (sp, cp) = phi.sin_cos();
    let (ct, tt) = (theta.cos(), theta.tan());
    Ok(stack_rows(
        conv,
        [1.0, sp * tt, cp * tt],
        [0.0, cp, -sp],
        [0.0, sp / ct, cp / ct],
    ))
}

/// Time derivative of `R_Θ` along the Euler-rate vector `euler_dot`.
pub fn r_theta_dot(
    euler: &Vector3<f64>,
    euler_dot: &Vector3<f64>,
    conv: EulerConvention,
    theta_margin: f64,
) -> Result<Matrix3<f64>> {
    let (phi, theta) = (euler[0], euler[1]);
    check_pitch(theta, theta_margin)?;
    let (dphi, dtheta) = (euler_dot[0], euler_dot[1]);
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let tt = st / ct;
    let sec2 = 1.0 / (ct * ct);
    Ok(stack_rows(
        conv,
        [
            0.0,
            cp * tt * dphi + sp * sec2 * dtheta,
            -sp * tt * dphi + cp * sec2 * dtheta,
        ],
        [0.0, -sp * dphi, -cp * dphi],
        [
            0.0,
            cp / ct * dphi + sp * st * sec2 * dtheta,
            -sp / ct * dphi + cp * st * sec2 * dtheta,
        ],
    ))
}

/// Direction-cosine matrix `R_I` (body → inertial).
pub fn rotation_r_i(euler: &Vector3<f64>) -> Matrix3<f64> {
    let (sp, cp) = euler[0].sin_cos();
    let (st, ct) = euler[1].sin_cos();
    let (ss, cs) = euler[2].sin_cos();
    let r1 = st * cs * sp - ss * cp;
    let r2 = st * cs * cp + ss * sp;
    let r3 = st * ss * sp + cs * cp;
    let r4 = st * ss * cp - cs * sp;
    Matrix3::new(
        ct * cs,
        r1,
        r2, //
        ct * ss,
        r3,
        r4, //
        -st,
        ct * sp,
        ct * cp,
    )
}

/// State derivative of the disturbed rigid body.
///
/// `moment` and `thrust` are the applied control; `dist` adds the matched
/// moment, the unmatched Euler-rate term and the along-path airspeed
/// disturbance.
pub fn plant_derivative(
    params: &UavParams,
    s: &UavState,
    moment: &Vector3<f64>,
    thrust: f64,
    dist: &DisturbanceSample,
) -> Result<UavState> {
    let r_theta = rotation_r_theta(&s.euler, params.euler_convention, params.theta_margin)?;
    let r_i = rotation_r_i(&s.euler);
    let inertia = params.inertia();
    let omega = s.rates;
    let v = s.velocity;
    let m = params.mass;

    let speed = v.norm();
    let v_hat = if speed > ZERO_TOL { v / speed } else { Vector3::zeros() };

    let thrust_vec = Vector3::new(thrust, 0.0, 0.0);
    let gravity_body = r_i.transpose() * params.gravity_vector();
    let transport = omega.cross(&v);

    let drag = params.drag_coeff * speed * speed;
    let mut force = -v_hat * drag;
    if params.aero == AeroModel::PathHold && speed > ZERO_TOL {
        let other = thrust_vec + (gravity_body - transport) * m;
        force -= other - v_hat * v_hat.dot(&other);
    }

    let velocity_dot = (force + thrust_vec) / m + gravity_body - transport + v_hat * dist.d_v;
    let euler_dot = r_theta * omega + dist.d_u;
    let rates_dot = params.inertia_inv() * (moment + dist.d_m - omega.cross(&(inertia * omega)));

    Ok(UavState {
        position: r_i * v,
        velocity: velocity_dot,
        euler: euler_dot,
        rates: rates_dot,
    })
}

/// `G(z_Θ) = Ṙ_Θ ω − R_Θ I⁻¹ (ω × Iω)` with `Ṙ_Θ` taken along the nominal
/// Euler rate `R_Θ ω`.
pub fn com_attitude_g(params: &UavParams, s: &UavState) -> Result<Vector3<f64>> {
    let r_theta = rotation_r_theta(&s.euler, params.euler_convention, params.theta_margin)?;
    let omega = s.rates;
    let euler_dot = r_theta * omega;
    let r_dot = r_theta_dot(&s.euler, &euler_dot, params.euler_convention, params.theta_margin)?;
    let inertia = params.inertia();
    Ok(r_dot * omega - r_theta * params.inertia_inv() * omega.cross(&(inertia * omega)))
}

/// Airspeed, flow angles, attitude coupling `g_v` and drag.
pub fn airspeed_quantities(params: &UavParams, s: &UavState) -> Result<AirspeedQuantities> {
    let [u, v, w] = [s.velocity[0], s.velocity[1], s.velocity[2]];
    let airspeed = s.velocity.norm();
    // NaN airspeed fails this check too
    if airspeed.is_nan() || airspeed < params.min_airspeed {
        return Err(Error::LowAirspeed {
            airspeed,
            min: params.min_airspeed,
        });
    }
    let alpha = w.atan2(u);
    let beta_arg = match params.beta_convention {
        BetaConvention::Standard => v / airspeed,
        BetaConvention::LongitudinalOverLateral => u / v,
    };
    let beta = beta_arg.asin();
    let limit = std::f64::consts::FRAC_PI_2 - params.flow_margin;
    if !(alpha.abs() < limit && beta.abs() < limit) {
        return Err(Error::FlowAngleSingularity {
            alpha,
            beta,
            margin: params.flow_margin,
        });
    }
    let (phi, theta) = (s.euler[0], s.euler[1]);
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let g_v = params.gravity * (-ca * cb * st + sb * sp * ct + sa * cb * cp * ct);
    Ok(AirspeedQuantities {
        airspeed,
        alpha,
        beta,
        g_v,
        drag: params.drag_coeff * airspeed * airspeed,
    })
}
