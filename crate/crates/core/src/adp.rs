//! Actor-critic approximation of the optimal controller for the combined
//! sliding-mode dynamics
//!
//! ```text
//! Ė_V = F_V + G_V U_a − X_d,   E_V = [e_Θ; z_Θ; e_V] ∈ R⁷,   U_a = [M_a; T_xa] ∈ R⁴
//! ```
//!
//! The value function is split as `β_w‖E_V‖² + Wᵀσ_w(E_V)` with a fixed
//! 35-term polynomial basis. The critic weights follow normalized gradient
//! descent on the Bellman residual; the actor weights follow the stabilized
//! tuning law with the indicator term that removes the need for an initial
//! stabilizing policy.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3, Vector4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{rotation_r_theta, AirspeedQuantities, ComState, UavParams, UavState};
use crate::error::{Error, Result};
use crate::math::min_eigenvalue_spd;

/// Number of basis functions.
pub const N_NEURONS: usize = 35;

pub type Vec7 = SVector<f64, 7>;
pub type VecN = SVector<f64, N_NEURONS>;
pub type Jacobian = SMatrix<f64, N_NEURONS, 7>;

// Exponents of [e_Θ1, e_Θ2, e_Θ3, z_Θ1, z_Θ2, z_Θ3, e_V] for each monomial.
#[rustfmt::skip]
const MONOMIALS: [[u8; 7]; N_NEURONS] = [
    [2,0,0, 0,0,0, 0], // e1²
    [1,1,0, 0,0,0, 0], // e1 e2
    [0,2,0, 0,0,0, 0], // e2²
    [1,0,1, 0,0,0, 0], // e1 e3
    [0,0,2, 0,0,0, 0], // e3²
    [0,1,1, 0,0,0, 0], // e2 e3
    [0,0,0, 2,0,0, 0], // z1²
    [0,0,0, 1,1,0, 0], // z1 z2
    [0,0,0, 0,2,0, 0], // z2²
    [0,0,0, 1,0,1, 0], // z1 z3
    [0,0,0, 0,0,2, 0], // z3²
    [0,0,0, 0,1,1, 0], // z2 z3
    [3,0,0, 1,0,0, 0], // e1³ z1
    [0,3,0, 0,1,0, 0], // e2³ z2
    [0,0,3, 0,0,1, 0], // e3³ z3
    [1,0,0, 1,1,0, 0], // e1 z1 z2
    [0,1,0, 0,1,1, 0], // e2 z2 z3
    [0,0,1, 1,0,1, 0], // e3 z3 z1
    [1,0,0, 0,1,0, 0], // e1 z2
    [1,0,0, 0,0,1, 0], // e1 z3
    [0,1,0, 1,0,0, 0], // e2 z1
    [0,1,0, 0,0,1, 0], // e2 z3
    [0,0,1, 1,0,0, 0], // e3 z1
    [0,0,1, 0,1,0, 0], // e3 z2
    [0,1,1, 3,0,0, 0], // z1³ e3 e2
    [1,0,1, 0,3,0, 0], // z2³ e1 e3
    [1,1,0, 0,0,3, 0], // z3³ e1 e2
    [1,0,0, 3,0,0, 0], // e1 z1³
    [0,1,0, 0,3,0, 0], // e2 z2³
    [0,0,1, 0,0,3, 0], // e3 z3³
    [0,0,0, 0,0,0, 2], // e_V²
    [1,0,0, 0,0,0, 1], // e_V e1
    [0,1,0, 0,0,0, 1], // e_V e2
    [3,0,0, 0,0,0, 1], // e_V e1³
    [0,3,0, 0,0,0, 1], // e_V e2³
];

fn ipow(x: f64, p: u8) -> f64 {
    match p {
        0 => 1.0,
        1 => x,
        2 => x * x,
        3 => x * x * x,
        _ => x.powi(p as i32),
    }
}

/// Activation vector `σ_w(E_V)`.
pub fn sigma_w(e: &Vec7) -> VecN {
    VecN::from_fn(|k, _| (0..7).map(|i| ipow(e[i], MONOMIALS[k][i])).product())
}

/// Jacobian `∂σ_w/∂E_V`, 35 × 7.
pub fn grad_sigma_w(e: &Vec7) -> Jacobian {
    Jacobian::from_fn(|k, j| {
        let p = MONOMIALS[k][j];
        if p == 0 {
            return 0.0;
        }
        let others: f64 = (0..7)
            .filter(|&i| i != j)
            .map(|i| ipow(e[i], MONOMIALS[k][i]))
            .product();
        p as f64 * ipow(e[j], p - 1) * others
    })
}

/// Matrix of either a scalar multiple of the identity or an explicit
/// diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Diagonal {
    Scalar(f64),
    Entries(Vec<f64>),
}

impl Diagonal {
    fn to_vec(&self, n: usize, key: &str) -> Result<Vec<f64>> {
        match self {
            Diagonal::Scalar(s) => Ok(vec![*s; n]),
            Diagonal::Entries(v) if v.len() == n => Ok(v.clone()),
            Diagonal::Entries(v) => Err(Error::config(key, format!("expected {n} entries, got {}", v.len()))),
        }
    }
}

impl std::fmt::Display for Diagonal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagonal::Scalar(s) => write!(f, "{s:?}"),
            Diagonal::Entries(v) => write!(f, "{v:?}"),
        }
    }
}

/// Lyapunov candidate `Ψ` used by the actor's stabilizing term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Psi {
    /// `½‖E_V‖²`
    #[default]
    Quadratic,
    /// `½ Σ wᵢ E_i²`
    Weighted { weights: [f64; 7] },
}

impl Psi {
    pub fn value_and_grad(&self, e: &Vec7) -> (f64, Vec7) {
        match self {
            Psi::Quadratic => (0.5 * e.norm_squared(), *e),
            Psi::Weighted { weights } => {
                let w = Vec7::from_column_slice(weights);
                let g = e.component_mul(&w);
                (0.5 * e.dot(&g), g)
            }
        }
    }
}

/// `(Ψ, ∇Ψ)` of the default quadratic candidate.
pub fn psi_and_grad(e: &Vec7) -> (f64, Vec7) {
    Psi::Quadratic.value_and_grad(e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdpParams {
    pub beta_w: f64,
    /// State weight `Q_E`, row-major 7 × 7.
    pub q_e: [[f64; 7]; 7],
    /// Diagonal of the control weight `R_u`.
    pub r_u: [f64; 4],
    /// Critic learning rate.
    pub c0: f64,
    /// Actor learning rate.
    pub a0: f64,
    /// Diagonal of `Γ_a`.
    pub gamma_a: Diagonal,
    /// `Γ_b`.
    pub gamma_b: Diagonal,
    /// Initial weights are drawn uniformly from `(0, init_weight_max]`.
    pub init_weight_max: f64,
    pub psi: Psi,
}

impl Default for AdpParams {
    fn default() -> Self {
        let mut q_e = [[0.0; 7]; 7];
        for (i, row) in q_e.iter_mut().enumerate() {
            row[i] = 1.5;
        }
        Self {
            beta_w: 0.5,
            q_e,
            r_u: [1.2, 1.23, 1.0, 2.2],
            c0: 1.0,
            a0: 1.5,
            gamma_a: Diagonal::Scalar(5.0),
            gamma_b: Diagonal::Scalar(0.1),
            init_weight_max: 2.0,
            psi: Psi::Quadratic,
        }
    }
}

/// Parameters resolved into matrices, built once per run.
#[derive(Debug, Clone)]
pub struct AdpModel {
    pub beta_w: f64,
    pub q_e: SMatrix<f64, 7, 7>,
    pub r_u: Vector4<f64>,
    pub r_u_inv: Vector4<f64>,
    pub c0: f64,
    pub a0: f64,
    pub gamma_a: VecN,
    pub gamma_b: VecN,
    pub psi: Psi,
}

impl AdpParams {
    pub fn validate(&self) -> Result<()> {
        for (k, v) in [
            ("beta_w", self.beta_w),
            ("c0", self.c0),
            ("a0", self.a0),
            ("init_weight_max", self.init_weight_max),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("adp.{k}"), "must be > 0"));
            }
        }
        if self.r_u.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::config("adp.r_u", "R_u must be positive definite"));
        }
        let q = nalgebra::DMatrix::from_fn(7, 7, |i, j| self.q_e[i][j]);
        match min_eigenvalue_spd(&q) {
            Ok(l) if l > 0.0 => {}
            Ok(_) => return Err(Error::config("adp.q_e", "Q_E must be positive definite")),
            Err(_) => return Err(Error::config("adp.q_e", "Q_E must be symmetric")),
        }
        let ga = self.gamma_a.to_vec(N_NEURONS, "adp.gamma_a")?;
        if ga.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::config("adp.gamma_a", "Γ_a must be positive definite"));
        }
        let gb = self.gamma_b.to_vec(N_NEURONS, "adp.gamma_b")?;
        if gb.iter().any(|g| !g.is_finite()) {
            return Err(Error::config("adp.gamma_b", "must be finite"));
        }
        if let Psi::Weighted { weights } = &self.psi {
            if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::config("adp.psi.weights", "must be > 0"));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> Result<AdpModel> {
        self.validate()?;
        let r_u = Vector4::from_column_slice(&self.r_u);
        Ok(AdpModel {
            beta_w: self.beta_w,
            q_e: SMatrix::<f64, 7, 7>::from_fn(|i, j| self.q_e[i][j]),
            r_u,
            r_u_inv: r_u.map(|r| 1.0 / r),
            c0: self.c0,
            a0: self.a0,
            gamma_a: VecN::from_vec(self.gamma_a.to_vec(N_NEURONS, "adp.gamma_a")?),
            gamma_b: VecN::from_vec(self.gamma_b.to_vec(N_NEURONS, "adp.gamma_b")?),
            psi: self.psi.clone(),
        })
    }
}

/// Terms of the combined sliding-mode dynamics at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedError {
    pub e_v: Vec7,
    pub f_v: Vec7,
    pub g_v: SMatrix<f64, 7, 4>,
    pub x_d: Vec7,
}

impl CombinedError {
    /// `F_V + G_V U_a − X_d`
    pub fn dynamics(&self, u_a: &Vector4<f64>) -> Vec7 {
        self.f_v + self.g_v * u_a - self.x_d
    }

    /// `A = G_V R_u⁻¹ G_Vᵀ`
    pub fn a_matrix(&self, model: &AdpModel) -> SMatrix<f64, 7, 7> {
        let scaled = SMatrix::<f64, 7, 4>::from_fn(|i, j| self.g_v[(i, j)] * model.r_u_inv[j]);
        scaled * self.g_v.transpose()
    }
}

/// Builds `E_V`, `F_V`, `G_V`, `X_d` from the plant state and tracking errors.
pub fn assemble_combined(
    uav: &UavParams,
    s: &UavState,
    com: &ComState,
    euler_dd_ref: &Vector3<f64>,
    airspeed_dot_ref: f64,
    aq: &AirspeedQuantities,
) -> Result<CombinedError> {
    let r_theta = rotation_r_theta(&s.euler, uav.euler_convention, uav.theta_margin)?;
    let b: Matrix3<f64> = r_theta * uav.inertia_inv();
    let mut e_v = Vec7::zeros();
    e_v.fixed_rows_mut::<3>(0).copy_from(&com.e_theta);
    e_v.fixed_rows_mut::<3>(3).copy_from(&com.z_theta);
    e_v[6] = com.e_v;

    let mut f_v = Vec7::zeros();
    f_v.fixed_rows_mut::<3>(0).copy_from(&com.z_theta);
    f_v[6] = -aq.drag / uav.mass - aq.g_v;

    let mut g_v = SMatrix::<f64, 7, 4>::zeros();
    g_v.fixed_view_mut::<3, 3>(3, 0).copy_from(&b);
    g_v[(6, 3)] = aq.thrust_projection() / uav.mass;

    let mut x_d = Vec7::zeros();
    x_d.fixed_rows_mut::<3>(3).copy_from(euler_dd_ref);
    x_d[6] = airspeed_dot_ref;

    Ok(CombinedError { e_v, f_v, g_v, x_d })
}

/// `V̂_a = β_w‖E_V‖² + Ŵ_cᵀσ_w(E_V)`
pub fn value_hat(e: &Vec7, w_c: &VecN, beta_w: f64) -> f64 {
    beta_w * e.norm_squared() + w_c.dot(&sigma_w(e))
}

/// `2β_w E_V + ∇σ_wᵀ W`
fn value_gradient(e: &Vec7, jac: &Jacobian, w: &VecN, beta_w: f64) -> Vec7 {
    e * (2.0 * beta_w) + jac.tr_mul(w)
}

/// `Û_a = −½ R_u⁻¹ G_Vᵀ (2β_w E_V + ∇σ_wᵀ Ŵ_a)`; components `[M_a; T_xa]`.
pub fn control_ua_hat(comb: &CombinedError, w_a: &VecN, model: &AdpModel) -> Vector4<f64> {
    let jac = grad_sigma_w(&comb.e_v);
    control_from_jacobian(comb, &jac, w_a, model)
}

fn control_from_jacobian(comb: &CombinedError, jac: &Jacobian, w_a: &VecN, model: &AdpModel) -> Vector4<f64> {
    let grad = value_gradient(&comb.e_v, jac, w_a, model.beta_w);
    -(comb.g_v.tr_mul(&grad)).component_mul(&model.r_u_inv) * 0.5
}

/// Bellman residual `Δ_B = (2β_w E_V + ∇σ_wᵀŴ_c)ᵀ(F_V + G_V Û_a − X_d) + E_VᵀQ_E E_V + Û_aᵀR_u Û_a`.
pub fn hjb_residual(comb: &CombinedError, w_c: &VecN, u_a: &Vector4<f64>, model: &AdpModel) -> f64 {
    let jac = grad_sigma_w(&comb.e_v);
    residual_from_jacobian(comb, &jac, w_c, u_a, model)
}

fn residual_from_jacobian(
    comb: &CombinedError,
    jac: &Jacobian,
    w_c: &VecN,
    u_a: &Vector4<f64>,
    model: &AdpModel,
) -> f64 {
    let grad = value_gradient(&comb.e_v, jac, w_c, model.beta_w);
    grad.dot(&comb.dynamics(u_a)) + comb.e_v.dot(&(model.q_e * comb.e_v)) + u_a.dot(&u_a.component_mul(&model.r_u))
}

/// `Π(Û_a)`: 0 when `∇Ψᵀ(F_V + G_V Û_a − X_d) < 0`, 1 otherwise.
pub fn pi_indicator(comb: &CombinedError, u_a: &Vector4<f64>, grad_psi: &Vec7) -> f64 {
    if grad_psi.dot(&comb.dynamics(u_a)) < 0.0 {
        0.0
    } else {
        1.0
    }
}

/// Regressor `m_w = ∇σ_w (F_V + G_V Û_a − X_d)`.
pub fn regressor(comb: &CombinedError, jac: &Jacobian, u_a: &Vector4<f64>) -> VecN {
    jac * comb.dynamics(u_a)
}

/// Critic weight rate `Ŵ̇_c = −c₀ m_w/(1 + m_wᵀm_w)² · Δ_B`.
pub fn critic_rate(comb: &CombinedError, w_c: &VecN, u_a: &Vector4<f64>, model: &AdpModel) -> VecN {
    let jac = grad_sigma_w(&comb.e_v);
    let m = regressor(comb, &jac, u_a);
    let delta_b = residual_from_jacobian(comb, &jac, w_c, u_a, model);
    let denom = 1.0 + m.norm_squared();
    m * (-model.c0 * delta_b / (denom * denom))
}

/// Forward-Euler step of the critic law.
pub fn critic_update(w_c: &VecN, comb: &CombinedError, u_a: &Vector4<f64>, model: &AdpModel, dt: f64) -> VecN {
    w_c + critic_rate(comb, w_c, u_a, model) * dt
}

/// Actor weight rate
///
/// ```text
/// Ŵ̇_a = −a₀[(Γ_a Ŵ_a − Γ_b (m_{1w}ᵀŴ_c)) − ¼ (∇σ_w A ∇σ_wᵀ Ŵ_a)(m̄_wᵀŴ_c)]
///        + (a₀/2) Π ∇σ_w A ∇Ψ
/// ```
///
/// The bilinear term is read as `D₁ Ŵ_a · (m̄_wᵀŴ_c)` with
/// `D₁ = ∇σ_w A ∇σ_wᵀ`, and `Γ_b` multiplies the scalar `m_{1w}ᵀŴ_c`
/// entrywise; these are the readings that produce a 35-vector.
pub fn actor_rate(w_a: &VecN, w_c: &VecN, comb: &CombinedError, model: &AdpModel, grad_psi: &Vec7) -> VecN {
    let jac = grad_sigma_w(&comb.e_v);
    let u_a = control_from_jacobian(comb, &jac, w_a, model);
    actor_rate_with(w_a, w_c, comb, &jac, &u_a, model, grad_psi)
}

fn actor_rate_with(
    w_a: &VecN,
    w_c: &VecN,
    comb: &CombinedError,
    jac: &Jacobian,
    u_a: &Vector4<f64>,
    model: &AdpModel,
    grad_psi: &Vec7,
) -> VecN {
    let m = regressor(comb, jac, u_a);
    let s = 1.0 + m.norm_squared();
    let m1_wc = m.dot(w_c) / s;
    let mbar_wc = m.dot(w_c) / (s * s);
    let a = comb.a_matrix(model);
    let d1_wa = jac * (a * jac.tr_mul(w_a));
    let pi = pi_indicator(comb, u_a, grad_psi);
    let decay = w_a.component_mul(&model.gamma_a) - model.gamma_b * m1_wc - d1_wa * (0.25 * mbar_wc);
    let stabilizer = jac * (a * grad_psi) * (0.5 * model.a0 * pi);
    -decay * model.a0 + stabilizer
}

/// Forward-Euler step of the actor law.
pub fn actor_update(w_a: &VecN, w_c: &VecN, comb: &CombinedError, model: &AdpModel, grad_psi: &Vec7, dt: f64) -> VecN {
    w_a + actor_rate(w_a, w_c, comb, model, grad_psi) * dt
}

/// Critic and actor weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AdpState {
    pub w_c: VecN,
    pub w_a: VecN,
}

impl AdpState {
    /// Both weight vectors drawn independently and uniformly from
    /// `(0, max]`.
    pub fn random<R: Rng>(rng: &mut R, max: f64) -> Self {
        // 1 − U[0,1) lies in (0,1]
        let mut draw = || VecN::from_fn(|_, _| (1.0 - rng.gen::<f64>()) * max);
        let w_c = draw();
        let w_a = draw();
        Self { w_c, w_a }
    }

    pub fn zeros() -> Self {
        Self {
            w_c: VecN::zeros(),
            w_a: VecN::zeros(),
        }
    }
}

/// Per-step outputs of the actor-critic controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdpStep {
    pub u_a: Vector4<f64>,
    pub bellman_residual: f64,
    pub pi: f64,
    pub critic_rate_norm: f64,
}

/// Online actor-critic controller.
#[derive(Debug, Clone)]
pub struct AdpController {
    pub model: AdpModel,
    pub state: AdpState,
}

impl AdpController {
    pub fn new(model: AdpModel, state: AdpState) -> Self {
        Self { model, state }
    }

    /// Evaluates `Û_a` and `Δ_B` at the current weights, then advances both
    /// weight vectors by one Euler step of length `dt`.
    pub fn step(&mut self, comb: &CombinedError, dt: f64) -> AdpStep {
        let jac = grad_sigma_w(&comb.e_v);
        let u_a = control_from_jacobian(comb, &jac, &self.state.w_a, &self.model);
        let (_, grad_psi) = self.model.psi.value_and_grad(&comb.e_v);

        let m = regressor(comb, &jac, &u_a);
        let s = 1.0 + m.norm_squared();
        let delta_b = residual_from_jacobian(comb, &jac, &self.state.w_c, &u_a, &self.model);
        let wc_rate = m * (-self.model.c0 * delta_b / (s * s));
        let wa_rate = actor_rate_with(
            &self.state.w_a,
            &self.state.w_c,
            comb,
            &jac,
            &u_a,
            &self.model,
            &grad_psi,
        );
        let pi = pi_indicator(comb, &u_a, &grad_psi);

        self.state.w_c += wc_rate * dt;
        self.state.w_a += wa_rate * dt;

        AdpStep {
            u_a,
            bellman_residual: delta_b,
            pi,
            critic_rate_norm: wc_rate.norm(),
        }
    }
}
