//! Integral-sliding-manifold super-twisting controllers with adaptive gains.
//!
//! [`attitude`] holds the multivariable moment controller, [`airspeed`] the
//! scalar thrust controller and [`siso`] the standalone scalar demo built on
//! the airspeed law.

pub mod airspeed;
pub mod attitude;
pub mod siso;

use serde::{Deserialize, Serialize};

/// Behaviour of the second-layer gain `r` when it sits at its floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RLaw {
    /// At or below the floor `r` grows at rate `r_m`.
    #[default]
    Rate,
    /// `r` is held at the floor and only leaves it when the first branch
    /// of the law is positive.
    Clamp,
}

/// Outcome of one Euler step of the dual-layer gain law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DualLayerStep {
    pub delta_l: f64,
    pub r: f64,
    /// Applied `ΔL̇` after the floor.
    pub delta_l_rate: f64,
}

/// Shared dual-layer law:
/// `ΔL̇ = −(λ₀ + r)·sign(e)`,
/// `ṙ = r̄|e|·sign(|e| − ē)` while `r > r_m`, `r_m` otherwise.
///
/// `r` never crosses below `r_m` inside a step: the continuous law switches
/// to its positive branch the moment it reaches the floor.
#[allow(clippy::too_many_arguments)]
pub(crate) fn dual_layer_step(
    e: f64,
    delta_l: f64,
    l0: f64,
    l_floor: f64,
    r: f64,
    lambda0: f64,
    r_bar: f64,
    e_bar: f64,
    r_m: f64,
    law: RLaw,
    dt: f64,
) -> DualLayerStep {
    let mut dl_rate = -(lambda0 + r) * crate::math::sign(e);
    let mut next_dl = delta_l + dl_rate * dt;
    let dl_floor = l_floor - l0;
    if next_dl < dl_floor {
        next_dl = dl_floor;
        dl_rate = (next_dl - delta_l) / dt;
    }

    let shrink_grow = r_bar * e.abs() * crate::math::sign(e.abs() - e_bar);
    let r_rate = match law {
        RLaw::Rate if r > r_m => shrink_grow,
        RLaw::Rate => r_m,
        RLaw::Clamp => shrink_grow,
    };
    let next_r = (r + r_rate * dt).max(r_m);

    DualLayerStep {
        delta_l: next_dl,
        r: next_r,
        delta_l_rate: dl_rate,
    }
}

/// One exact step of `ẏ = (u − y)/τ` with `u` held over the step.
pub(crate) fn low_pass_step(y: f64, input: f64, tau: f64, dt: f64) -> f64 {
    input + (y - input) * (-dt / tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn negative_error_raises_l() {
        let s = dual_layer_step(-0.5, 0.0, 0.3, 0.01, 1.0, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1e-3);
        assert_relative_eq!(s.delta_l_rate, 1.01);
        assert_relative_eq!(s.delta_l, 1.01e-3);
    }

    #[test]
    fn small_error_shrinks_r() {
        let s = dual_layer_step(0.05, 0.0, 0.3, 0.01, 1.0, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1e-3);
        assert!(s.r < 1.0);
        // large error escalates
        let s = dual_layer_step(0.5, 0.0, 0.3, 0.01, 1.0, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1e-3);
        assert!(s.r > 1.0);
    }

    #[test]
    fn r_floor_behaviour() {
        let rate = dual_layer_step(0.05, 0.0, 0.3, 0.01, 0.6, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1e-3);
        assert_relative_eq!(rate.r, 0.6 + 0.6e-3);
        let clamp = dual_layer_step(0.05, 0.0, 0.3, 0.01, 0.6, 0.01, 10.0, 0.1, 0.6, RLaw::Clamp, 1e-3);
        assert_eq!(clamp.r, 0.6);
        // a large step cannot carry r through the floor
        let s = dual_layer_step(0.05, 0.0, 0.3, 0.01, 0.6001, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1.0);
        assert_eq!(s.r, 0.6);
    }

    #[test]
    fn l_floor_holds() {
        let s = dual_layer_step(1.0, -0.29, 0.3, 0.01, 5.0, 0.01, 10.0, 0.1, 0.6, RLaw::Rate, 1e-2);
        assert_relative_eq!(s.delta_l, 0.01 - 0.3);
        assert_relative_eq!(s.delta_l_rate, (0.01 - 0.3 + 0.29) / 1e-2, epsilon = 1e-9);
    }

    #[test]
    fn low_pass_decay_and_gain() {
        assert_relative_eq!(low_pass_step(1.0, 0.0, 0.5, 0.5), (-1f64).exp());
        let mut y = 0.0;
        for _ in 0..10_000 {
            y = low_pass_step(y, 2.5, 0.01, 1e-3);
        }
        assert_relative_eq!(y, 2.5, epsilon = 1e-12);
    }
}
