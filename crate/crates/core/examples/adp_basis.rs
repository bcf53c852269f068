//! The actor-critic building blocks at a single operating point: basis and
//! Jacobian, value estimate, control, Bellman residual, and a few learning
//! steps with the plant frozen.
//!
//! ```bash
//! cargo run --example adp_basis
//! ```

use adp_asmc::adp::{
    assemble_combined, control_ua_hat, grad_sigma_w, hjb_residual, sigma_w, value_hat, AdpController, AdpParams,
    AdpState, N_NEURONS,
};
use adp_asmc::dynamics::{airspeed_quantities, ComState, UavParams, UavState};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> anyhow::Result<()> {
    let uav = UavParams::default();
    let state = UavState {
        velocity: Vector3::new(19.0, 0.2, 0.5),
        euler: Vector3::new(0.1, 0.05, 0.2),
        rates: Vector3::new(0.01, -0.02, 0.03),
        ..Default::default()
    };
    let com = ComState {
        e_theta: Vector3::new(0.05, -0.03, 0.02),
        z_theta: Vector3::new(0.01, 0.0, -0.01),
        e_v: -1.0,
    };
    let aq = airspeed_quantities(&uav, &state)?;
    let comb = assemble_combined(&uav, &state, &com, &Vector3::zeros(), 0.0, &aq)?;

    let params = AdpParams::default();
    let model = params.model()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let weights = AdpState::random(&mut rng, params.init_weight_max);

    let sigma = sigma_w(&comb.e_v);
    let jac = grad_sigma_w(&comb.e_v);
    println!(
        "{N_NEURONS} neurons, |sigma|={:.3e}, |d sigma/dE|={:.3e}",
        sigma.norm(),
        jac.norm()
    );
    println!("value estimate {:.4}", value_hat(&comb.e_v, &weights.w_c, model.beta_w));
    let u = control_ua_hat(&comb, &weights.w_a, &model);
    println!("U_a = [{:.4}, {:.4}, {:.4}, {:.4}]", u[0], u[1], u[2], u[3]);
    println!("Bellman residual {:.4}", hjb_residual(&comb, &weights.w_c, &u, &model));

    let mut ctl = AdpController::new(model, weights);
    for k in 0..5 {
        let step = ctl.step(&comb, 1e-3);
        println!(
            "step {k}: residual {:.5} |dWc/dt|={:.4}",
            step.bellman_residual, step.critic_rate_norm
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
