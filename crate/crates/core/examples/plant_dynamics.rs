//! The rigid-body plant on its own: open-loop RK4 with a constant thrust
//! and zero moment, reporting airspeed, flow angles and attitude.
//!
//! ```bash
//! cargo run --example plant_dynamics
//! ```

use adp_asmc::disturbance::DisturbanceSample;
use adp_asmc::dynamics::{airspeed_quantities, plant_derivative, UavParams, UavState};
use nalgebra::{SVector, Vector3};

fn rk4(p: &UavParams, s: &UavState, thrust: f64, h: f64) -> adp_asmc::Result<UavState> {
    let none = DisturbanceSample::default();
    let f = |x: &SVector<f64, 12>| -> adp_asmc::Result<SVector<f64, 12>> {
        Ok(plant_derivative(p, &UavState::from_vector(x), &Vector3::zeros(), thrust, &none)?.to_vector())
    };
    let x = s.to_vector();
    let k1 = f(&x)?;
    let k2 = f(&(x + k1 * (0.5 * h)))?;
    let k3 = f(&(x + k2 * (0.5 * h)))?;
    let k4 = f(&(x + k3 * h))?;
    Ok(UavState::from_vector(
        &(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)),
    ))
}

pub fn run_example() -> anyhow::Result<()> {
    let p = UavParams::default();
    let mut s = UavState {
        velocity: Vector3::new(15.0, 0.0, 1.0),
        euler: Vector3::new(0.05, 0.02, 0.0),
        ..Default::default()
    };
    let h = 1e-3;
    println!("{:>4} {:>9} {:>9} {:>9} {:>9}", "t", "V", "alpha", "beta", "theta");
    for k in 0..=5000 {
        if k % 1000 == 0 {
            let aq = airspeed_quantities(&p, &s)?;
            println!(
                "{:>4.1} {:>9.4} {:>9.5} {:>9.5} {:>9.5}",
                k as f64 * h,
                aq.airspeed,
                aq.alpha,
                aq.beta,
                s.euler[1]
            );
        }
        s = rk4(&p, &s, 10.0, h)?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
