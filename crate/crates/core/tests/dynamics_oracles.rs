//! Plant kinematics and rigid-body dynamics against independent oracles.

use adp_asmc::disturbance::DisturbanceSample;
use adp_asmc::dynamics::{
    plant_derivative, r_theta_dot, rotation_r_i, rotation_r_theta, AeroModel, EulerConvention, InertialZ, UavParams,
    UavState,
};
use nalgebra::{Matrix3, SVector, Vector3};
use proptest::prelude::*;

fn skew(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0)
}

fn angles() -> impl Strategy<Value = Vector3<f64>> {
    (-3.0..3.0f64, -1.3..1.3f64, -3.0..3.0f64).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

fn vec3(r: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-r..r, -r..r, -r..r).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn direction_cosine_matrix_is_a_rotation(e in angles()) {
        let r = rotation_r_i(&e);
        prop_assert!((r.transpose() * r - Matrix3::identity()).norm() < 1e-12);
        prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn textbook_euler_rates_move_the_dcm_by_the_body_rate(e in angles(), w in vec3(2.0)) {
        // R(Θ + hΘ̇) ≈ R(Θ)(I + h[ω]×) when Θ̇ = R_Θ ω
        let rt = rotation_r_theta(&e, EulerConvention::Standard, 0.1).unwrap();
        let edot = rt * w;
        let h = 1e-6;
        let num = (rotation_r_i(&(e + edot * h)) - rotation_r_i(&(e - edot * h))) / (2.0 * h);
        let exact = rotation_r_i(&e) * skew(&w);
        prop_assert!((num - exact).norm() < 1e-6 * (1.0 + exact.norm()), "{num} vs {exact}");
    }

    #[test]
    fn theta_psi_phi_rows_permute_the_textbook_rows(e in angles()) {
        let s = rotation_r_theta(&e, EulerConvention::Standard, 0.1).unwrap();
        let p = rotation_r_theta(&e, EulerConvention::ThetaPsiPhi, 0.1).unwrap();
        prop_assert_eq!(p.row(0), s.row(1));
        prop_assert_eq!(p.row(1), s.row(2));
        prop_assert_eq!(p.row(2), s.row(0));
    }

    #[test]
    fn r_theta_dot_matches_central_difference(e in angles(), edot in vec3(1.0)) {
        for conv in [EulerConvention::ThetaPsiPhi, EulerConvention::Standard] {
            let h = 1e-6;
            let plus = rotation_r_theta(&(e + edot * h), conv, 0.05).unwrap();
            let minus = rotation_r_theta(&(e - edot * h), conv, 0.05).unwrap();
            let num = (plus - minus) / (2.0 * h);
            let exact = r_theta_dot(&e, &edot, conv, 0.05).unwrap();
            prop_assert!((num - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "{num} vs {exact}");
        }
    }
}

/// Body-rate equations in the classic component form with the cross
/// product of inertia `J_xz = −I_xz`.
fn euler_equations(p: &UavParams, w: &Vector3<f64>, m: &Vector3<f64>) -> Vector3<f64> {
    let (jx, jy, jz, jxz) = (p.ixx, p.iyy, p.izz, -p.ixz);
    let g = jx * jz - jxz * jxz;
    let g1 = jxz * (jx - jy + jz) / g;
    let g2 = (jz * (jz - jy) + jxz * jxz) / g;
    let g3 = jz / g;
    let g4 = jxz / g;
    let g5 = (jz - jx) / jy;
    let g6 = jxz / jy;
    let g7 = ((jx - jy) * jx + jxz * jxz) / g;
    let g8 = jx / g;
    let (pp, q, r) = (w[0], w[1], w[2]);
    Vector3::new(
        g1 * pp * q - g2 * q * r + g3 * m[0] + g4 * m[2],
        g5 * pp * r - g6 * (pp * pp - r * r) + m[1] / jy,
        g7 * pp * q - g1 * q * r + g4 * m[0] + g8 * m[2],
    )
}

fn random_state(rng: &mut impl rand::Rng) -> UavState {
    let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    UavState {
        position: Vector3::new(u(-50.0, 50.0), u(-50.0, 50.0), u(-50.0, 50.0)),
        velocity: Vector3::new(u(5.0, 30.0), u(-3.0, 3.0), u(-3.0, 3.0)),
        euler: Vector3::new(u(-1.0, 1.0), u(-1.0, 1.0), u(-3.0, 3.0)),
        rates: Vector3::new(u(-1.0, 1.0), u(-1.0, 1.0), u(-1.0, 1.0)),
    }
}

#[test]
fn plant_matches_newton_euler_in_the_inertial_frame() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
    for z in [InertialZ::Up, InertialZ::Down] {
        let p = UavParams {
            aero: AeroModel::Drag,
            euler_convention: EulerConvention::Standard,
            inertial_z: z,
            ..Default::default()
        };
        for _ in 0..1000 {
            let s = random_state(&mut rng);
            let moment = Vector3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let thrust = rng.gen_range(0.0..20.0);
            let d = plant_derivative(&p, &s, &moment, thrust, &DisturbanceSample::default()).unwrap();

            // translational: m a_I = R_I (T e₁ − D v̂) + m g_I; v̇ from V_I = R_I v
            let r = rotation_r_i(&s.euler);
            let speed = s.velocity.norm();
            let body_force = Vector3::new(thrust, 0.0, 0.0) - s.velocity * (p.drag_coeff * speed);
            let g_i = Vector3::new(0.0, 0.0, if z == InertialZ::Up { -p.gravity } else { p.gravity });
            let a_i = r * body_force / p.mass + g_i;
            let v_dot = r.transpose() * a_i - s.rates.cross(&s.velocity);
            assert!((d.velocity - v_dot).norm() < 1e-12 * (1.0 + v_dot.norm()));
            assert!((d.position - r * s.velocity).norm() < 1e-12 * (1.0 + speed));

            let w_dot = euler_equations(&p, &s.rates, &moment);
            assert!(
                (d.rates - w_dot).norm() < 1e-12 * (1.0 + w_dot.norm()),
                "{} vs {}",
                d.rates,
                w_dot
            );

            let e_dot = rotation_r_theta(&s.euler, EulerConvention::Standard, 0.1).unwrap() * s.rates;
            assert!((d.euler - e_dot).norm() < 1e-12 * (1.0 + e_dot.norm()));
        }
    }
}

#[test]
fn disturbances_enter_their_channels() {
    let p = UavParams::default();
    let s = UavState {
        velocity: Vector3::new(20.0, 0.0, 0.0),
        ..Default::default()
    };
    let zero = Vector3::zeros();
    let base = plant_derivative(&p, &s, &zero, 5.0, &DisturbanceSample::default()).unwrap();
    let dist = DisturbanceSample {
        d_m: Vector3::new(1.0, 0.0, 0.0),
        d_u: Vector3::new(0.0, 0.2, 0.0),
        d_v: 3.0,
    };
    let with = plant_derivative(&p, &s, &zero, 5.0, &dist).unwrap();
    let inv = p.inertia_inv();
    assert!((with.rates - base.rates - inv * dist.d_m).norm() < 1e-14);
    assert!((with.euler - base.euler - dist.d_u).norm() < 1e-14);
    // along-path disturbance at zero flow angles is along body x
    assert!((with.velocity - base.velocity - Vector3::new(3.0, 0.0, 0.0)).norm() < 1e-12);
}

fn rk4(p: &UavParams, s: &UavState, h: f64) -> UavState {
    let f = |x: &SVector<f64, 12>| {
        plant_derivative(
            p,
            &UavState::from_vector(x),
            &Vector3::zeros(),
            0.0,
            &DisturbanceSample::default(),
        )
        .unwrap()
        .to_vector()
    };
    let x = s.to_vector();
    let k1 = f(&x);
    let k2 = f(&(x + k1 * (0.5 * h)));
    let k3 = f(&(x + k2 * (0.5 * h)));
    let k4 = f(&(x + k3 * h));
    UavState::from_vector(&(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)))
}

#[test]
fn torque_free_rotational_energy_is_conserved() {
    let p = UavParams {
        gravity: 0.0,
        drag_coeff: 0.0,
        aero: AeroModel::Drag,
        euler_convention: EulerConvention::Standard,
        ..Default::default()
    };
    let mut s = UavState {
        velocity: Vector3::new(10.0, 0.0, 0.0),
        euler: Vector3::new(0.1, 0.2, 0.3),
        // roll-dominant spin keeps the pitch angle away from ±π/2
        rates: Vector3::new(0.6, -0.05, 0.08),
        ..Default::default()
    };
    let energy = |s: &UavState| s.rates.dot(&(p.inertia() * s.rates));
    let e0 = energy(&s);
    for _ in 0..10_000 {
        s = rk4(&p, &s, 1e-3);
    }
    assert!((energy(&s) - e0).abs() < 1e-6, "drift {}", energy(&s) - e0);
}

#[test]
fn pitch_near_vertical_is_rejected() {
    let e = Vector3::new(0.1, 1.5, 0.0);
    assert!(rotation_r_theta(&e, EulerConvention::ThetaPsiPhi, 0.1).is_err());
    assert!(rotation_r_theta(&Vector3::new(0.1, 1.4, 0.0), EulerConvention::ThetaPsiPhi, 0.1).is_ok());
}
