//! Independent re-derivations shared by the oracle and acceptance suites.

#![allow(dead_code)]

use std::ops::{Add, Mul};

use adp_asmc::adp::{AdpModel, AdpParams, CombinedError, Diagonal, Psi, Vec7, VecN, N_NEURONS};
use nalgebra::{DMatrix, DVector, SMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Dual {
    pub v: f64,
    pub d: [f64; 7],
}

impl Dual {
    pub fn var(v: f64, i: usize) -> Self {
        let mut d = [0.0; 7];
        d[i] = 1.0;
        Self { v, d }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        let mut d = [0.0; 7];
        for (i, di) in d.iter_mut().enumerate() {
            *di = self.d[i] * o.v + self.v * o.d[i];
        }
        Dual { v: self.v * o.v, d }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        let mut d = self.d;
        for (i, di) in d.iter_mut().enumerate() {
            *di += o.d[i];
        }
        Dual { v: self.v + o.v, d }
    }
}

/// The 35 activations, typed term by term from the basis definition.
pub fn basis(x: [Dual; 7]) -> Vec<Dual> {
    let [e1, e2, e3, z1, z2, z3, ev] = x;
    let cube = |a: Dual| a * a * a;
    vec![
        e1 * e1,
        e1 * e2,
        e2 * e2,
        e1 * e3,
        e3 * e3,
        e2 * e3,
        z1 * z1,
        z1 * z2,
        z2 * z2,
        z1 * z3,
        z3 * z3,
        z2 * z3,
        cube(e1) * z1,
        cube(e2) * z2,
        cube(e3) * z3,
        e1 * z1 * z2,
        e2 * z2 * z3,
        e3 * z3 * z1,
        e1 * z2,
        e1 * z3,
        e2 * z1,
        e2 * z3,
        e3 * z1,
        e3 * z2,
        cube(z1) * e3 * e2,
        cube(z2) * e1 * e3,
        cube(z3) * e1 * e2,
        e1 * cube(z1),
        e2 * cube(z2),
        e3 * cube(z3),
        ev * ev,
        ev * e1,
        ev * e2,
        ev * cube(e1),
        ev * cube(e2),
    ]
}

pub fn oracle_sigma_and_jacobian(e: &Vec7) -> (DVector<f64>, DMatrix<f64>) {
    let x: [Dual; 7] = std::array::from_fn(|i| Dual::var(e[i], i));
    let b = basis(x);
    assert_eq!(b.len(), N_NEURONS);
    let sigma = DVector::from_iterator(N_NEURONS, b.iter().map(|d| d.v));
    let jac = DMatrix::from_fn(N_NEURONS, 7, |k, j| b[k].d[j]);
    (sigma, jac)
}

pub fn random_e(rng: &mut ChaCha8Rng, r: f64) -> Vec7 {
    Vec7::from_fn(|_, _| rng.gen_range(-r..r))
}

pub struct Case {
    pub comb: CombinedError,
    pub model: AdpModel,
    pub w_c: VecN,
    pub w_a: VecN,
}

pub fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let e = random_e(rng, 1.0);
    let comb = CombinedError {
        e_v: e,
        f_v: random_e(rng, 2.0),
        g_v: SMatrix::<f64, 7, 4>::from_fn(|_, _| rng.gen_range(-1.0..1.0)),
        x_d: random_e(rng, 1.0),
    };
    let b = DMatrix::from_fn(7, 7, |_, _| rng.gen_range(-1.0..1.0));
    let q = &b * b.transpose() + DMatrix::identity(7, 7) * 0.1;
    let mut params = AdpParams {
        beta_w: rng.gen_range(0.1..5.0),
        r_u: std::array::from_fn(|_| rng.gen_range(0.5..3.0)),
        c0: rng.gen_range(0.1..3.0),
        a0: rng.gen_range(0.1..3.0),
        gamma_a: Diagonal::Entries((0..N_NEURONS).map(|_| rng.gen_range(0.1..10.0)).collect()),
        gamma_b: Diagonal::Entries((0..N_NEURONS).map(|_| rng.gen_range(-1.0..1.0)).collect()),
        psi: Psi::Weighted {
            weights: std::array::from_fn(|_| rng.gen_range(0.5..2.0)),
        },
        ..Default::default()
    };
    for i in 0..7 {
        for j in 0..7 {
            params.q_e[i][j] = q[(i, j)];
        }
    }
    let model = params.model().unwrap();
    let w_c = VecN::from_fn(|_, _| rng.gen_range(-2.0..2.0));
    let w_a = VecN::from_fn(|_, _| rng.gen_range(-2.0..2.0));
    Case { comb, model, w_c, w_a }
}

pub fn dm<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> DMatrix<f64> {
    DMatrix::from_column_slice(R, C, m.as_slice())
}

pub fn dv<const R: usize>(v: &SMatrix<f64, R, 1>) -> DVector<f64> {
    DVector::from_column_slice(v.as_slice())
}

pub struct Dense {
    pub e: DVector<f64>,
    pub g: DMatrix<f64>,
    pub jac: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub r_inv: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub dyn_free: DVector<f64>,
}

pub fn dense(c: &Case) -> Dense {
    let (_, jac) = oracle_sigma_and_jacobian(&c.comb.e_v);
    let r = DMatrix::from_diagonal(&dv(&c.model.r_u));
    let r_inv = r.clone().try_inverse().unwrap();
    Dense {
        e: dv(&c.comb.e_v),
        g: dm(&c.comb.g_v),
        jac,
        r,
        r_inv,
        q: dm(&c.model.q_e),
        dyn_free: dv(&c.comb.f_v) - dv(&c.comb.x_d),
    }
}

pub fn oracle_control(d: &Dense, beta: f64, w: &DVector<f64>) -> DVector<f64> {
    let grad = &d.e * (2.0 * beta) + d.jac.transpose() * w;
    -(&d.r_inv * d.g.transpose() * grad) * 0.5
}

pub fn close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// HJB residual and critic weight rate for the control `u`.
pub fn oracle_critic(c: &Case, u: &DVector<f64>) -> (f64, DVector<f64>) {
    let d = dense(c);
    let flow = &d.dyn_free + &d.g * u;
    let grad_v = &d.e * (2.0 * c.model.beta_w) + d.jac.transpose() * dv(&c.w_c);
    let residual = grad_v.dot(&flow) + d.e.dot(&(&d.q * &d.e)) + u.dot(&(&d.r * u));
    let m = &d.jac * &flow;
    let s = 1.0 + m.dot(&m);
    (residual, &m * (-c.model.c0 * residual / (s * s)))
}

/// Actor weight rate, with the stabilizing term for a weighted quadratic `Ψ`.
pub fn oracle_actor(c: &Case) -> DVector<f64> {
    let d = dense(c);
    let w_a = dv(&c.w_a);
    let w_c = dv(&c.w_c);
    let u = oracle_control(&d, c.model.beta_w, &w_a);
    let flow = &d.dyn_free + &d.g * &u;
    let m = &d.jac * &flow;
    let s = 1.0 + m.dot(&m);
    let m1 = &m / s;
    let mbar = &m / (s * s);
    let a = &d.g * &d.r_inv * d.g.transpose();
    let d1 = &d.jac * &a * d.jac.transpose();
    let gamma_a = DMatrix::from_diagonal(&dv(&c.model.gamma_a));
    let gamma_b = dv(&c.model.gamma_b);
    let Psi::Weighted { weights } = &c.model.psi else {
        unreachable!()
    };
    let grad_psi = DVector::from_iterator(7, (0..7).map(|i| weights[i] * d.e[i]));
    let pi = if grad_psi.dot(&flow) < 0.0 { 0.0 } else { 1.0 };
    -((&gamma_a * &w_a - &gamma_b * m1.dot(&w_c)) - (&d1 * &w_a) * (0.25 * mbar.dot(&w_c))) * c.model.a0
        + &d.jac * &a * &grad_psi * (0.5 * c.model.a0 * pi)
}
