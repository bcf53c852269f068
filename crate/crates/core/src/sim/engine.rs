use nalgebra::{SVector, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metrics::{MetricSample, MetricTotals, Metrics};
use super::record::ScenarioRecord;
use crate::adp::{assemble_combined, AdpController, AdpState, AdpStep};
use crate::baselines::{AirspeedController, AttitudeController, ControlContext, FtsmGst};
use crate::config::{AirspeedLaw, Integrator, IsmInit, ScenarioConfig};
use crate::disturbance::DisturbanceProfile;
use crate::dynamics::{
    airspeed_quantities, plant_derivative, rotation_r_theta, AirspeedQuantities, ComState, UavParams, UavState,
};
use crate::error::{Error, Result};
use crate::smc::airspeed::{control_txs, phi_v3, sliding_sv, AirspeedSmcState};
use crate::smc::attitude::{control_ms, sliding_s, AttitudeSmcState};

/// Plant state plus both integral-manifold integrals.
type Augmented = SVector<f64, 16>;

/// Reference values at one instant, radians for attitude.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferenceSample {
    pub euler: Vector3<f64>,
    pub euler_rate: Vector3<f64>,
    pub euler_accel: Vector3<f64>,
    pub airspeed: f64,
    pub airspeed_rate: f64,
}

/// Evaluates the configured references at `t`.
pub fn reference_at(cfg: &ScenarioConfig, t: f64) -> ReferenceSample {
    let mut r = ReferenceSample::default();
    let k = std::f64::consts::PI / 180.0;
    for i in 0..3 {
        let v = cfg.reference.theta_d_deg[i].eval_scaled(t, k);
        r.euler[i] = v.value;
        r.euler_rate[i] = v.rate;
        r.euler_accel[i] = v.accel;
    }
    let v = cfg.reference.v_d.eval(t);
    r.airspeed = v.value;
    r.airspeed_rate = v.rate;
    r
}

/// Tracking errors as the controllers measure them. `z_Θ` uses the true
/// Euler-angle rate, including the unmatched disturbance.
pub fn com_state(
    uav: &UavParams,
    s: &UavState,
    refs: &ReferenceSample,
    d_u: &Vector3<f64>,
    airspeed: f64,
) -> Result<ComState> {
    let r_theta = rotation_r_theta(&s.euler, uav.euler_convention, uav.theta_margin)?;
    Ok(ComState {
        e_theta: s.euler - refs.euler,
        z_theta: r_theta * s.rates + d_u - refs.euler_rate,
        e_v: airspeed - refs.airspeed,
    })
}

/// Inputs held constant over one integration step.
#[derive(Debug, Clone, Copy)]
struct Held {
    moment: Vector3<f64>,
    thrust: f64,
    m_a: Vector3<f64>,
    t_xa: f64,
}

fn augmented_derivative(cfg: &ScenarioConfig, t: f64, x: &Augmented, held: &Held) -> Result<Augmented> {
    let uav = &cfg.uav;
    let s = UavState::from_vector(&x.fixed_rows::<12>(0).into_owned());
    let dist = cfg.disturbance.sample(t);
    let ds = plant_derivative(uav, &s, &held.moment, held.thrust, &dist)?;
    let refs = reference_at(cfg, t);
    let r_theta = rotation_r_theta(&s.euler, uav.euler_convention, uav.theta_margin)?;
    let ism_att = r_theta * uav.inertia_inv() * held.m_a - refs.euler_accel;
    let aq = airspeed_quantities(uav, &s)?;
    let ism_v = -aq.g_v - refs.airspeed_rate + (aq.thrust_projection() * held.t_xa - aq.drag) / uav.mass;

    let mut out = Augmented::zeros();
    out.fixed_rows_mut::<12>(0).copy_from(&ds.to_vector());
    out.fixed_rows_mut::<3>(12).copy_from(&ism_att);
    out[15] = ism_v;
    Ok(out)
}

fn integrate(cfg: &ScenarioConfig, t: f64, x: &Augmented, held: &Held) -> Result<Augmented> {
    let h = cfg.dt;
    match cfg.integrator {
        Integrator::Euler => Ok(x + augmented_derivative(cfg, t, x, held)? * h),
        Integrator::Rk4 => {
            let k1 = augmented_derivative(cfg, t, x, held)?;
            let k2 = augmented_derivative(cfg, t + 0.5 * h, &(x + k1 * (0.5 * h)), held)?;
            let k3 = augmented_derivative(cfg, t + 0.5 * h, &(x + k2 * (0.5 * h)), held)?;
            let k4 = augmented_derivative(cfg, t + h, &(x + k3 * h), held)?;
            Ok(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
        }
    }
}

/// Closed-loop scenario advanced one fixed step at a time.
pub struct Simulation {
    cfg: ScenarioConfig,
    state: UavState,
    att: AttitudeSmcState,
    asp: AirspeedSmcState,
    adp: Option<AdpController>,
    thrust_override: Option<Box<dyn AirspeedController>>,
    moment_override: Option<Box<dyn AttitudeController>>,
    metrics: Metrics,
    k: usize,
    steps: usize,
}

impl std::fmt::Debug for Simulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulation")
            .field("name", &self.cfg.name)
            .field("k", &self.k)
            .field("steps", &self.steps)
            .finish()
    }
}

impl Simulation {
    /// Validates `cfg` and builds the initial state. The initial weights are
    /// drawn from the config seed.
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let ic = &cfg.initial;
        let deg = |a: [f64; 3]| Vector3::from_iterator(a.iter().map(|d| d.to_radians()));
        let state = UavState {
            position: Vector3::from(ic.position),
            velocity: Vector3::from(ic.velocity),
            euler: deg(ic.euler_deg),
            rates: deg(ic.rates_deg_s),
        };
        let mut att = AttitudeSmcState::new(&cfg.attitude_smc);
        let mut asp = AirspeedSmcState::new(&cfg.airspeed_smc);
        if cfg.control.ism_init == IsmInit::InitialError {
            let refs = reference_at(cfg, 0.0);
            let aq = airspeed_quantities(&cfg.uav, &state)?;
            let com = com_state(&cfg.uav, &state, &refs, &cfg.disturbance.sample(0.0).d_u, aq.airspeed)?;
            att.ism_integral = com.z_theta;
            asp.ism_integral = com.e_v;
        }
        let adp = if cfg.control.adp_enabled {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let weights = AdpState::random(&mut rng, cfg.adp.init_weight_max);
            Some(AdpController::new(cfg.adp.model()?, weights))
        } else {
            None
        };
        let thrust_override: Option<Box<dyn AirspeedController>> = match cfg.control.airspeed_law {
            AirspeedLaw::Agst => None,
            AirspeedLaw::FtsmGst => Some(Box::new(FtsmGst::new(cfg.ftsm_gst))),
        };
        Ok(Self {
            cfg: cfg.clone(),
            state,
            att,
            asp,
            adp,
            thrust_override,
            moment_override: None,
            metrics: Metrics::new(cfg.dt),
            k: 0,
            steps: cfg.steps(),
        })
    }

    /// Replaces the thrust channel with an external controller.
    pub fn with_airspeed_controller(mut self, c: Box<dyn AirspeedController>) -> Self {
        self.thrust_override = Some(c);
        self
    }

    /// Replaces the moment channel with an external controller.
    pub fn with_attitude_controller(mut self, c: Box<dyn AttitudeController>) -> Self {
        self.moment_override = Some(c);
        self
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn state(&self) -> &UavState {
        &self.state
    }

    pub fn adp(&self) -> Option<&AdpController> {
        self.adp.as_ref()
    }

    pub fn attitude_smc(&self) -> &AttitudeSmcState {
        &self.att
    }

    pub fn airspeed_smc(&self) -> &AirspeedSmcState {
        &self.asp
    }

    pub fn time(&self) -> f64 {
        self.k as f64 * self.cfg.dt
    }

    pub fn steps_done(&self) -> usize {
        self.k
    }

    pub fn is_finished(&self) -> bool {
        self.k >= self.steps
    }

    pub fn totals(&self) -> MetricTotals {
        self.metrics.totals()
    }

    /// Evaluates every controller at the current time, logs the step and
    /// advances plant and controller memory to the next step.
    pub fn step(&mut self) -> Result<ScenarioRecord> {
        let cfg = &self.cfg;
        let uav = &cfg.uav;
        let dt = cfg.dt;
        let t = self.time();
        let s = self.state;

        let dist = cfg.disturbance.sample(t);
        let refs = reference_at(cfg, t);
        let aq: AirspeedQuantities = airspeed_quantities(uav, &s)?;
        let com = com_state(uav, &s, &refs, &dist.d_u, aq.airspeed)?;

        // actor-critic first: its output enters both integral manifolds
        let adp_out = match self.adp.as_mut() {
            Some(adp) => {
                let comb = assemble_combined(uav, &s, &com, &refs.euler_accel, refs.airspeed_rate, &aq)?;
                adp.step(&comb, dt)
            }
            None => AdpStep {
                u_a: Default::default(),
                bellman_residual: 0.0,
                pi: 0.0,
                critic_rate_norm: 0.0,
            },
        };
        let m_a = adp_out.u_a.fixed_rows::<3>(0).into_owned();

        let ctx = ControlContext {
            t,
            dt,
            uav,
            state: &s,
            com: &com,
            airspeed: &aq,
            euler_dd_ref: refs.euler_accel,
            airspeed_dot_ref: refs.airspeed_rate,
        };

        // attitude channel
        let sliding = sliding_s(&com.z_theta, &self.att.ism_integral);
        let (m_s, m_a) = match self.moment_override.as_mut() {
            Some(c) => (c.moment(&ctx)?, Vector3::zeros()),
            None => (control_ms(uav, &s, &self.att, &sliding)?, m_a),
        };
        let moment = m_s + m_a;

        // thrust channel
        let s_v;
        let (t_xs, t_xa, phi3);
        match self.thrust_override.as_mut() {
            Some(c) => {
                s_v = f64::NAN;
                t_xs = c.thrust(&ctx)?;
                t_xa = 0.0;
                phi3 = f64::NAN;
            }
            None => {
                let p = &cfg.airspeed_smc;
                s_v = sliding_sv(com.e_v, self.asp.ism_integral);
                let lv_rate = self.asp.commanded_lv_rate(p, dt);
                t_xs = control_txs(&self.asp, s_v, aq.thrust_projection(), uav.mass, lv_rate, p);
                t_xa = adp_out.u_a[3];
                phi3 = if p.accel_term {
                    phi_v3(s_v, self.asp.gain_lv(p), lv_rate, p.s_deadzone)
                } else {
                    0.0
                };
            }
        }
        let mut thrust = t_xs + t_xa;
        if let Some([lo, hi]) = cfg.control.thrust_range {
            thrust = thrust.clamp(lo, hi);
        }

        if !(moment.iter().all(|v| v.is_finite()) && thrust.is_finite()) {
            return Err(Error::NonFinite("control output"));
        }

        let totals = self.metrics.push(MetricSample {
            abs_attitude_error: com.e_theta.abs().sum(),
            abs_moment: moment.abs().sum(),
            abs_airspeed_error: com.e_v.abs(),
            thrust,
        });

        let agst = self.thrust_override.is_none();
        let nan_unless = |ok: bool, v: f64| if ok { v } else { f64::NAN };
        let record = ScenarioRecord {
            t,
            state: s,
            euler_ref: refs.euler,
            airspeed_ref: refs.airspeed,
            airspeed: aq.airspeed,
            alpha: aq.alpha,
            beta: aq.beta,
            e_theta: com.e_theta,
            e_v: com.e_v,
            z_theta: com.z_theta,
            s: sliding,
            s_v,
            moment,
            m_s,
            m_a,
            thrust,
            t_xs,
            t_xa,
            k1: self.att.k1,
            l: self.att.gain_l(&cfg.attitude_smc),
            r: self.att.r,
            lv: nan_unless(agst, self.asp.gain_lv(&cfg.airspeed_smc)),
            rv: nan_unless(agst, self.asp.r_v),
            e_bar_v: nan_unless(agst, self.asp.e_bar_v(&cfg.airspeed_smc)),
            e_delta: self.att.e_delta(&cfg.attitude_smc),
            phi_v3: phi3,
            wc_norm: self.adp.as_ref().map_or(0.0, |a| a.state.w_c.norm()),
            wa_norm: self.adp.as_ref().map_or(0.0, |a| a.state.w_a.norm()),
            delta_b: adp_out.bellman_residual,
            wc_rate_norm: adp_out.critic_rate_norm,
            pi: adp_out.pi,
            totals,
        };

        // plant and manifold integrals, inputs held over the step
        let held = Held {
            moment,
            thrust,
            m_a,
            t_xa,
        };
        let mut x = Augmented::zeros();
        x.fixed_rows_mut::<12>(0).copy_from(&s.to_vector());
        x.fixed_rows_mut::<3>(12).copy_from(&self.att.ism_integral);
        x[15] = self.asp.ism_integral;
        let next = integrate(cfg, t, &x, &held)?;
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("plant state"));
        }

        // controller memory, forward Euler with rates at the step start
        if self.moment_override.is_none() {
            self.att.advance(&sliding, &cfg.attitude_smc, dt);
        }
        if agst {
            self.asp.advance(s_v, &cfg.airspeed_smc, dt);
        }

        self.state = UavState::from_vector(&next.fixed_rows::<12>(0).into_owned());
        self.att.ism_integral = next.fixed_rows::<3>(12).into_owned();
        self.asp.ism_integral = next[15];
        self.k += 1;
        Ok(record)
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub t: f64,
    pub error: Error,
}

/// Result of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub steps: usize,
    pub totals: MetricTotals,
    /// Last logged record, if any.
    pub last: Option<ScenarioRecord>,
    pub abort: Option<Abort>,
}

/// Runs `cfg` to completion, handing every record to `sink`. Configuration
/// errors are returned as `Err`; runtime aborts end the run early and are
/// reported in [`RunOutcome::abort`].
pub fn run<F: FnMut(&ScenarioRecord)>(cfg: &ScenarioConfig, sink: F) -> Result<RunOutcome> {
    let sim = Simulation::new(cfg)?;
    run_simulation(sim, sink)
}

/// Same as [`run`] for a simulation built by the caller (e.g. with plug-in
/// controllers).
pub fn run_simulation<F: FnMut(&ScenarioRecord)>(mut sim: Simulation, mut sink: F) -> Result<RunOutcome> {
    let mut last = None;
    while !sim.is_finished() {
        match sim.step() {
            Ok(rec) => {
                sink(&rec);
                last = Some(rec);
            }
            Err(e) if e.is_runtime_abort() => {
                return Ok(RunOutcome {
                    steps: sim.steps_done(),
                    totals: sim.totals(),
                    last,
                    abort: Some(Abort {
                        t: sim.time(),
                        error: e,
                    }),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RunOutcome {
        steps: sim.steps_done(),
        totals: sim.totals(),
        last,
        abort: None,
    })
}

/// Disturbance-free copy of a profile, for tests and examples.
pub fn without_disturbance(cfg: &ScenarioConfig) -> ScenarioConfig {
    ScenarioConfig {
        disturbance: DisturbanceProfile::none(),
        ..cfg.clone()
    }
}
