//! Closed-loop simulation of a fixed-wing UAV under adaptive-gain
//! super-twisting sliding-mode control combined with an actor-critic
//! adaptive-dynamic-programming controller.
//!
//! Module map:
//!
//! - [`math`]: sign-power operators, Kronecker product, eigenvalue helper.
//! - [`dynamics`]: rigid-body plant and control-oriented quantities.
//! - [`disturbance`]: disturbance signal vocabulary and the default profiles.
//! - [`smc`]: attitude and airspeed sliding-mode controllers, scalar demo.
//! - [`adp`]: critic/actor approximants and weight-update laws.
//! - [`baselines`]: FTSM-GST airspeed baseline and plug-in controller traits.
//! - [`sim`]: fixed-step closed-loop engine, references, logging, metrics.
//! - [`config`]: scenario files, overrides and validation.
//! - [`output`]: CSV, summary and effective-config files for a run.

pub mod adp;
pub mod baselines;
pub mod config;
pub mod disturbance;
pub mod dynamics;
pub mod error;
pub mod math;
pub mod output;
pub mod sim;
pub mod smc;

pub use error::{Error, Result};
