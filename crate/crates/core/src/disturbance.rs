//! Time-indexed disturbance signals.
//!
//! A [`DisturbanceProfile`] holds one [`Signal`] per channel: three matched
//! moment channels, three unmatched Euler-rate channels and one airspeed
//! channel. Signals are built from a small vocabulary of primitives that can
//! be declared in scenario files.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One evaluation of every disturbance channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisturbanceSample {
    /// Matched moment disturbance, N·m.
    pub d_m: Vector3<f64>,
    /// Unmatched Euler-rate disturbance, rad/s.
    pub d_u: Vector3<f64>,
    /// Airspeed disturbance, m/s².
    pub d_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    #[default]
    Zero,
    /// `amplitude · sin(omega · t + phase)`
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `Σ coeffs[k] · t^k`
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `pieces[0]` on `t < breakpoints[0]`, `pieces[k]` on
    /// `[breakpoints[k-1], breakpoints[k])`, the last piece from the final
    /// breakpoint on.
    Piecewise {
        breakpoints: Vec<f64>,
        pieces: Vec<Signal>,
    },
    Sum {
        terms: Vec<Signal>,
    },
}

impl Signal {
    pub fn sine(amplitude: f64, omega: f64) -> Self {
        Signal::Sine {
            amplitude,
            omega,
            phase: 0.0,
        }
    }

    /// `first` before `at`, `then` from `at` on.
    pub fn switch_at(at: f64, first: Signal, then: Signal) -> Self {
        Signal::Piecewise {
            breakpoints: vec![at],
            pieces: vec![first, then],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Signal::Zero => 0.0,
            Signal::Sine {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            Signal::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            Signal::Piecewise { breakpoints, pieces } => {
                let idx = breakpoints.partition_point(|&b| b <= t);
                pieces[idx].eval(t)
            }
            Signal::Sum { terms } => terms.iter().map(|s| s.eval(t)).sum(),
        }
    }

    pub fn validate(&self, key: &str) -> Result<()> {
        match self {
            Signal::Zero => Ok(()),
            Signal::Sine {
                amplitude,
                omega,
                phase,
            } => {
                if [amplitude, omega, phase].iter().all(|v| v.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::config(key, "sine parameters must be finite"))
                }
            }
            Signal::Polynomial { coeffs } => {
                if coeffs.iter().all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::config(key, "polynomial coefficients must be finite"))
                }
            }
            Signal::Piecewise { breakpoints, pieces } => {
                if pieces.len() != breakpoints.len() + 1 {
                    return Err(Error::config(key, "piecewise needs one more piece than breakpoints"));
                }
                if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::config(key, "breakpoints must be finite and strictly increasing"));
                }
                for (i, p) in pieces.iter().enumerate() {
                    p.validate(&format!("{key}.pieces[{i}]"))?;
                }
                Ok(())
            }
            Signal::Sum { terms } => {
                for (i, p) in terms.iter().enumerate() {
                    p.validate(&format!("{key}.terms[{i}]"))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisturbanceProfile {
    pub d_m: [Signal; 3],
    pub d_u: [Signal; 3],
    pub d_v: Signal,
}

impl Default for DisturbanceProfile {
    fn default() -> Self {
        Self::standard()
    }
}

impl DisturbanceProfile {
    /// All channels identically zero.
    pub fn none() -> Self {
        Self {
            d_m: Default::default(),
            d_u: Default::default(),
            d_v: Signal::Zero,
        }
    }

    /// Matched moments switching on at 5 s, sinusoidal unmatched rates from
    /// the start, and an airspeed disturbance switching on at 6 s.
    pub fn standard() -> Self {
        let matched = |amp: f64, div: f64| Signal::switch_at(5.0, Signal::Zero, Signal::sine(amp, PI / div));
        let unmatched = || Signal::sine(2.1, PI / 19.0);
        Self {
            d_m: [matched(1.5, 17.0), matched(0.8, 15.0), matched(1.1, 16.0)],
            d_u: [unmatched(), unmatched(), unmatched()],
            d_v: Signal::switch_at(6.0, Signal::Zero, Signal::sine(5.0, 0.2)),
        }
    }

    pub fn sample(&self, t: f64) -> DisturbanceSample {
        DisturbanceSample {
            d_m: Vector3::new(self.d_m[0].eval(t), self.d_m[1].eval(t), self.d_m[2].eval(t)),
            d_u: Vector3::new(self.d_u[0].eval(t), self.d_u[1].eval(t), self.d_u[2].eval(t)),
            d_v: self.d_v.eval(t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.d_m.iter().enumerate() {
            s.validate(&format!("disturbance.d_m[{i}]"))?;
        }
        for (i, s) in self.d_u.iter().enumerate() {
            s.validate(&format!("disturbance.d_u[{i}]"))?;
        }
        self.d_v.validate("disturbance.d_v")
    }
}

/// Disturbance of the scalar demo plant `ẋ = u + d(t)`, defined on `[0, 30)`.
pub fn siso_d(t: f64) -> Result<f64> {
    if !(0.0..30.0).contains(&t) {
        return Err(Error::TimeOutOfRange { t, lo: 0.0, hi: 30.0 });
    }
    Ok(if t < 10.0 {
        2.0 / PI * (0.5 * PI * t).sin()
    } else if t < 20.0 {
        3.0 / 32.0 * t * t - 1.25 * t
    } else {
        5.0 / PI * (0.5 * PI * t).sin()
    })
}
