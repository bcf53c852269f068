//! Reference commands built from a few primitives with analytic first and
//! second derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value and first two time derivatives of a scalar reference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RefValue {
    pub value: f64,
    pub rate: f64,
    pub accel: f64,
}

impl RefValue {
    fn scaled(self, k: f64) -> Self {
        Self {
            value: self.value * k,
            rate: self.rate * k,
            accel: self.accel * k,
        }
    }
}

impl std::ops::Add for RefValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            rate: self.rate + o.rate,
            accel: self.accel + o.accel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RefSignal {
    Constant {
        value: f64,
    },
    /// Quintic blend from `from` to `to` over `[start, start + duration]`,
    /// with zero rate and acceleration at both ends.
    SmoothStep {
        from: f64,
        to: f64,
        start: f64,
        duration: f64,
    },
    /// `offset + amplitude · sin(omega t + phase)`
    Sine {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Sum {
        terms: Vec<RefSignal>,
    },
}

impl RefSignal {
    pub fn smooth_step(from: f64, to: f64, start: f64, duration: f64) -> Self {
        RefSignal::SmoothStep {
            from,
            to,
            start,
            duration,
        }
    }

    pub fn eval(&self, t: f64) -> RefValue {
        match self {
            RefSignal::Constant { value } => RefValue {
                value: *value,
                ..Default::default()
            },
            RefSignal::SmoothStep {
                from,
                to,
                start,
                duration,
            } => {
                let s = ((t - start) / duration).clamp(0.0, 1.0);
                let inside = t > *start && t < start + duration;
                let h = to - from;
                let p = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
                let (dp, ddp) = if inside {
                    (
                        30.0 * s * s * (1.0 - s) * (1.0 - s),
                        60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
                    )
                } else {
                    (0.0, 0.0)
                };
                RefValue {
                    value: from + h * p,
                    rate: h * dp / duration,
                    accel: h * ddp / (duration * duration),
                }
            }
            RefSignal::Sine {
                offset,
                amplitude,
                omega,
                phase,
            } => {
                let (s, c) = (omega * t + phase).sin_cos();
                RefValue {
                    value: offset + amplitude * s,
                    rate: amplitude * omega * c,
                    accel: -amplitude * omega * omega * s,
                }
            }
            RefSignal::Sum { terms } => terms.iter().map(|x| x.eval(t)).fold(RefValue::default(), |a, b| a + b),
        }
    }

    /// Same signal with every output multiplied by `k` (e.g. a unit change).
    pub fn eval_scaled(&self, t: f64, k: f64) -> RefValue {
        self.eval(t).scaled(k)
    }

    pub fn validate(&self, key: &str) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            RefSignal::Constant { value } if finite(&[*value]) => Ok(()),
            RefSignal::SmoothStep {
                from,
                to,
                start,
                duration,
            } if finite(&[*from, *to, *start, *duration]) => {
                if *duration > 0.0 {
                    Ok(())
                } else {
                    Err(Error::config(key, "smooth_step duration must be > 0"))
                }
            }
            RefSignal::Sine {
                offset,
                amplitude,
                omega,
                phase,
            } if finite(&[*offset, *amplitude, *omega, *phase]) => Ok(()),
            RefSignal::Sum { terms } => {
                for (i, s) in terms.iter().enumerate() {
                    s.validate(&format!("{key}.terms[{i}]"))?;
                }
                Ok(())
            }
            _ => Err(Error::config(key, "reference parameters must be finite")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smooth_step_ends() {
        let r = RefSignal::smooth_step(1.0, 3.0, 1.0, 0.5);
        assert_eq!(
            r.eval(0.0),
            RefValue {
                value: 1.0,
                rate: 0.0,
                accel: 0.0
            }
        );
        assert_eq!(
            r.eval(2.0),
            RefValue {
                value: 3.0,
                rate: 0.0,
                accel: 0.0
            }
        );
        let mid = r.eval(1.25);
        assert_relative_eq!(mid.value, 2.0);
        // peak rate of the quintic is 15/8 · h / T
        assert_relative_eq!(mid.rate, 15.0 / 8.0 * 2.0 / 0.5);
        assert_relative_eq!(mid.accel, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn derivatives_match_differences() {
        let sigs = [
            RefSignal::smooth_step(-0.2, 0.4, 0.3, 0.7),
            RefSignal::Sine {
                offset: 1.0,
                amplitude: 0.5,
                omega: 2.0,
                phase: 0.3,
            },
            RefSignal::Sum {
                terms: vec![
                    RefSignal::Constant { value: 2.0 },
                    RefSignal::smooth_step(0.0, 1.0, 0.0, 1.0),
                ],
            },
        ];
        let h = 1e-5;
        for s in &sigs {
            // offset grid: the jerk jumps at segment ends, so stay clear of them
            for k in 0..40 {
                let t = 0.0123 + 0.025 * k as f64;
                let (a, b) = (s.eval(t - h), s.eval(t + h));
                let v = s.eval(t);
                assert_relative_eq!(v.rate, (b.value - a.value) / (2.0 * h), epsilon = 1e-6);
                assert_relative_eq!(v.accel, (b.rate - a.rate) / (2.0 * h), epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(RefSignal::smooth_step(0.0, 1.0, 0.0, 0.0).validate("x").is_err());
        assert!(RefSignal::Constant { value: f64::NAN }.validate("x").is_err());
        assert!(RefSignal::Constant { value: 1.0 }.validate("x").is_ok());
    }
}
