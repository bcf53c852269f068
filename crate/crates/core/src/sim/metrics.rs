//! Running performance integrals, accumulated with the trapezoid rule over
//! the logged samples.

/// Integrands at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSample {
    /// `|e_φ| + |e_θ| + |e_ψ|`
    pub abs_attitude_error: f64,
    /// `|M_x| + |M_y| + |M_z|`
    pub abs_moment: f64,
    pub abs_airspeed_error: f64,
    pub thrust: f64,
}

/// Accumulated integrals up to the latest sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricTotals {
    /// Integral absolute attitude error, rad·s.
    pub iae: f64,
    /// Integral absolute control moment, N·m·s.
    pub iacm: f64,
    /// `∫|e_V| dt`, m.
    pub iae_v: f64,
    /// `∫T_x dt`, N·s.
    pub int_tx: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Metrics {
    dt: f64,
    prev: Option<MetricSample>,
    totals: MetricTotals,
}

impl Metrics {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            prev: None,
            totals: MetricTotals::default(),
        }
    }

    /// Adds the sample one `dt` after the previous one and returns the
    /// updated totals.
    pub fn push(&mut self, s: MetricSample) -> MetricTotals {
        if let Some(p) = self.prev {
            let h = 0.5 * self.dt;
            self.totals.iae += h * (p.abs_attitude_error + s.abs_attitude_error);
            self.totals.iacm += h * (p.abs_moment + s.abs_moment);
            self.totals.iae_v += h * (p.abs_airspeed_error + s.abs_airspeed_error);
            self.totals.int_tx += h * (p.thrust + s.thrust);
        }
        self.prev = Some(s);
        self.totals
    }

    pub fn totals(&self) -> MetricTotals {
        self.totals
    }
}
