//! Per-step log rows and their CSV layout.
//!
//! Angles and rates are in radians. Column order is fixed by [`COLUMNS`] and
//! never changes between runs; downstream plotting relies on the names.

use std::io::Write;

use nalgebra::Vector3;

use super::metrics::MetricTotals;
use crate::dynamics::UavState;

/// CSV header, in output order.
pub const COLUMNS: [&str; 61] = [
    "t", //
    "pn_x",
    "pn_y",
    "pn_z",
    "u",
    "v",
    "w",
    "phi",
    "theta",
    "psi",
    "p",
    "q",
    "r", //
    "phi_d",
    "theta_d",
    "psi_d",
    "v_d",
    "airspeed",
    "alpha",
    "beta", //
    "e_phi",
    "e_theta",
    "e_psi",
    "e_v",
    "z_phi",
    "z_theta",
    "z_psi", //
    "s_1",
    "s_2",
    "s_3",
    "s_v", //
    "m_x",
    "m_y",
    "m_z",
    "ms_x",
    "ms_y",
    "ms_z",
    "ma_x",
    "ma_y",
    "ma_z", //
    "t_x",
    "t_xs",
    "t_xa", //
    "k1",
    "l",
    "r_gain",
    "lv",
    "rv",
    "e_bar_v",
    "e_delta",
    "phi_v3", //
    "wc_norm",
    "wa_norm",
    "delta_b",
    "wc_rate_norm",
    "pi", //
    "iae",
    "iacm",
    "iae_v",
    "int_tx", //
    "status",
];

/// One logged step. Controls are the values held over `[t, t + dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScenarioRecord {
    pub t: f64,
    pub state: UavState,
    pub euler_ref: Vector3<f64>,
    pub airspeed_ref: f64,
    pub airspeed: f64,
    pub alpha: f64,
    pub beta: f64,
    pub e_theta: Vector3<f64>,
    pub e_v: f64,
    pub z_theta: Vector3<f64>,
    pub s: Vector3<f64>,
    pub s_v: f64,
    pub moment: Vector3<f64>,
    pub m_s: Vector3<f64>,
    pub m_a: Vector3<f64>,
    pub thrust: f64,
    pub t_xs: f64,
    pub t_xa: f64,
    pub k1: f64,
    pub l: f64,
    pub r: f64,
    pub lv: f64,
    pub rv: f64,
    pub e_bar_v: f64,
    pub e_delta: f64,
    pub phi_v3: f64,
    pub wc_norm: f64,
    pub wa_norm: f64,
    pub delta_b: f64,
    pub wc_rate_norm: f64,
    pub pi: f64,
    pub totals: MetricTotals,
}

impl ScenarioRecord {
    /// Numeric columns in [`COLUMNS`] order, without the trailing status.
    pub fn values(&self) -> [f64; 60] {
        let s = &self.state;
        let v3 = |v: &Vector3<f64>| [v[0], v[1], v[2]];
        let mut out = [0.0; 60];
        let parts: [&[f64]; 20] = [
            &[self.t],
            &v3(&s.position),
            &v3(&s.velocity),
            &v3(&s.euler),
            &v3(&s.rates),
            &v3(&self.euler_ref),
            &[self.airspeed_ref, self.airspeed, self.alpha, self.beta],
            &v3(&self.e_theta),
            &[self.e_v],
            &v3(&self.z_theta),
            &v3(&self.s),
            &[self.s_v],
            &v3(&self.moment),
            &v3(&self.m_s),
            &v3(&self.m_a),
            &[self.thrust, self.t_xs, self.t_xa],
            &[
                self.k1,
                self.l,
                self.r,
                self.lv,
                self.rv,
                self.e_bar_v,
                self.e_delta,
                self.phi_v3,
            ],
            &[self.wc_norm, self.wa_norm, self.delta_b, self.wc_rate_norm, self.pi],
            &[self.totals.iae, self.totals.iacm, self.totals.iae_v, self.totals.int_tx],
            &[],
        ];
        let mut i = 0;
        for p in parts {
            out[i..i + p.len()].copy_from_slice(p);
            i += p.len();
        }
        debug_assert_eq!(i, 60);
        out
    }
}

/// Streams records as CSV, keeping every `decimate`-th step.
pub struct CsvSink<W: Write> {
    out: W,
    decimate: usize,
    seen: usize,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W, decimate: usize) -> std::io::Result<Self> {
        writeln!(out, "{}", COLUMNS.join(","))?;
        Ok(Self {
            out,
            decimate: decimate.max(1),
            seen: 0,
        })
    }

    pub fn push(&mut self, rec: &ScenarioRecord) -> std::io::Result<()> {
        if self.seen.is_multiple_of(self.decimate) {
            self.write_row(rec, "ok")?;
        }
        self.seen += 1;
        Ok(())
    }

    /// Writes a final diagnostic row (always, regardless of decimation).
    pub fn push_abort(&mut self, rec: &ScenarioRecord) -> std::io::Result<()> {
        self.write_row(rec, "abort")
    }

    fn write_row(&mut self, rec: &ScenarioRecord, status: &str) -> std::io::Result<()> {
        let mut line = String::with_capacity(1024);
        for v in rec.values() {
            // shortest round-trip formatting keeps the file bit-exact
            line.push_str(&format!("{v:?}"));
            line.push(',');
        }
        line.push_str(status);
        writeln!(self.out, "{line}")
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
