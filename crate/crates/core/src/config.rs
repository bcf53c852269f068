//! Scenario files.
//!
//! Configs are TOML. Every section rejects unknown keys. Angles are given in
//! degrees (keys ending in `_deg`) and converted to radians when the
//! scenario is built. Overrides of the form `a.b.c=value` or `a.b[1].c=value`
//! are applied to the parsed document before it is typed, so they are
//! validated exactly like file content.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use toml::Value;

use crate::adp::AdpParams;
use crate::baselines::{ActaParams, AsosmParams, FtsmGstParams, LssAsosmParams};
use crate::disturbance::DisturbanceProfile;
use crate::dynamics::UavParams;
use crate::error::{Error, Result};
use crate::sim::reference::RefSignal;
use crate::smc::airspeed::AirspeedSmcParams;
use crate::smc::attitude::AttitudeSmcParams;
use crate::smc::siso::SisoConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    #[default]
    Rk4,
}

/// Which law drives the thrust channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AirspeedLaw {
    /// Adaptive super-twisting on the integral manifold plus the ADP thrust.
    #[default]
    Agst,
    /// Fast-terminal-surface super-twisting baseline (replaces the ADP thrust).
    FtsmGst,
}

/// Initial value of the integral-manifold integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IsmInit {
    /// Integrals start at zero, so `S(0) = z_Θ(0)` and `S_V(0) = e_V(0)`.
    #[default]
    Zero,
    /// Integrals start at the initial errors, so both manifolds start at 0.
    InitialError,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConditions {
    /// Inertial position, m.
    pub position: [f64; 3],
    /// Body velocity `[u, v, w]`, m/s.
    pub velocity: [f64; 3],
    pub euler_deg: [f64; 3],
    /// Body rates, deg/s.
    pub rates_deg_s: [f64; 3],
}

impl Default for InitialConditions {
    fn default() -> Self {
        Self {
            position: [0.0; 3],
            velocity: [0.4, 0.0, 0.0],
            euler_deg: [5.8, -11.5, 11.5],
            rates_deg_s: [0.58, 1.15, 1.72],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceConfig {
    /// Attitude command per channel, degrees.
    pub theta_d_deg: [RefSignal; 3],
    /// Airspeed command, m/s.
    pub v_d: RefSignal,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        let step = |to: f64| RefSignal::smooth_step(0.0, to, 1.0, 0.5);
        Self {
            theta_d_deg: [step(10.0), step(5.0), step(15.0)],
            v_d: RefSignal::smooth_step(0.4, 20.0, 1.0, 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlConfig {
    /// Run the actor-critic controller; when false `M_a = 0`, `T_xa = 0`.
    pub adp_enabled: bool,
    pub airspeed_law: AirspeedLaw,
    pub ism_init: IsmInit,
    /// Optional `[min, max]` thrust saturation, N. The default applies none.
    pub thrust_range: Option<[f64; 2]>,
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self {
            adp_enabled: true,
            airspeed_law: AirspeedLaw::Agst,
            ism_init: IsmInit::Zero,
            thrust_range: None,
        }
    }
}

/// Documentation-only parameter records of baselines not implemented here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineRecords {
    pub lss_asosm: LssAsosmParams,
    pub acta: ActaParams,
    pub asosm: AsosmParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Write every `decimate`-th record to the CSV.
    pub decimate: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { decimate: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    /// Seed of the initial-weight draw. Required.
    pub seed: u64,
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default)]
    pub uav: UavParams,
    #[serde(default)]
    pub initial: InitialConditions,
    #[serde(default)]
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub disturbance: DisturbanceProfile,
    #[serde(default)]
    pub control: ControlConfig,
    #[serde(default)]
    pub attitude_smc: AttitudeSmcParams,
    #[serde(default)]
    pub airspeed_smc: AirspeedSmcParams,
    #[serde(default)]
    pub adp: AdpParams,
    #[serde(default)]
    pub ftsm_gst: FtsmGstParams,
    #[serde(default)]
    pub baselines: BaselineRecords,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_name() -> String {
    "scenario".into()
}
fn default_duration() -> f64 {
    120.0
}
fn default_dt() -> f64 {
    1e-3
}

impl ScenarioConfig {
    /// Library defaults (reference setup, free parameters at their documented defaults) with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            name: "paper_default".into(),
            seed,
            duration: default_duration(),
            dt: default_dt(),
            integrator: Integrator::default(),
            uav: UavParams::default(),
            initial: InitialConditions::default(),
            reference: ReferenceConfig::default(),
            disturbance: DisturbanceProfile::standard(),
            control: ControlConfig::default(),
            attitude_smc: AttitudeSmcParams::default(),
            airspeed_smc: AirspeedSmcParams::default(),
            adp: AdpParams::default(),
            ftsm_gst: FtsmGstParams::default(),
            baselines: BaselineRecords::default(),
            output: OutputConfig::default(),
        }
    }

    /// Number of fixed steps covering `duration`.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config("dt", "must be > 0"));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(Error::config("duration", "must be >= 0"));
        }
        if self.output.decimate == 0 {
            return Err(Error::config("output.decimate", "must be >= 1"));
        }
        self.uav.validate()?;
        self.disturbance.validate()?;
        self.attitude_smc.validate()?;
        self.airspeed_smc.validate("airspeed_smc")?;
        self.adp.validate()?;
        self.ftsm_gst.validate()?;
        for (i, r) in self.reference.theta_d_deg.iter().enumerate() {
            r.validate(&format!("reference.theta_d_deg[{i}]"))?;
        }
        self.reference.v_d.validate("reference.v_d")?;
        if let Some([lo, hi]) = self.control.thrust_range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config("control.thrust_range", "need finite min < max"));
            }
        }
        let ic = &self.initial;
        let all = ic
            .position
            .iter()
            .chain(&ic.velocity)
            .chain(&ic.euler_deg)
            .chain(&ic.rates_deg_s);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::config("initial", "initial conditions must be finite"));
        }
        let theta = ic.euler_deg[1].to_radians();
        if theta.abs() >= std::f64::consts::FRAC_PI_2 - self.uav.theta_margin {
            return Err(Error::config(
                "initial.euler_deg",
                "initial pitch inside the singular band",
            ));
        }
        let speed = ic.velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
        if speed < self.uav.min_airspeed {
            return Err(Error::config(
                "initial.velocity",
                "initial airspeed below uav.min_airspeed",
            ));
        }
        Ok(())
    }
}

/// Scalar demo file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SisoScenarioConfig {
    #[serde(default = "default_siso_name")]
    pub name: String,
    #[serde(default)]
    pub siso: SisoConfig,
    #[serde(default = "AirspeedSmcParams::siso_demo")]
    pub airspeed_smc: AirspeedSmcParams,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_siso_name() -> String {
    "siso_demo".into()
}

impl Default for SisoScenarioConfig {
    fn default() -> Self {
        Self {
            name: default_siso_name(),
            siso: SisoConfig::default(),
            airspeed_smc: AirspeedSmcParams::siso_demo(),
            output: OutputConfig::default(),
        }
    }
}

impl SisoScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.siso.validate()?;
        self.airspeed_smc.validate("airspeed_smc")?;
        if self.output.decimate == 0 {
            return Err(Error::config("output.decimate", "must be >= 1"));
        }
        Ok(())
    }
}

/// Reads a TOML document. Missing or unreadable files are config errors
/// naming the path.
pub fn read_document(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_document(&text, &path.display().to_string())
}

pub fn parse_document(text: &str, origin: &str) -> Result<Value> {
    text.parse::<toml::Table>()
        .map(Value::Table)
        .map_err(|e| Error::config(origin, e.to_string()))
}

/// Types a document, reporting the first problem as a config error.
pub fn from_document<T: DeserializeOwned>(doc: Value) -> Result<T> {
    T::deserialize(doc).map_err(|e| Error::config("<document>", e.to_string().trim().to_string()))
}

#[derive(Debug, Clone, PartialEq)]
enum Segment {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for part in path.split('.') {
        let (name, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if name.is_empty() {
            return Err(Error::config(path, "empty key in override path"));
        }
        out.push(Segment::Key(name.to_string()));
        while !rest.is_empty() {
            let close = rest
                .find(']')
                .filter(|_| rest.starts_with('['))
                .ok_or_else(|| Error::config(path, "malformed index in override path"))?;
            let idx = rest[1..close]
                .parse::<usize>()
                .map_err(|_| Error::config(path, "index must be a non-negative integer"))?;
            out.push(Segment::Index(idx));
            rest = &rest[close + 1..];
        }
    }
    Ok(out)
}

/// Parses the right-hand side of an override as a TOML value, falling back
/// to a bare string (so `integrator=euler` works without quotes).
fn parse_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Applies one `path=value` override in place, creating tables as needed.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::config(spec, "override must look like key=value"))?;
    let path = path.trim();
    let segs = parse_path(path)?;
    let value = parse_value(raw.trim());

    let mut cur = doc;
    for (i, seg) in segs.iter().enumerate() {
        let last = i + 1 == segs.len();
        cur = match seg {
            Segment::Key(k) => {
                let table = cur
                    .as_table_mut()
                    .ok_or_else(|| Error::config(path, format!("`{k}` is not inside a table")))?;
                if last {
                    table.insert(k.clone(), value);
                    return Ok(());
                }
                let next_is_index = matches!(segs[i + 1], Segment::Index(_));
                table.entry(k.clone()).or_insert_with(|| {
                    if next_is_index {
                        Value::Array(Vec::new())
                    } else {
                        Value::Table(toml::Table::new())
                    }
                })
            }
            Segment::Index(n) => {
                let arr = cur
                    .as_array_mut()
                    .ok_or_else(|| Error::config(path, "indexing a value that is not an array"))?;
                let len = arr.len();
                let slot = arr
                    .get_mut(*n)
                    .ok_or_else(|| Error::config(path, format!("index {n} out of range (len {len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
        };
    }
    Ok(())
}

/// Lays `overlay` over `base`. Tables merge key by key, except that a table
/// whose `kind` tag differs from the base (or that the base lacks) replaces
/// it whole, since a different variant has different fields. Arrays and
/// scalars replace.
fn merge_onto(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Table(b), Value::Table(o)) => {
            let same_variant = match o.get("kind") {
                Some(k) => b.get("kind") == Some(k),
                None => true,
            };
            if !same_variant {
                *b = o;
                return;
            }
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge_onto(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

/// Serialized defaults with the listed top-level keys removed, so the
/// file's own defaults (or requirements) for them still apply.
fn defaults_document<T: Serialize>(defaults: &T, skip: &[&str]) -> Result<Value> {
    let text = to_toml(defaults)?;
    let mut doc = parse_document(&text, "<defaults>")?;
    if let Some(t) = doc.as_table_mut() {
        for k in skip {
            t.remove(*k);
        }
    }
    Ok(doc)
}

/// Completes a parsed scenario document with the library defaults, applies
/// the overrides, types and validates it. Overrides can therefore address
/// any key, including ones the file leaves out.
pub fn resolve_scenario(doc: Value, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut full = defaults_document(&ScenarioConfig::with_seed(0), &["seed", "name"])?;
    merge_onto(&mut full, doc);
    for o in overrides {
        apply_override(&mut full, o)?;
    }
    let cfg: ScenarioConfig = from_document(full)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Same as [`resolve_scenario`] for a scalar demo document.
pub fn resolve_siso(doc: Value, overrides: &[String]) -> Result<SisoScenarioConfig> {
    let mut full = defaults_document(&SisoScenarioConfig::default(), &["name"])?;
    merge_onto(&mut full, doc);
    for o in overrides {
        apply_override(&mut full, o)?;
    }
    let cfg: SisoScenarioConfig = from_document(full)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Loads a scenario file, applies overrides and validates it.
pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    resolve_scenario(read_document(path)?, overrides)
}

/// Loads an optional demo file (defaults when `None`), applies overrides
/// and validates it.
pub fn load_siso(path: Option<&Path>, overrides: &[String]) -> Result<SisoScenarioConfig> {
    let doc = match path {
        Some(p) => read_document(p)?,
        None => Value::Table(toml::Table::new()),
    };
    resolve_siso(doc, overrides)
}

/// Serializes a scenario back to TOML (the effective config written next to
/// run outputs).
pub fn to_toml<T: Serialize>(cfg: &T) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::config("<serialize>", e.to_string()))
}
