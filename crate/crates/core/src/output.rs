//! Run artifacts on disk: `<dir>/<name>.csv`, `<dir>/<name>.summary.txt` and
//! the effective configuration `<dir>/<name>.config.toml`.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::{to_toml, ScenarioConfig, SisoScenarioConfig};
use crate::error::{Error, Result};
use crate::sim::{run, summary_text, CsvSink, RunOutcome};
use crate::smc::siso::{run_siso_demo, SisoRecord, SISO_CSV_HEADER};

/// Paths written for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub config: PathBuf,
}

impl Artifacts {
    pub fn in_dir(dir: &Path, name: &str) -> Self {
        Self {
            csv: dir.join(format!("{name}.csv")),
            summary: dir.join(format!("{name}.summary.txt")),
            config: dir.join(format!("{name}.config.toml")),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(text.as_bytes())?;
    f.flush()?;
    Ok(())
}

/// Runs a scenario and writes its CSV, summary and effective config into
/// `dir`. A runtime abort still writes everything, with a final `abort` row.
pub fn run_to_dir(cfg: &ScenarioConfig, dir: &Path) -> Result<(RunOutcome, Artifacts)> {
    cfg.validate()?;
    let paths = Artifacts::in_dir(dir, &cfg.name);
    write_text(&paths.config, &to_toml(cfg)?)?;
    let mut sink = CsvSink::new(create(&paths.csv)?, cfg.output.decimate)?;
    let mut io_err = None;
    let outcome = run(cfg, |rec| {
        if io_err.is_none() {
            if let Err(e) = sink.push(rec) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if let (Some(_), Some(last)) = (&outcome.abort, &outcome.last) {
        sink.push_abort(last)?;
    }
    sink.finish()?;
    write_text(&paths.summary, &summary_text(cfg, &outcome))?;
    Ok((outcome, paths))
}

/// Flat `key=value` summary of a scalar demo run.
pub fn siso_summary_text(cfg: &SisoScenarioConfig, records: &[SisoRecord]) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}={v}");
    };
    kv("name", cfg.name.clone());
    kv("dt", format!("{:?}", cfg.siso.dt));
    kv("duration", format!("{:?}", cfg.siso.duration));
    kv("samples", records.len().to_string());
    let max_lv = records.iter().map(|r| r.lv).fold(f64::NEG_INFINITY, f64::max);
    let max_rv = records.iter().map(|r| r.rv).fold(f64::NEG_INFINITY, f64::max);
    let max_x_late = records
        .iter()
        .filter(|r| r.t >= 5.0)
        .map(|r| r.x.abs())
        .fold(0.0, f64::max);
    if let Some(last) = records.last() {
        kv("final_x", format!("{:?}", last.x));
        kv("final_lv", format!("{:?}", last.lv));
        kv("final_rv", format!("{:?}", last.rv));
    }
    kv("max_lv", format!("{max_lv:?}"));
    kv("max_rv", format!("{max_rv:?}"));
    kv("max_abs_x_after_5s", format!("{max_x_late:?}"));
    kv("status", "ok".into());
    s
}

/// Runs the scalar demo and writes its CSV, summary and effective config.
pub fn siso_to_dir(cfg: &SisoScenarioConfig, dir: &Path) -> Result<(Vec<SisoRecord>, Artifacts)> {
    cfg.validate()?;
    let paths = Artifacts::in_dir(dir, &cfg.name);
    write_text(&paths.config, &to_toml(cfg)?)?;
    let records = run_siso_demo(cfg.airspeed_smc, &cfg.siso)?;
    let mut f = create(&paths.csv)?;
    writeln!(f, "{SISO_CSV_HEADER}")?;
    let step = cfg.output.decimate.max(1);
    for (i, r) in records.iter().enumerate() {
        if i % step == 0 || i + 1 == records.len() {
            writeln!(f, "{}", r.csv_row())?;
        }
    }
    f.flush()?;
    write_text(&paths.summary, &siso_summary_text(cfg, &records))?;
    Ok((records, paths))
}
