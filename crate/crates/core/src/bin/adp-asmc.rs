//! Command-line front end. Exit codes: 0 success, 1 configuration error,
//! 2 runtime abort (singularity, divergence or I/O failure).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use adp_asmc::config::{from_document, load_scenario, load_siso, read_document, ScenarioConfig, SisoScenarioConfig};
use adp_asmc::output::{run_to_dir, siso_to_dir};
use adp_asmc::sim::RunOutcome;
use adp_asmc::Error;

#[derive(Debug, Parser)]
#[command(
    name = "adp-asmc",
    version,
    about = "Fixed-wing UAV closed-loop simulation with adaptive super-twisting and actor-critic control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one or more scenario files and write CSV, summary and effective config.
    Run {
        /// Scenario TOML files.
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Number of scenarios simulated in parallel.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
    },
    /// Run the scalar super-twisting demo.
    SisoDemo {
        /// Optional demo TOML file; built-in defaults otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Validate scenario or demo files without simulating.
    Check {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Override a config value before validation, e.g. `--set dt=2e-3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Override a config value, e.g. `--set dt=2e-3` or `--set reference.theta_d_deg[0].to=20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed of the initial weight draw (overrides the file).
    #[arg(long)]
    seed: Option<u64>,
    /// Write every k-th step to the CSV (overrides the file).
    #[arg(long, value_name = "K")]
    decimate: Option<usize>,
}

impl Common {
    fn overrides(&self, with_seed: bool) -> Vec<String> {
        let mut o = self.set.clone();
        if let (true, Some(s)) = (with_seed, self.seed) {
            o.push(format!("seed={s}"));
        }
        if let Some(k) = self.decimate {
            o.push(format!("output.decimate={k}"));
        }
        o
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Run { configs, common, jobs } => cmd_run(&configs, &common, jobs as usize),
        Command::SisoDemo { config, common } => cmd_siso(config.as_deref(), &common),
        Command::Check { configs, set } => cmd_check(&configs, &set),
    };
    ExitCode::from(code)
}

fn report(e: &Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::Config { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn cmd_run(paths: &[PathBuf], common: &Common, jobs: usize) -> u8 {
    let overrides = common.overrides(true);
    let mut cfgs = Vec::with_capacity(paths.len());
    for p in paths {
        match load_scenario(p, &overrides) {
            Ok(c) => cfgs.push(c),
            Err(e) => return report(&e),
        }
    }

    let results: Vec<Mutex<Option<adp_asmc::Result<RunOutcome>>>> = cfgs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = jobs.min(cfgs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = cfgs.get(i) else { break };
                let r = run_to_dir(cfg, &common.out).map(|(o, _)| o);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });

    println!(
        "{:<24} {:>8} {:>14} {:>14} {:>14} {:>14}  status",
        "name", "steps", "IAE", "IACM", "int|e_V|", "int T_x"
    );
    let mut code = 0;
    for (cfg, slot) in cfgs.iter().zip(results) {
        match slot.into_inner().unwrap().expect("every scenario is run") {
            Ok(o) => {
                let status = match &o.abort {
                    Some(a) => {
                        eprintln!("{}: aborted at t={:.4} s: {}", cfg.name, a.t, a.error);
                        code = code.max(EXIT_RUNTIME);
                        "abort"
                    }
                    None => "ok",
                };
                println!(
                    "{:<24} {:>8} {:>14.6} {:>14.6} {:>14.6} {:>14.6}  {status}",
                    cfg.name, o.steps, o.totals.iae, o.totals.iacm, o.totals.iae_v, o.totals.int_tx
                );
            }
            Err(e) => code = code.max(report(&e)),
        }
    }
    println!("outputs in {}", common.out.display());
    code
}

fn cmd_siso(path: Option<&Path>, common: &Common) -> u8 {
    let cfg = match load_siso(path, &common.overrides(false)) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    match siso_to_dir(&cfg, &common.out) {
        Ok((records, paths)) => {
            let last = records.last().expect("at least the initial sample");
            let max_lv = records.iter().map(|r| r.lv).fold(f64::NEG_INFINITY, f64::max);
            println!("{:<12} {:>10} {:>14} {:>14}", "name", "samples", "final x", "max L_v");
            println!(
                "{:<12} {:>10} {:>14.6e} {:>14.6}",
                cfg.name,
                records.len(),
                last.x,
                max_lv
            );
            println!("wrote {}", paths.csv.display());
            0
        }
        Err(e) => report(&e),
    }
}

fn cmd_check(paths: &[PathBuf], set: &[String]) -> u8 {
    for p in paths {
        let r = read_document(p).and_then(|doc| {
            if doc.get("siso").is_some() {
                load_siso(Some(p), set).map(|c: SisoScenarioConfig| format!("siso demo `{}`", c.name))
            } else {
                // type first so missing/unknown keys are reported before invariants
                from_document::<ScenarioConfig>(doc)?;
                load_scenario(p, set).map(|c| format!("scenario `{}`, {} steps", c.name, c.steps()))
            }
        });
        match r {
            Ok(what) => println!("{}: ok ({what})", p.display()),
            Err(e) => {
                eprintln!("{}: invalid", p.display());
                return report(&e);
            }
        }
    }
    0
}
