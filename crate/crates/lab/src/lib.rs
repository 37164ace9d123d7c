//! Experiment runner for `circnet-core`: text formats, configs, CSV outputs, the `circnet`
//! subcommands and the acceptance suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod output;
pub mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

pub use config::ExperimentConfig;
pub use error::{LabError, Result};
pub use output::Outcome;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub out_dir: PathBuf,
    pub seconds: f64,
    pub threads: usize,
}

impl RunReport {
    /// 0 when every asserted bound holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.outcome.passed() {
            0
        } else {
            1
        }
    }
}

/// Runs one experiment and writes its files plus `run.manifest` into the output directory.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    let threads = cfg.threads()?;
    let out_dir = cfg.out_dir();
    let start = Instant::now();
    let (outcome, used) = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| LabError::config(format!("thread pool: {e}")))?
            .install(|| commands::execute(cfg).map(|o| (o, rayon::current_num_threads()))),
        None => commands::execute(cfg).map(|o| (o, rayon::current_num_threads())),
    }?;
    let seconds = start.elapsed().as_secs_f64();
    std::fs::create_dir_all(&out_dir).map_err(|e| LabError::io(&out_dir, e))?;
    for (name, text) in &outcome.files {
        formats::write_text(&out_dir.join(name), text)?;
    }
    let report = RunReport { outcome, out_dir, seconds, threads: used };
    formats::write_text(&report.out_dir.join("run.manifest"), &manifest(cfg, &report))?;
    Ok(report)
}

pub fn manifest(cfg: &ExperimentConfig, rep: &RunReport) -> String {
    let o = &rep.outcome;
    let mut s = String::new();
    writeln!(s, "command = {}", cfg.command).unwrap();
    writeln!(s, "circnet = {VERSION}").unwrap();
    writeln!(s, "circnet-core = {}", circnet_core::VERSION).unwrap();
    writeln!(s, "seed = {}", cfg.get("seed").unwrap_or("0")).unwrap();
    writeln!(s, "threads = {}", rep.threads).unwrap();
    writeln!(s, "wall_time_s = {:.3}", rep.seconds).unwrap();
    writeln!(s, "status = {}", if o.passed() { "pass" } else { "fail" }).unwrap();
    s.push_str("\n[config]\n");
    for (k, v) in &cfg.params {
        writeln!(s, "{k} = {v}").unwrap();
    }
    s.push_str("\n[summary]\n");
    for (k, v) in &o.summary {
        writeln!(s, "{k} = {v}").unwrap();
    }
    s.push_str("\n[outputs]\n");
    for (name, _) in &o.files {
        writeln!(s, "{name}").unwrap();
    }
    if !o.violations.is_empty() {
        s.push_str("\n[violations]\n");
        for v in &o.violations {
            writeln!(s, "{v}").unwrap();
        }
    }
    s
}
