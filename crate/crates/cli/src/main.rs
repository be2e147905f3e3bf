//! `fuzzcyl`: run check suites and export representations.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! configuration or runtime error. Errors and failures are also reported on
//! stderr as `{"error": …, "context": …}`.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

use commands::Outcome;
use config::{Command, Format, RunConfig};
use fuzzcyl::subalgebra::ProfileKind;
use fuzzcyl::FamilyKind;

#[derive(Parser, Debug)]
#[command(name = "fuzzcyl", version, about = "Checks and exports for crossed-product fuzzy cylinders")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Deformation parameter; repeat for sweeps.
    #[arg(long = "hbar", allow_hyphen_values = true)]
    hbar: Vec<f64>,
    #[arg(long)]
    family: Option<FamilyKind>,
    /// Carrier interval, e.g. "[0,1]" or "[0,inf)".
    #[arg(long)]
    carrier: Option<String>,
    #[arg(long)]
    profile: Option<ProfileKind>,
    /// Left end of the plane carrier `[a, ∞)`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    grid_size: Option<usize>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Orbit base point; repeatable.
    #[arg(long = "base", allow_hyphen_values = true)]
    base_points: Vec<f64>,
}

impl Cli {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                let mut value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
                if let Some(obj) = value.as_object_mut() {
                    obj.insert("command".into(), serde_json::to_value(self.command)?);
                }
                serde_json::from_value(value).with_context(|| format!("invalid configuration in {path}"))?
            }
            None => RunConfig::new(self.command),
        };
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if !self.hbar.is_empty() {
            cfg.hbar = self.hbar.clone();
        }
        if let Some(v) = self.family {
            cfg.family.kind = v;
        }
        if let Some(v) = &self.carrier {
            cfg.family.carrier = v.parse().map_err(|e| anyhow::anyhow!("--carrier: {e}"))?;
        }
        if self.profile.is_some() {
            cfg.profile = self.profile;
        }
        if self.a.is_some() {
            cfg.a = self.a;
        }
        if self.size.is_some() {
            cfg.size = self.size;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.grid_size {
            cfg.grid_size = v;
        }
        if let Some(v) = self.truncation {
            cfg.truncation = v;
        }
        if let Some(v) = self.tol {
            cfg.tolerances.residual = v;
        }
        if !self.base_points.is_empty() {
            cfg.base_points = self.base_points.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn render(cfg: &RunConfig, outcome: &Outcome) -> Result<Vec<u8>> {
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": cfg.command,
                "config": cfg,
                "all_pass": outcome.report.all_pass(),
                "checks": outcome.report.checks,
                "result": outcome.payload,
            });
            let mut bytes = serde_json::to_vec_pretty(&doc)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.table.header)?;
            for row in &outcome.table.rows {
                w.write_record(row)?;
            }
            Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("FUZZCYL_THREADS") {
        let n: usize = v.parse().with_context(|| format!("FUZZCYL_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let cfg = cli.config()?;
    let outcome = commands::run(&cfg)?;
    let bytes = render(&cfg, &outcome)?;
    match &cfg.out {
        Some(path) => fs::write(path, &bytes).with_context(|| format!("writing {path}"))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    if !outcome.report.all_pass() {
        let failed: Vec<&str> = outcome.report.failures().map(|c| c.relation.as_str()).collect();
        eprintln!("{}", json!({ "error": "check failure", "context": failed }));
    }
    Ok(outcome.report.all_pass())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "invalid arguments", "context": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let context: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            eprintln!("{}", json!({ "error": e.to_string(), "context": context }));
            ExitCode::from(2)
        }
    }
}
