//! Result emission: plot-ready CSV tables and the run manifest.
//!
//! Every real number is written with `Display`, which round-trips exactly,
//! so re-parsing an emitted file reproduces the in-memory values bit for
//! bit. Each CSV carries a schema-version comment as its first line. The
//! manifest is written last, after a successful run, and records a SHA-256
//! checksum per output file; only its two timestamps vary between identical
//! runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SimConfig;
use crate::error::Result;
use crate::experiments::{
    BestResponseReport, DelayCurveRow, DemandRow, ScenarioDeltaRow, SizeStudyEntry,
    StrategyComparisonRow, SweepResult,
};
use crate::play::PlayResult;
use crate::settlement::TraceEvent;

const SCHEMA: &str = "# rtgs-sim csv v1";

/// Checksum entry of one emitted file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputChecksum {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run bit-identically, emitted as
/// `manifest.json` once the run has succeeded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    /// The fully resolved configuration, overrides applied.
    pub config: SimConfig,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub outputs: Vec<OutputChecksum>,
}

fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Writes result files into one output directory, tracking checksums for
/// the manifest. On failure the caller invokes [`Emitter::cleanup`] so no
/// partial output set survives.
pub struct Emitter {
    dir: PathBuf,
    outputs: Vec<OutputChecksum>,
    started_unix_ms: u64,
}

impl Emitter {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), outputs: Vec::new(), started_unix_ms: now_ms() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), contents)?;
        self.outputs.push(OutputChecksum { file: name.to_string(), sha256: sha256_hex(contents) });
        Ok(())
    }

    /// Removes everything written so far.
    pub fn cleanup(&mut self) {
        for out in self.outputs.drain(..) {
            let _ = std::fs::remove_file(self.dir.join(out.file));
        }
    }

    /// Writes `manifest.json` and returns the manifest.
    pub fn finish(self, command: &str, config: &SimConfig) -> Result<RunManifest> {
        let manifest = RunManifest {
            tool: "rtgs-sim".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            master_seed: config.seed,
            config: config.clone(),
            started_unix_ms: self.started_unix_ms,
            finished_unix_ms: now_ms(),
            outputs: self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(self.dir.join("manifest.json"), text)?;
        Ok(manifest)
    }
}

fn csv(name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{SCHEMA}: {name}\n{header}\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// One row per play across one or more sweeps.
pub fn plays_csv(sweeps: &[&SweepResult]) -> String {
    let rows = sweeps.iter().flat_map(|sweep| {
        sweep.points.iter().flat_map(|point| {
            point.plays.iter().map(|p| {
                format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    sweep.scenario,
                    sweep.n_banks,
                    p.kappa,
                    p.play_index,
                    p.seed,
                    p.converged,
                    p.days_run,
                    p.total_liquidity,
                    p.mean_payoff,
                    p.mean_delay
                )
            })
        })
    });
    csv(
        "plays",
        "scenario,n_banks,kappa,play_index,seed,converged,days_run,total_liquidity,mean_payoff,mean_delay",
        rows.collect::<Vec<_>>(),
    )
}

/// One aggregate row per sweep point.
pub fn summary_csv(sweeps: &[&SweepResult]) -> String {
    let rows = sweeps.iter().flat_map(|sweep| {
        sweep.points.iter().map(|point| match &point.aggregate {
            Some(agg) => format!(
                "{},{},{},{},{},{},{},{},{},{}",
                sweep.scenario,
                sweep.n_banks,
                point.kappa,
                point.plays.len(),
                agg.n_converged,
                agg.mean_total_liquidity,
                agg.min_total_liquidity,
                agg.max_total_liquidity,
                agg.mean_payoff,
                agg.mean_delay
            ),
            None => format!(
                "{},{},{},{},0,,,,,",
                sweep.scenario,
                sweep.n_banks,
                point.kappa,
                point.plays.len()
            ),
        })
    });
    csv(
        "sweep summary",
        "scenario,n_banks,kappa,n_plays,n_converged,mean_total_liquidity,min_total_liquidity,max_total_liquidity,mean_payoff,mean_delay",
        rows.collect::<Vec<_>>(),
    )
}

pub fn demand_curve_csv(rows: &[DemandRow]) -> String {
    csv(
        "demand curve",
        "kappa,mean_total_liquidity,min_total_liquidity,max_total_liquidity,netting_ratio",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.kappa,
                r.mean_total_liquidity,
                r.min_total_liquidity,
                r.max_total_liquidity,
                r.netting_ratio
            )
        }),
    )
}

/// Per-day total liquidity of every play in a sweep.
pub fn trajectories_csv(sweep: &SweepResult) -> String {
    let mut rows = Vec::new();
    for point in &sweep.points {
        for play in &point.plays {
            for (day, total) in play.total_liquidity_trajectory.iter().enumerate() {
                rows.push(format!("{},{},{},{}", point.kappa, play.play_index, day, total));
            }
        }
    }
    csv("play trajectories", "kappa,play_index,day,total_liquidity", rows)
}

/// System-level trajectory of one play.
pub fn play_trajectory_csv(result: &PlayResult) -> String {
    let rows = (0..result.days_run).map(|day| {
        let payoffs = &result.payoff_trajectory[day];
        let mean_payoff = payoffs.iter().sum::<f64>() / payoffs.len() as f64;
        format!(
            "{},{},{},{}",
            day, result.total_liquidity_trajectory[day], mean_payoff, result.mean_delay_trajectory[day]
        )
    });
    csv("play trajectory", "day,total_liquidity,mean_payoff,mean_delay", rows.collect::<Vec<_>>())
}

/// Per-bank actions and payoffs of one play, in long format.
pub fn bank_trajectory_csv(result: &PlayResult) -> String {
    let mut rows = Vec::new();
    for day in 0..result.days_run {
        for (bank, action) in result.profile_trajectory[day].iter().enumerate() {
            rows.push(format!(
                "{},{},{},{}",
                day, bank, action, result.payoff_trajectory[day][bank]
            ));
        }
    }
    csv("per-bank trajectory", "day,bank,action,payoff", rows)
}

pub fn delay_curve_csv(rows: &[DelayCurveRow]) -> String {
    csv(
        "delay curve",
        "level,total_liquidity,mean_delay,mean_payoff,mean_cost",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.level, r.total_liquidity, r.mean_delay, r.mean_payoff, -r.mean_payoff
            )
        }),
    )
}

pub fn strategy_comparison_csv(rows: &[StrategyComparisonRow]) -> String {
    csv(
        "strategy comparison",
        "kappa,adaptive_payoff,delay_all_payoff,full_liquidity_payoff,full_liquidity_level",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.kappa,
                r.adaptive_payoff,
                r.delay_all_payoff,
                r.full_liquidity_payoff,
                r.full_liquidity_level
            )
        }),
    )
}

pub fn scenario_delta_csv(rows: &[ScenarioDeltaRow]) -> String {
    csv(
        "scenario delta vs base",
        "kappa,base_mean_liquidity,scenario_mean_liquidity,liquidity_delta,liquidity_delta_pct,base_mean_cost,scenario_mean_cost,cost_delta_pct,base_mean_delay,scenario_mean_delay",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.kappa,
                r.base_mean_liquidity,
                r.scenario_mean_liquidity,
                r.liquidity_delta,
                r.liquidity_delta_pct,
                r.base_mean_cost,
                r.scenario_mean_cost,
                r.cost_delta_pct,
                r.base_mean_delay,
                r.scenario_mean_delay
            )
        }),
    )
}

/// Demand aggregates of every (system size, kappa) pair.
pub fn size_study_csv(entries: &[SizeStudyEntry]) -> String {
    let mut rows = Vec::new();
    for entry in entries {
        for point in &entry.sweep.points {
            if let Some(agg) = &point.aggregate {
                rows.push(format!(
                    "{},{},{},{},{}",
                    entry.n_banks,
                    point.kappa,
                    agg.n_converged,
                    agg.mean_total_liquidity,
                    agg.mean_total_liquidity / entry.sweep.day_length
                ));
            } else {
                rows.push(format!("{},{},0,,", entry.n_banks, point.kappa));
            }
        }
    }
    csv("size study", "n_banks,kappa,n_converged,mean_total_liquidity,netting_ratio", rows)
}

pub fn nash_report_csv(report: &BestResponseReport) -> String {
    csv(
        "best response report",
        "bank,current_level,best_alternative_level,estimated_gain,std_error",
        report.per_bank.iter().map(|d| {
            format!(
                "{},{},{},{},{}",
                d.bank, d.current_level, d.best_level, d.gain, d.std_error
            )
        }),
    )
}

/// Line-delimited settlement event log (time, type, sender, receiver).
pub fn day_trace_csv(trace: &[TraceEvent]) -> String {
    csv(
        "settlement day trace",
        "time,event,sender,receiver",
        trace.iter().map(|e| format!("{},{},{},{}", e.time, e.kind, e.sender, e.receiver)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_display() {
        let values = [0.1 + 0.2, 1.0 / 3.0, 1044.0, f64::MIN_POSITIVE, 123456.789e-12];
        for v in values {
            let text = format!("{v}");
            let back: f64 = text.parse().unwrap();
            assert_eq!(v, back, "{text} did not round-trip");
        }
    }

    #[test]
    fn checksums_are_stable() {
        assert_eq!(
            sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn emitter_cleanup_removes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut emitter = Emitter::new(dir.path()).unwrap();
        emitter.write("a.csv", "x\n").unwrap();
        emitter.write("b.csv", "y\n").unwrap();
        assert!(dir.path().join("a.csv").exists());
        emitter.cleanup();
        assert!(!dir.path().join("a.csv").exists());
        assert!(!dir.path().join("b.csv").exists());
    }

    #[test]
    fn manifest_records_checksums() {
        let dir = tempfile::tempdir().unwrap();
        let mut emitter = Emitter::new(dir.path()).unwrap();
        emitter.write("a.csv", "hello\n").unwrap();
        let manifest = emitter.finish("sweep", &SimConfig::default()).unwrap();
        assert_eq!(manifest.outputs.len(), 1);
        assert_eq!(manifest.outputs[0].file, "a.csv");
        let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let parsed: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.outputs, manifest.outputs);
        assert_eq!(parsed.config, SimConfig::default());
    }
}
