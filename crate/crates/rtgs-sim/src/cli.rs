//! Command-line entry point.
//!
//! Subcommands map one-to-one to the experiment harness: `sweep`, `play`,
//! `fixed`, `size-study`, `nash-check` and `day-trace`. Parameters come from
//! an optional TOML config file (see [`crate::config::SimConfig`]) plus a
//! handful of flag overrides. Results land in `--out` as CSV tables and a
//! `manifest.json`; identical invocations with the same seed produce
//! byte-identical result files, with only the manifest timestamps varying.
//!
//! The worker pool size defaults to the available parallelism and can be
//! pinned with the `RTGS_SIM_THREADS` environment variable.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::SimConfig;
use crate::error::Result;
use crate::experiments::{
    best_response_check, delay_ladder, demand_curve, run_size_study, run_sweep, scenario_delta,
    strategy_comparison,
};
use crate::play::run_play;
use crate::report::{self, Emitter};
use crate::rng::{purpose, stream_rng};
use crate::settlement::{run_day_traced, sample_instructions, select_incident_victim, Scenario};

#[derive(Parser)]
#[command(name = "rtgs-sim", version, about = "Interbank RTGS liquidity simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file; defaults apply for every unset key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for result files and the manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Scenario override.
    #[arg(long, global = true, value_parser = ["base", "throughput", "incident"])]
    scenario: Option<String>,

    /// Plays per sweep point override.
    #[arg(long, global = true)]
    plays: Option<usize>,

    /// Run at the full reported scale (30 plays per sweep point).
    #[arg(long, global = true)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep delay costs and tabulate the liquidity demand curve.
    Sweep,
    /// Run a single play at the configured delay cost.
    Play,
    /// Run a ladder of frozen symmetric profiles (delay-liquidity curve).
    Fixed,
    /// Repeat the sweep across system sizes.
    SizeStudy,
    /// Verify a converged profile against its best unilateral deviations.
    NashCheck,
    /// Emit the settlement event log of one seeded day.
    DayTrace,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Play => "play",
            Command::Fixed => "fixed",
            Command::SizeStudy => "size-study",
            Command::NashCheck => "nash-check",
            Command::DayTrace => "day-trace",
        }
    }
}

/// Parses `argv` and runs the requested command. Returns the process exit
/// status: 0 on success, 1 on runtime failure, 2 on usage errors.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    init_worker_pool();
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn init_worker_pool() {
    if let Ok(value) = std::env::var("RTGS_SIM_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            // Ignore AlreadyInitialized: first caller wins, as in tests.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => SimConfig::from_path(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(scenario) = &cli.scenario {
        config.scenario = match scenario.as_str() {
            "base" => Scenario::Base,
            "throughput" => Scenario::Throughput,
            _ => Scenario::Incident,
        };
    }
    if cli.paper_scale {
        config.plays_per_point = 30;
    }
    if let Some(plays) = cli.plays {
        config.plays_per_point = plays;
    }
    config.validate()?;

    let mut emitter = Emitter::new(&cli.out)?;
    let run = match cli.command {
        Command::Sweep => cmd_sweep(&config, &mut emitter),
        Command::Play => cmd_play(&config, &mut emitter),
        Command::Fixed => cmd_fixed(&config, &mut emitter),
        Command::SizeStudy => cmd_size_study(&config, &mut emitter),
        Command::NashCheck => cmd_nash_check(&config, &mut emitter),
        Command::DayTrace => cmd_day_trace(&config, &mut emitter),
    };
    if let Err(err) = run {
        emitter.cleanup();
        return Err(err);
    }
    emitter.finish(cli.command.name(), &config)?;
    println!("results written to {}", cli.out.display());
    Ok(())
}

fn cmd_sweep(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let base = config.play_config(config.kappa);
    let sweep = run_sweep(&base, &config.kappas, config.plays_per_point)?;
    let curve = demand_curve(&sweep);

    emitter.write("plays.csv", &report::plays_csv(&[&sweep]))?;
    emitter.write("summary.csv", &report::summary_csv(&[&sweep]))?;
    emitter.write("demand_curve.csv", &report::demand_curve_csv(&curve))?;
    emitter.write("trajectories.csv", &report::trajectories_csv(&sweep))?;

    if config.scenario == Scenario::Base {
        let comparison = strategy_comparison(
            &sweep,
            &config.grid(),
            config.lambda,
            config.fixed_days,
            config.seed,
        )?;
        emitter.write("strategy_comparison.csv", &report::strategy_comparison_csv(&comparison))?;
    } else {
        // Paired base sweep (same seeds) for the per-kappa delta columns.
        let mut base_variant = base.clone();
        base_variant.scenario = Scenario::Base;
        let base_sweep = run_sweep(&base_variant, &config.kappas, config.plays_per_point)?;
        let deltas = scenario_delta(&base_sweep, &sweep);
        emitter.write("scenario_delta.csv", &report::scenario_delta_csv(&deltas))?;
    }

    println!("demand curve ({} scenario):", config.scenario);
    println!("  kappa  mean_liquidity  netting_ratio");
    for row in &curve {
        println!(
            "  {:<6} {:<15.1} {:.4}",
            row.kappa, row.mean_total_liquidity, row.netting_ratio
        );
    }
    Ok(())
}

fn cmd_play(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let result = run_play(&config.play_config(config.kappa))?;
    emitter.write("trajectory.csv", &report::play_trajectory_csv(&result))?;
    emitter.write("bank_trajectory.csv", &report::bank_trajectory_csv(&result))?;
    let total: u64 = result.final_profile.iter().sum();
    println!(
        "play: converged={} days={} total_liquidity={}",
        result.converged, result.days_run, total
    );
    Ok(())
}

fn cmd_fixed(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let grid = config.grid();
    let levels: Vec<u64> = if config.fixed_levels.is_empty() {
        grid.levels().to_vec()
    } else {
        config.fixed_levels.clone()
    };
    let rows = delay_ladder(
        &levels,
        config.n_banks,
        config.fixed_days,
        &config.cost_params(config.kappa),
        config.scenario,
        config.seed,
    )?;
    emitter.write("delay_curve.csv", &report::delay_curve_csv(&rows))?;
    println!("delay curve over {} levels written", rows.len());
    Ok(())
}

fn cmd_size_study(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let base = config.play_config(config.kappa);
    let entries = run_size_study(&config.sizes, &base, &config.kappas, config.plays_per_point)?;
    let sweeps: Vec<&_> = entries.iter().map(|e| &e.sweep).collect();
    emitter.write("size_study.csv", &report::size_study_csv(&entries))?;
    emitter.write("plays.csv", &report::plays_csv(&sweeps))?;
    emitter.write("summary.csv", &report::summary_csv(&sweeps))?;
    for entry in &entries {
        println!("n_banks={}: {} sweep points", entry.n_banks, entry.sweep.points.len());
    }
    Ok(())
}

fn cmd_nash_check(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let play_config = config.play_config(config.kappa);
    let result = run_play(&play_config)?;
    if !result.converged {
        println!("warning: play did not converge within {} days", config.max_days);
    }
    let report = best_response_check(
        &result.final_profile,
        &play_config,
        config.nash_samples,
        config.epsilon,
    )?;
    emitter.write("nash_report.csv", &report::nash_report_csv(&report))?;
    emitter.write(
        "nash_summary.json",
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    println!(
        "nash check: max_gain={:.4} margin={:.4} epsilon={} -> {}",
        report.max_gain,
        report.margin,
        report.epsilon,
        if report.is_epsilon_nash { "epsilon-Nash" } else { "NOT epsilon-Nash" }
    );
    Ok(())
}

fn cmd_day_trace(config: &SimConfig, emitter: &mut Emitter) -> Result<()> {
    let actions = vec![config.trace_level; config.n_banks];
    let mut inst_rng = stream_rng(config.seed, &[0, purpose::INSTRUCTIONS]);
    let instructions = sample_instructions(&mut inst_rng, config.n_banks, config.day_length)?;
    let victim = (config.scenario == Scenario::Incident).then(|| {
        let mut rng = stream_rng(config.seed, &[0, purpose::VICTIM]);
        select_incident_victim(&mut rng, config.n_banks)
    });
    let (outcome, trace) = run_day_traced(
        &actions,
        &instructions,
        &config.cost_params(config.kappa),
        config.scenario,
        victim,
    )?;
    emitter.write("day_trace.csv", &report::day_trace_csv(&trace))?;
    let settled: u32 = outcome.settled_count.iter().sum();
    println!("day trace: {} instructions, {} settled", instructions.len(), settled);
    Ok(())
}
