//! A seeded multi-agent simulator of an interbank real-time gross
//! settlement (RTGS) system.
//!
//! Banks repeatedly play a settlement-day stage game: each morning every
//! bank commits a liquidity level from a common action grid, unit payments
//! arrive over the continuous day as a Poisson process, and a FIFO rule
//! settles them whenever the sender has funds — with queue cascades when it
//! does not. A day costs each bank its committed liquidity plus a delay
//! charge per payment, and the stage payoff is the negated total.
//!
//! The payoff function is a random variable the banks never see. They learn
//! it: every bank keeps a mean-payoff estimate per (own action, binned
//! opponent average) cell and a fictitious-play frequency estimate over the
//! opponent bins, explores randomly for a configurable phase, and then
//! maximizes expected immediate payoff. A play ends when no bank changes
//! its action for a full convergence window.
//!
//! On top of the play loop sit the experiment harness (delay-cost sweeps
//! producing liquidity demand curves, fixed-strategy baselines, a
//! system-size study, throughput-guideline and operational-incident
//! scenarios, and a Monte-Carlo best-response verifier) and a CLI that
//! emits plot-ready CSV tables with a checksummed run manifest.
//!
//! # Quick start
//!
//! ```
//! use rtgs_sim::{run_play, PlayConfig};
//!
//! // A trimmed configuration so the doctest stays fast; defaults are the
//! // full 15-bank, 10^4-unit-day system.
//! let mut config = PlayConfig::default();
//! config.n_banks = 4;
//! config.costs.day_length = 200.0;
//! config.exploration_days = 10;
//! config.max_days = 60;
//!
//! let result = run_play(&config).unwrap();
//! assert_eq!(result.days_run, result.total_liquidity_trajectory.len());
//! ```
//!
//! The `examples/` directory holds one runnable program per capability —
//! `cargo run --example demand_curve`, `single_play`, `nash_check`, and so
//! on — and the `rtgs-sim` binary exposes the same harness as subcommands.
//!
//! # Determinism
//!
//! Every random draw derives from one master seed via fixed 64-bit stream
//! splitting ([`rng::derive_seed`]), and all parallel work is keyed and
//! reassembled in deterministic order, so any run — including multi-threaded
//! sweeps — reproduces bit-identically from its seed.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod learning;
pub mod play;
pub mod report;
pub mod rng;
pub mod settlement;

pub use config::SimConfig;
pub use error::{Result, SimError};
pub use experiments::{
    best_response_check, delay_ladder, demand_curve, run_fixed_profile, run_size_study, run_sweep,
    scenario_delta, strategy_comparison, BestResponseReport, DelayCurveRow, DemandRow,
    FixedProfileStats, PlaySummary, ScenarioDeltaRow, SizeStudyEntry, StrategyComparisonRow,
    SweepPoint, SweepResult,
};
pub use learning::{bin_of_others_average, ActionGrid, BeliefState};
pub use play::{has_converged, run_play, PlayConfig, PlayResult};
pub use report::{Emitter, RunManifest};
pub use settlement::{
    run_day, run_day_traced, sample_instructions, select_incident_victim, CostParams, DayOutcome,
    PaymentInstruction, Scenario, TraceEvent, TraceKind,
};
