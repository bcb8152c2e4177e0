//! The repeated game: a sequence of settlement days run until the action
//! profile stabilizes.
//!
//! Every day all banks simultaneously choose a liquidity level, one day is
//! settled, and each bank updates its beliefs with exactly what it can
//! observe: its own action, its own realized payoff, and the grid-binned
//! average of the others' actions. A play ends when no bank has changed its
//! action for `convergence_window` consecutive days after the exploration
//! phase, or at the `max_days` cap (reported as non-convergence, not an
//! error).
//!
//! Runs are fully deterministic given the seed: per-day, per-purpose
//! sub-seeds come from [`crate::rng::derive_seed`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::learning::{bin_of_others_average, ActionGrid, BeliefState};
use crate::rng::{purpose, stream_rng};
use crate::settlement::{
    run_day, sample_instructions, select_incident_victim, CostParams, Scenario,
};

/// Full parameter set for one play.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayConfig {
    pub n_banks: usize,
    pub grid: ActionGrid,
    pub costs: CostParams,
    pub scenario: Scenario,
    /// Days of uniformly random action choice before informed decisions.
    pub exploration_days: usize,
    /// Consecutive identical profiles required to declare convergence.
    pub convergence_window: usize,
    /// Hard cap on simulated days; hitting it flags the play as
    /// non-converged.
    pub max_days: usize,
    pub seed: u64,
}

impl Default for PlayConfig {
    fn default() -> Self {
        Self {
            n_banks: 15,
            grid: ActionGrid::default(),
            costs: CostParams {
                lambda: 1.0,
                kappa: 8.0,
                throughput_penalty: 64.0,
                throughput_threshold: 1_000.0,
                day_length: 10_000.0,
            },
            scenario: Scenario::Base,
            exploration_days: 500,
            convergence_window: 10,
            max_days: 5_000,
            seed: 1,
        }
    }
}

impl PlayConfig {
    pub fn validate(&self) -> Result<()> {
        use crate::error::SimError;
        if self.n_banks < 2 {
            return Err(SimError::InvalidConfig(format!(
                "n_banks: must be >= 2, got {}",
                self.n_banks
            )));
        }
        if self.convergence_window < 1 {
            return Err(SimError::InvalidConfig("convergence_window: must be >= 1".into()));
        }
        self.costs.validate(self.scenario)
    }
}

/// Everything a finished play reports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlayResult {
    /// Whether the profile held still for the full convergence window.
    pub converged: bool,
    /// Days actually simulated.
    pub days_run: usize,
    /// The last day's action profile (liquidity levels per bank).
    pub final_profile: Vec<u64>,
    /// Per-day action profiles; the last `convergence_window` entries are
    /// identical iff `converged`.
    pub profile_trajectory: Vec<Vec<u64>>,
    /// Per-day total committed liquidity.
    pub total_liquidity_trajectory: Vec<u64>,
    /// Per-day, per-bank realized payoffs.
    pub payoff_trajectory: Vec<Vec<f64>>,
    /// Per-day mean (over banks) of the total delay fraction.
    pub mean_delay_trajectory: Vec<f64>,
}

/// True iff the history holds at least `window` profiles and the last
/// `window` of them are elementwise identical.
pub fn has_converged(profile_history: &[Vec<u64>], window: usize) -> bool {
    if window == 0 || profile_history.len() < window {
        return false;
    }
    let last = &profile_history[profile_history.len() - 1];
    profile_history[profile_history.len() - window..].iter().all(|p| p == last)
}

/// Runs one play to convergence or the day cap.
pub fn run_play(config: &PlayConfig) -> Result<PlayResult> {
    config.validate()?;
    let n = config.n_banks;
    let levels = config.grid.len();
    let mut beliefs: Vec<BeliefState> =
        (0..n).map(|_| BeliefState::new(levels, config.exploration_days as u32)).collect();

    let mut result = PlayResult::default();
    for day in 0..config.max_days {
        let day_tag = day as u64;
        let action_indices: Vec<usize> = (0..n)
            .map(|bank| {
                let mut rng = stream_rng(config.seed, &[day_tag, purpose::ACTION, bank as u64]);
                beliefs[bank].choose_action(&mut rng)
            })
            .collect();
        let actions: Vec<u64> = action_indices.iter().map(|&i| config.grid.level(i)).collect();

        let mut inst_rng = stream_rng(config.seed, &[day_tag, purpose::INSTRUCTIONS]);
        let instructions = sample_instructions(&mut inst_rng, n, config.costs.day_length)?;
        let victim = (config.scenario == Scenario::Incident).then(|| {
            let mut rng = stream_rng(config.seed, &[day_tag, purpose::VICTIM]);
            select_incident_victim(&mut rng, n)
        });
        let outcome = run_day(&actions, &instructions, &config.costs, config.scenario, victim)?;

        for bank in 0..n {
            let bin = bin_of_others_average(&actions, bank, &config.grid);
            beliefs[bank].update(action_indices[bank], bin, outcome.payoff[bank])?;
        }

        result.total_liquidity_trajectory.push(actions.iter().sum());
        let mean_delay =
            outcome.total_delay_fraction.iter().sum::<f64>() / n as f64;
        result.mean_delay_trajectory.push(mean_delay);
        result.payoff_trajectory.push(outcome.payoff);
        result.profile_trajectory.push(actions);
        result.days_run = day + 1;

        // Convergence counts only informed days: a window is accepted once
        // it lies entirely past the exploration phase.
        if day + 1 >= config.exploration_days + config.convergence_window
            && has_converged(&result.profile_trajectory, config.convergence_window)
        {
            result.converged = true;
            break;
        }
    }
    result.final_profile = result.profile_trajectory.last().cloned().unwrap_or_default();
    Ok(result)
}
