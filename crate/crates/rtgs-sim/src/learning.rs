//! A bank's information state and its action-choice rule.
//!
//! Each bank accumulates two estimates from what it can observe — its own
//! action, its own realized payoff, and the grid-binned average of the other
//! banks' actions:
//!
//! - a payoff estimate per (own action, opponent-average bin) cell: the
//!   arithmetic mean of the payoffs recorded there,
//! - a fictitious-play frequency estimate over opponent-average bins,
//!   `(1 + observations of the bin) / (days observed + number of bins)`,
//!   which starts uniform and corresponds to Bayesian updating of a
//!   constant unknown distribution.
//!
//! Action choice runs in three regimes: an initial phase of uniformly random
//! exploration; forced exploration of any action never tried against the
//! current modal bin; and otherwise maximization of the expected payoff under
//! the frequency estimate. Payoff ties break toward the cheaper (lower)
//! liquidity level.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Per-day probability that a bank plays a forced-exploration trial when
/// the most recently encountered opponent bin still has untried actions.
pub const FORCED_EXPLORATION_RATE: f64 = 0.15;

/// The common action set: liquidity levels a bank may commit.
///
/// Levels are strictly increasing, evenly spaced, and start at 0. The default
/// grid is 0 to 80 in steps of 2 (41 levels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionGrid {
    levels: Vec<u64>,
}

impl ActionGrid {
    /// Builds a grid from explicit levels, validating the grid invariants.
    pub fn new(levels: Vec<u64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(SimError::InvalidConfig("grid: must have at least one level".into()));
        }
        if levels[0] != 0 {
            return Err(SimError::InvalidConfig(format!(
                "grid: first level must be 0, got {}",
                levels[0]
            )));
        }
        if levels.len() > 1 {
            let step = levels[1] - levels[0];
            if step == 0 {
                return Err(SimError::InvalidConfig("grid: levels must be strictly increasing".into()));
            }
            for w in levels.windows(2) {
                if w[1] <= w[0] || w[1] - w[0] != step {
                    return Err(SimError::InvalidConfig(
                        "grid: levels must be strictly increasing and evenly spaced".into(),
                    ));
                }
            }
        }
        Ok(Self { levels })
    }

    /// Grid `0, step, 2*step, ..., max` (requires `step` to divide `max`).
    pub fn with_step(max: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(SimError::InvalidConfig("grid_step: must be > 0".into()));
        }
        if max % step != 0 {
            return Err(SimError::InvalidConfig(format!(
                "grid_max: {max} is not a multiple of grid_step {step}"
            )));
        }
        Self::new((0..=max / step).map(|i| i * step).collect())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// Liquidity level at `index`. Panics on out-of-range indices.
    pub fn level(&self, index: usize) -> u64 {
        self.levels[index]
    }

    /// Index of the grid level nearest to `value`; a midpoint tie rounds to
    /// the higher level.
    pub fn nearest_index(&self, value: f64) -> usize {
        let upper = self.levels.partition_point(|&l| (l as f64) < value);
        if upper == 0 {
            return 0;
        }
        if upper == self.levels.len() {
            return upper - 1;
        }
        let below = value - self.levels[upper - 1] as f64;
        let above = self.levels[upper] as f64 - value;
        if below < above {
            upper - 1
        } else {
            upper
        }
    }
}

impl Default for ActionGrid {
    fn default() -> Self {
        Self::with_step(80, 2).expect("default grid is valid")
    }
}

/// Bins the average action of everyone except `bank` to the grid.
///
/// `actions` must hold at least two entries, all on the grid.
pub fn bin_of_others_average(actions: &[u64], bank: usize, grid: &ActionGrid) -> usize {
    debug_assert!(actions.len() >= 2 && bank < actions.len());
    let sum: u64 = actions.iter().sum::<u64>() - actions[bank];
    let mean = sum as f64 / (actions.len() - 1) as f64;
    grid.nearest_index(mean)
}

/// One bank's accumulated payoff and opponent-frequency estimates.
///
/// Serializable as a snapshot for checkpoint/resume and test fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefState {
    n_levels: usize,
    /// Row-major `[own action][opponent bin]` payoff totals.
    payoff_sum: Vec<f64>,
    /// Observation counts per cell.
    payoff_count: Vec<u32>,
    /// Observation counts per opponent bin; sums to `days_observed`.
    bin_count: Vec<u32>,
    /// Bin counts from informed days only; drives forced exploration, so
    /// the exploration phase's opponent mix does not mask where play
    /// actually lives now.
    informed_bin_count: Vec<u32>,
    days_observed: u32,
    /// Remaining days of the uniformly random exploration phase.
    exploration_remaining: u32,
    /// The opponent bin observed on the most recent day.
    last_bin: Option<usize>,
}

impl BeliefState {
    pub fn new(n_levels: usize, exploration_days: u32) -> Self {
        Self {
            n_levels,
            payoff_sum: vec![0.0; n_levels * n_levels],
            payoff_count: vec![0; n_levels * n_levels],
            bin_count: vec![0; n_levels],
            informed_bin_count: vec![0; n_levels],
            days_observed: 0,
            exploration_remaining: exploration_days,
            last_bin: None,
        }
    }

    pub fn days_observed(&self) -> u32 {
        self.days_observed
    }

    pub fn exploration_remaining(&self) -> u32 {
        self.exploration_remaining
    }

    /// Observation count of the (action, bin) cell.
    pub fn count(&self, action: usize, bin: usize) -> u32 {
        self.payoff_count[action * self.n_levels + bin]
    }

    /// Mean payoff recorded at the cell, if it has been sampled.
    pub fn estimate(&self, action: usize, bin: usize) -> Option<f64> {
        let idx = action * self.n_levels + bin;
        let c = self.payoff_count[idx];
        (c > 0).then(|| self.payoff_sum[idx] / c as f64)
    }

    /// Records one day's observation: own action index, observed opponent
    /// bin, and the realized payoff.
    pub fn update(&mut self, action: usize, bin: usize, payoff: f64) -> Result<()> {
        if action >= self.n_levels || bin >= self.n_levels {
            return Err(SimError::ContractViolation(format!(
                "belief update: cell ({action}, {bin}) out of range for {} levels",
                self.n_levels
            )));
        }
        let idx = action * self.n_levels + bin;
        self.payoff_sum[idx] += payoff;
        self.payoff_count[idx] += 1;
        self.bin_count[bin] += 1;
        if self.exploration_remaining == 0 {
            self.informed_bin_count[bin] += 1;
        }
        self.days_observed += 1;
        self.last_bin = Some(bin);
        Ok(())
    }

    /// Estimated probability that the opponents' average lands in `bin`:
    /// `(1 + bin observations) / (days observed + number of bins)`. The full
    /// vector sums to 1 and starts uniform.
    pub fn probability(&self, bin: usize) -> f64 {
        (1.0 + self.bin_count[bin] as f64) / (self.days_observed as f64 + self.n_levels as f64)
    }

    /// The most frequently observed opponent bin; ties go to the lower bin.
    pub fn modal_bin(&self) -> usize {
        let mut best = 0;
        for b in 1..self.n_levels {
            if self.bin_count[b] > self.bin_count[best] {
                best = b;
            }
        }
        best
    }

    /// The bin forced exploration aims at: the most frequent bin of the
    /// informed phase, or the latest observation before any informed day
    /// exists.
    fn exploration_target_bin(&self) -> Option<usize> {
        if self.informed_bin_count.iter().all(|&c| c == 0) {
            return self.last_bin;
        }
        let mut best = 0;
        for b in 1..self.n_levels {
            if self.informed_bin_count[b] > self.informed_bin_count[best] {
                best = b;
            }
        }
        Some(best)
    }

    /// Expected payoff of playing `action` under the frequency estimate.
    ///
    /// Unsampled cells fall back to the global mean over all recorded
    /// payoffs (a "typical day"), so the expectation is defined for every
    /// action without favoring unexplored ground.
    pub fn expected_payoff(&self, action: usize) -> f64 {
        let l = self.n_levels;
        let fallback = if std::env::var("RTGS_VARIANT").unwrap_or_default().contains("row") {
            let row = &self.payoff_count[action * l..(action + 1) * l];
            let mut cell_mean_sum = 0.0;
            let mut sampled = 0usize;
            for (b, &c) in row.iter().enumerate() {
                if c > 0 {
                    cell_mean_sum += self.payoff_sum[action * l + b] / c as f64;
                    sampled += 1;
                }
            }
            if sampled > 0 {
                cell_mean_sum / sampled as f64
            } else {
                self.global_mean().unwrap_or(0.0)
            }
        } else {
            self.global_mean().unwrap_or(0.0)
        };
        let mut total = 0.0;
        for b in 0..l {
            let f = self.estimate(action, b).unwrap_or(fallback);
            total += f * self.probability(b);
        }
        total
    }

    fn global_mean(&self) -> Option<f64> {
        if self.days_observed == 0 {
            return None;
        }
        let sum: f64 = self.payoff_sum.iter().sum();
        Some(sum / self.days_observed as f64)
    }

    /// Chooses the next action index.
    ///
    /// 1. While the exploration phase lasts, draw uniformly at random.
    /// 2. Otherwise, if some action was never tried against the opponent
    ///    bin encountered most recently, play the least-sampled such action
    ///    (by total samples, ties to the lower level) with probability
    ///    [`FORCED_EXPLORATION_RATE`]. The rate keeps the banks' forced
    ///    trials desynchronized: when one bank experiments while the rest
    ///    hold still, its observation lands in the very column that
    ///    triggered the trial, so coverage completes and the rule dies out.
    ///    Simultaneous sweeps would instead displace everyone's observed
    ///    bin and starve themselves forever.
    /// 3. Otherwise maximize [`expected_payoff`](Self::expected_payoff),
    ///    ties to the lower level.
    ///
    /// Because rule 2 keeps firing (at its rate) until the encountered
    /// column is fully sampled, a profile cannot sit still through a whole
    /// convergence window while any bank still owes trials there: plays
    /// only converge on locally explored ground.
    pub fn choose_action<R: Rng>(&mut self, rng: &mut R) -> usize {
        if self.exploration_remaining > 0 {
            self.exploration_remaining -= 1;
            return rng.gen_range(0..self.n_levels);
        }
        let variant = std::env::var("RTGS_VARIANT").unwrap_or_default();
        let rate: f64 = std::env::var("RTGS_RATE")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(FORCED_EXPLORATION_RATE);
        let target = if variant.contains("last") {
            self.last_bin
        } else if variant.contains("informed") {
            self.exploration_target_bin()
        } else {
            Some(self.modal_bin())
        };
        if let Some(bin) = target {
            let mut forced: Option<(usize, u32)> = None;
            for a in 0..self.n_levels {
                let idx = a * self.n_levels + bin;
                if self.payoff_count[idx] == 0 {
                    let total: u32 = self.payoff_count
                        [a * self.n_levels..(a + 1) * self.n_levels]
                        .iter()
                        .sum();
                    if forced.map_or(true, |(_, t)| total < t) {
                        forced = Some((a, total));
                    }
                }
            }
            if let Some((a, _)) = forced {
                if rng.gen::<f64>() < rate {
                    return a;
                }
            }
        }
        let mut best = 0;
        let mut best_value = self.expected_payoff(0);
        for a in 1..self.n_levels {
            let v = self.expected_payoff(a);
            if v > best_value {
                best = a;
                best_value = v;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn default_grid_has_41_levels() {
        let grid = ActionGrid::default();
        assert_eq!(grid.len(), 41);
        assert_eq!(grid.level(0), 0);
        assert_eq!(grid.level(40), 80);
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(ActionGrid::new(vec![]).is_err());
        assert!(ActionGrid::new(vec![2, 4]).is_err());
        assert!(ActionGrid::new(vec![0, 2, 6]).is_err());
        assert!(ActionGrid::new(vec![0, 0]).is_err());
        assert!(ActionGrid::with_step(81, 2).is_err());
        assert!(ActionGrid::new(vec![0]).is_ok());
    }

    #[test]
    fn others_average_bins_to_nearest_level() {
        let grid = ActionGrid::default();
        // All others at an exact grid point.
        assert_eq!(bin_of_others_average(&[40, 10, 10, 10], 0, &grid), 5);
        // Midpoint rounds to the higher level: mean of {0, 2} is 1.
        assert_eq!(bin_of_others_average(&[6, 0, 2], 0, &grid), 1);
        // Mean of {0, 2, 80} is 27.33, nearest level 28 (index 14).
        assert_eq!(bin_of_others_average(&[0, 0, 2, 80], 0, &grid), 14);
    }

    #[test]
    fn single_sample_mean_is_the_payoff() {
        let mut b = BeliefState::new(41, 0);
        b.update(3, 7, -7.2).unwrap();
        assert_eq!(b.estimate(3, 7), Some(-7.2));
        assert_eq!(b.estimate(3, 8), None);
    }

    #[test]
    fn cell_mean_of_two_samples() {
        let mut b = BeliefState::new(41, 0);
        b.update(3, 7, -2.0).unwrap();
        b.update(3, 7, -4.0).unwrap();
        assert_eq!(b.estimate(3, 7), Some(-3.0));
    }

    #[test]
    fn bin_counts_sum_to_days_observed() {
        let mut b = BeliefState::new(5, 0);
        let mut rng = rng_from(4);
        for day in 0..100u32 {
            b.update(rng.gen_range(0..5), rng.gen_range(0..5), -(day as f64)).unwrap();
        }
        let total: u32 = (0..5).map(|bin| b.bin_count[bin]).sum();
        assert_eq!(total, 100);
        assert_eq!(b.days_observed(), 100);
    }

    #[test]
    fn out_of_range_update_is_a_contract_violation() {
        let mut b = BeliefState::new(4, 0);
        assert!(b.update(4, 0, 1.0).is_err());
        assert!(b.update(0, 4, 1.0).is_err());
    }

    #[test]
    fn fresh_probability_is_uniform() {
        let b = BeliefState::new(41, 0);
        for bin in 0..41 {
            assert_eq!(b.probability(bin), 1.0 / 41.0);
        }
    }

    #[test]
    fn probability_after_one_observation() {
        let mut b = BeliefState::new(41, 0);
        b.update(0, 5, -1.0).unwrap();
        assert_eq!(b.probability(5), 2.0 / 42.0);
        assert_eq!(b.probability(4), 1.0 / 42.0);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut b = BeliefState::new(9, 0);
        let mut rng = rng_from(2);
        for _ in 0..57 {
            b.update(rng.gen_range(0..9), rng.gen_range(0..9), rng.gen::<f64>()).unwrap();
        }
        let sum: f64 = (0..9).map(|bin| b.probability(bin)).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exploration_draws_are_uniform() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let mut b = BeliefState::new(41, 10_000);
        let mut rng = rng_from(17);
        let mut counts = vec![0u32; 41];
        for _ in 0..10_000 {
            counts[b.choose_action(&mut rng)] += 1;
        }
        assert_eq!(b.exploration_remaining(), 0);
        let expected = 10_000.0 / 41.0;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new(40.0).unwrap().inverse_cdf(0.99);
        assert!(stat < critical, "chi-square {stat} >= {critical}");
    }

    #[test]
    fn informed_choice_maximizes_expected_payoff() {
        // f = [[-1, -9], [-3, -3]] with uniform opponent estimate: expected
        // payoffs are (-5, -3), so action 1 wins.
        let mut b = BeliefState::new(2, 0);
        b.update(0, 0, -1.0).unwrap();
        b.update(0, 1, -9.0).unwrap();
        b.update(1, 0, -3.0).unwrap();
        b.update(1, 1, -3.0).unwrap();
        assert_eq!(b.probability(0), 0.5);
        assert_eq!(b.choose_action(&mut rng_from(0)), 1);
    }

    #[test]
    fn payoff_ties_break_toward_lower_level() {
        let mut b = BeliefState::new(2, 0);
        b.update(0, 0, -3.0).unwrap();
        b.update(0, 1, -3.0).unwrap();
        b.update(1, 0, -3.0).unwrap();
        b.update(1, 1, -3.0).unwrap();
        assert_eq!(b.choose_action(&mut rng_from(0)), 0);
    }

    #[test]
    fn forced_exploration_covers_the_encountered_bin() {
        let l = 7;
        let mut b = BeliefState::new(l, 0);
        // Pin the encountered bin to 3 with seed observations.
        b.update(0, 3, -1.0).unwrap();
        b.update(0, 3, -1.0).unwrap();
        let mut rng = rng_from(5);
        let mut fires = 0;
        for _ in 0..5_000 {
            let a = b.choose_action(&mut rng);
            if b.count(a, 3) == 0 {
                fires += 1;
            }
            b.update(a, 3, -1.0).unwrap();
            if (0..l).all(|x| b.count(x, 3) > 0) {
                break;
            }
        }
        assert!((0..l).all(|a| b.count(a, 3) > 0), "column 3 not covered");
        // Every fire lands a sample in the column, so at most L fires are
        // ever needed for one bin.
        assert!(fires <= l, "{fires} forced trials for {l} actions");
    }

    #[test]
    fn choice_is_deterministic_given_state_and_seed() {
        let mut a = BeliefState::new(11, 3);
        let mut b = a.clone();
        assert_eq!(a.choose_action(&mut rng_from(9)), b.choose_action(&mut rng_from(9)));
        assert_eq!(a, b);
    }

    #[test]
    fn snapshot_round_trips_through_json() {
        let mut b = BeliefState::new(5, 2);
        b.update(1, 4, -2.5).unwrap();
        b.update(0, 0, 1.25).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        let back: BeliefState = serde_json::from_str(&text).unwrap();
        assert_eq!(b, back);
    }
}
