//! Flat key-value run configuration (TOML).
//!
//! Every key is optional and defaults to the base model parameters: 15
//! banks, a day of 10^4 time units, liquidity cost 1 per unit, the 0-80/2
//! action grid, a 10-day convergence window, and 5 plays per sweep point.
//! Unknown keys are rejected. `SimConfig::validate` names the offending
//! field in every error.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::learning::ActionGrid;
use crate::play::PlayConfig;
use crate::settlement::{CostParams, Scenario};

/// The documented configuration schema. See `SimConfig::default` for the
/// value every field takes when unset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    /// Number of banks in the system.
    pub n_banks: usize,
    /// Day length `T` in time units; also the expected daily payment count.
    pub day_length: f64,
    /// Liquidity cost per committed unit.
    pub lambda: f64,
    /// Delay cost used by single-kappa commands (play, fixed, nash-check,
    /// day-trace).
    pub kappa: f64,
    /// Delay costs swept by `sweep` and `size-study`.
    pub kappas: Vec<f64>,
    /// Largest liquidity level on the action grid.
    pub grid_max: u64,
    /// Grid spacing.
    pub grid_step: u64,
    /// Days of random exploration at the start of each play.
    pub exploration_days: usize,
    /// Consecutive identical profiles required for convergence.
    pub convergence_window: usize,
    /// Day cap per play.
    pub max_days: usize,
    /// Independent plays per sweep point.
    pub plays_per_point: usize,
    pub scenario: Scenario,
    /// Flat charge per late payment (throughput scenario).
    pub throughput_penalty: f64,
    /// Lateness threshold in day units; defaults to `day_length / 10`.
    pub throughput_threshold: Option<f64>,
    /// Master seed; every random stream in a run derives from it.
    pub seed: u64,
    /// System sizes for `size-study`.
    pub sizes: Vec<usize>,
    /// Symmetric liquidity levels for the `fixed` ladder; empty means every
    /// grid level.
    pub fixed_levels: Vec<u64>,
    /// Days per rung of the `fixed` ladder.
    pub fixed_days: usize,
    /// Settlement days per candidate profile in `nash-check`.
    pub nash_samples: usize,
    /// Extra slack accepted by `nash-check` on top of the Monte-Carlo
    /// margin.
    pub epsilon: f64,
    /// Per-bank liquidity used by `day-trace`.
    pub trace_level: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_banks: 15,
            day_length: 10_000.0,
            lambda: 1.0,
            kappa: 8.0,
            kappas: vec![0.125, 0.5, 2.0, 8.0, 32.0, 128.0, 512.0],
            grid_max: 80,
            grid_step: 2,
            exploration_days: 500,
            convergence_window: 10,
            max_days: 5_000,
            plays_per_point: 5,
            scenario: Scenario::Base,
            throughput_penalty: 64.0,
            throughput_threshold: None,
            seed: 1,
            sizes: vec![15, 50],
            fixed_levels: Vec::new(),
            fixed_days: 200,
            nash_samples: 50,
            epsilon: 0.0,
            trace_level: 10,
        }
    }
}

impl SimConfig {
    /// Loads and validates a configuration file. An empty file yields the
    /// full defaults; unknown keys and malformed values are errors.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            SimError::Parse(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    /// Parses a configuration from TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SimConfig = toml::from_str(text)
            .map_err(|e| SimError::Parse(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Serializes the fully resolved configuration; `from_toml` of the
    /// output reproduces `self` exactly.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_banks < 2 {
            return Err(SimError::InvalidConfig(format!(
                "n_banks: must be >= 2, got {}",
                self.n_banks
            )));
        }
        if !(self.day_length > 0.0) || !self.day_length.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "day_length: must be a positive finite number, got {}",
                self.day_length
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "lambda: must be > 0, got {}",
                self.lambda
            )));
        }
        if self.kappa < 0.0 || !self.kappa.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "kappa: must be >= 0, got {}",
                self.kappa
            )));
        }
        if self.kappas.is_empty() {
            return Err(SimError::InvalidConfig("kappas: must not be empty".into()));
        }
        if let Some(bad) = self.kappas.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(SimError::InvalidConfig(format!("kappas: must be >= 0, got {bad}")));
        }
        // Delegates the grid-shape rules (even spacing, leading zero).
        ActionGrid::with_step(self.grid_max, self.grid_step)?;
        if self.convergence_window < 1 {
            return Err(SimError::InvalidConfig(format!(
                "convergence_window: must be >= 1, got {}",
                self.convergence_window
            )));
        }
        if self.plays_per_point < 1 {
            return Err(SimError::InvalidConfig(format!(
                "plays_per_point: must be >= 1, got {}",
                self.plays_per_point
            )));
        }
        if self.throughput_penalty < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "throughput_penalty: must be >= 0, got {}",
                self.throughput_penalty
            )));
        }
        if let Some(t) = self.throughput_threshold {
            if !(t > 0.0 && t <= self.day_length) {
                return Err(SimError::InvalidConfig(format!(
                    "throughput_threshold: must lie in (0, day_length], got {t}"
                )));
            }
        }
        if let Some(bad) = self.sizes.iter().find(|&&s| s < 2) {
            return Err(SimError::InvalidConfig(format!("sizes: must be >= 2, got {bad}")));
        }
        if self.fixed_days < 1 {
            return Err(SimError::InvalidConfig("fixed_days: must be >= 1".into()));
        }
        if self.nash_samples < 1 {
            return Err(SimError::InvalidConfig("nash_samples: must be >= 1".into()));
        }
        if self.epsilon < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "epsilon: must be >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// The lateness threshold with the `day_length / 10` default applied.
    pub fn effective_threshold(&self) -> f64 {
        self.throughput_threshold.unwrap_or(self.day_length / 10.0)
    }

    pub fn grid(&self) -> ActionGrid {
        ActionGrid::with_step(self.grid_max, self.grid_step).expect("validated grid")
    }

    pub fn cost_params(&self, kappa: f64) -> CostParams {
        CostParams {
            lambda: self.lambda,
            kappa,
            throughput_penalty: self.throughput_penalty,
            throughput_threshold: self.effective_threshold(),
            day_length: self.day_length,
        }
    }

    /// Builds the play configuration for a given delay cost.
    pub fn play_config(&self, kappa: f64) -> PlayConfig {
        PlayConfig {
            n_banks: self.n_banks,
            grid: self.grid(),
            costs: self.cost_params(kappa),
            scenario: self.scenario,
            exploration_days: self.exploration_days,
            convergence_window: self.convergence_window,
            max_days: self.max_days,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let config = SimConfig::from_toml("").unwrap();
        assert_eq!(config, SimConfig::default());
        assert_eq!(config.n_banks, 15);
        assert_eq!(config.day_length, 10_000.0);
        assert_eq!(config.lambda, 1.0);
        assert_eq!(config.grid().len(), 41);
        assert_eq!(config.convergence_window, 10);
        assert_eq!(config.effective_threshold(), 1_000.0);
    }

    #[test]
    fn validation_errors_name_the_field() {
        let err = SimConfig::from_toml("n_banks = 1").unwrap_err();
        assert!(err.to_string().contains("n_banks"), "got: {err}");
        let err = SimConfig::from_toml("lambda = 0.0").unwrap_err();
        assert!(err.to_string().contains("lambda"), "got: {err}");
        let err = SimConfig::from_toml("grid_max = 81").unwrap_err();
        assert!(err.to_string().contains("grid_max"), "got: {err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(SimConfig::from_toml("no_such_key = 3").is_err());
    }

    #[test]
    fn malformed_toml_is_a_parse_error() {
        assert!(matches!(SimConfig::from_toml("n_banks = "), Err(SimError::Parse(_))));
    }

    #[test]
    fn kappa_list_override() {
        let config = SimConfig::from_toml("kappas = [8.0]").unwrap();
        assert_eq!(config.kappas, vec![8.0]);
    }

    #[test]
    fn config_round_trips() {
        let mut config = SimConfig::default();
        config.kappa = 0.125;
        config.scenario = Scenario::Incident;
        config.seed = 99;
        let text = config.to_toml();
        let back = SimConfig::from_toml(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn missing_file_is_a_parse_error() {
        let err = SimConfig::from_path(Path::new("/definitely/not/here.toml")).unwrap_err();
        assert!(matches!(err, SimError::Parse(_)));
    }
}
