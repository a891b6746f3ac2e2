//! Pipeline configuration: stage selection plus every tunable the stages
//! consume. All randomized stages derive their streams from the single root
//! seed, so one integer reproduces a corpus run byte for byte.

use std::collections::BTreeSet;
use std::path::PathBuf;

use dappnet_core::backbone::FilterMode;
use dappnet_core::nullmodel::PartitionSource;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("stage list must not be empty")]
    NoStages,
    #[error("alpha threshold must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("removal grid must satisfy 0 < step <= max <= 0.2")]
    BadGrid,
    #[error("giant fraction must lie in (0, 1], got {0}")]
    BadGiantFraction(f64),
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Extract,
    Build,
    Filter,
    Metrics,
    Nullmodels,
    Resilience,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Extract,
        Stage::Build,
        Stage::Filter,
        Stage::Metrics,
        Stage::Nullmodels,
        Stage::Resilience,
        Stage::Report,
    ];

    pub fn parse(s: &str) -> Result<Stage, ConfigError> {
        match s {
            "extract" => Ok(Stage::Extract),
            "build" => Ok(Stage::Build),
            "filter" => Ok(Stage::Filter),
            "metrics" => Ok(Stage::Metrics),
            "nullmodels" | "nullmodel" => Ok(Stage::Nullmodels),
            "resilience" => Ok(Stage::Resilience),
            "report" => Ok(Stage::Report),
            other => Err(ConfigError::UnknownStage(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Extract => "extract",
            Stage::Build => "build",
            Stage::Filter => "filter",
            Stage::Metrics => "metrics",
            Stage::Nullmodels => "nullmodels",
            Stage::Resilience => "resilience",
            Stage::Report => "report",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub stages: BTreeSet<Stage>,
    pub alpha_threshold: f64,
    pub filter_mode: FilterMode,
    pub include_sentinel: bool,
    pub seed: u64,
    /// removal grid step and upper bound (fractions of nodes removed)
    pub grid_step: f64,
    pub grid_max: f64,
    pub trials: usize,
    pub realizations: usize,
    pub preserve_degree: bool,
    pub partition_source: PartitionSource,
    /// largest-component size a network must exceed for the null-model and
    /// removal analyses
    pub min_component: usize,
    pub giant_fraction: f64,
    pub min_secondary: usize,
    pub clique_budget: usize,
    /// worker budget for concurrent dApp processing (0 = all cores)
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            output_dir: PathBuf::from("out"),
            stages: Stage::ALL.into_iter().collect(),
            alpha_threshold: 0.05,
            filter_mode: FilterMode::EitherDirection,
            include_sentinel: true,
            seed: 42,
            grid_step: 0.01,
            grid_max: 0.20,
            trials: 100,
            realizations: 100,
            preserve_degree: false,
            partition_source: PartitionSource::WeakComponents,
            min_component: 50,
            giant_fraction: 0.9,
            min_secondary: 2,
            clique_budget: 1_000_000,
            jobs: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.stages.is_empty() {
            return Err(ConfigError::NoStages);
        }
        if !(self.alpha_threshold > 0.0 && self.alpha_threshold < 1.0) {
            return Err(ConfigError::BadAlpha(self.alpha_threshold));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= self.grid_max && self.grid_max <= 0.2) {
            return Err(ConfigError::BadGrid);
        }
        if !(self.giant_fraction > 0.0 && self.giant_fraction <= 1.0) {
            return Err(ConfigError::BadGiantFraction(self.giant_fraction));
        }
        if self.trials == 0 {
            return Err(ConfigError::Zero("trials"));
        }
        if self.realizations == 0 {
            return Err(ConfigError::Zero("realizations"));
        }
        Ok(())
    }

    /// Removal grid [0, step, 2*step, ..] up to grid_max, values rounded to
    /// nanofraction so they print cleanly.
    pub fn removal_grid(&self) -> Vec<f64> {
        let mut grid = Vec::new();
        let mut i = 0usize;
        loop {
            let f = ((i as f64 * self.grid_step) * 1e9).round() / 1e9;
            if f > self.grid_max + 1e-12 {
                break;
            }
            grid.push(f);
            i += 1;
        }
        grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        PipelineConfig::default().validate().unwrap();
    }

    #[test]
    fn default_grid_is_21_points() {
        let grid = PipelineConfig::default().removal_grid();
        assert_eq!(grid.len(), 21);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[7], 0.07);
        assert_eq!(*grid.last().unwrap(), 0.20);
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut cfg = PipelineConfig::default();
        cfg.alpha_threshold = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::default();
        cfg.stages.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::default();
        cfg.grid_max = 0.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn stage_parsing() {
        assert_eq!(Stage::parse("extract").unwrap(), Stage::Extract);
        assert_eq!(Stage::parse("nullmodel").unwrap(), Stage::Nullmodels);
        assert!(Stage::parse("bogus").is_err());
    }
}
