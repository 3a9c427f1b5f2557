use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{Column, SyntheticSpec};
use crate::error::{Error, Result};
use crate::evolve::{BoundsBox, GaParams};
use crate::moo::{RnsgaParams, RnsgaPreferences};
use crate::rng::{derive_seed, role};
use crate::surrogate::CartParams;

/// Where the operating data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum DataSource {
    Csv { path: PathBuf },
    Synthetic(SyntheticSpec),
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic(SyntheticSpec::single_peak())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitConfig {
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            test_fraction: 0.2,
            seed: 0,
        }
    }
}

/// Tree hyperparameters for each controlled variable.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CartConfig {
    pub absorbed_duty: CartParams,
    pub stack_o2: CartParams,
    pub cot: CartParams,
}

impl CartConfig {
    pub fn for_target(&self, target: Column) -> Result<&CartParams> {
        match target {
            Column::AbsorbedDuty => Ok(&self.absorbed_duty),
            Column::StackO2 => Ok(&self.stack_o2),
            Column::Cot => Ok(&self.cot),
            other => Err(Error::InvalidParams(format!("`{}` is not a controlled variable", other.key()))),
        }
    }

    pub fn uniform(params: CartParams) -> Self {
        Self {
            absorbed_duty: params,
            stack_o2: params,
            cot: params,
        }
    }
}

/// Everything a pipeline run depends on. Every field has a default, so a
/// partial JSON document is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub data: DataSource,
    pub split: SplitConfig,
    pub cart: CartConfig,
    /// Minimum test R² for a surrogate to take part in optimization.
    pub retain_threshold: f64,
    /// Search box for (fired duty, throughput, CIT).
    pub bounds: BoundsBox,
    /// Shared by NSGA-II, R-NSGA-II, the best responses and the Nash search.
    /// Each stage runs on its own seed derived from `ga.seed`.
    pub ga: GaParams,
    pub rnsga: RnsgaPreferences,
    /// Grid points per axis for the brute-force oracle.
    pub oracle_resolution: usize,
    /// Uniform box samples written to `feasible_scatter.csv`.
    pub scatter_samples: usize,
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            data: DataSource::default(),
            split: SplitConfig::default(),
            cart: CartConfig::default(),
            retain_threshold: 0.5,
            bounds: BoundsBox::furnace(),
            ga: GaParams::default(),
            rnsga: RnsgaPreferences::default(),
            oracle_resolution: 21,
            scatter_samples: 500,
            output_dir: PathBuf::from("furnace-out"),
        }
    }
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        // Relative CSV paths are resolved against the config file's directory.
        if let DataSource::Csv { path: csv } = &mut cfg.data {
            if csv.is_relative() {
                if let Some(dir) = path.parent() {
                    *csv = dir.join(&*csv);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Replace every seed in the config with `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.split.seed = seed;
        self.ga.seed = seed;
        if let DataSource::Synthetic(spec) = &mut self.data {
            spec.seed = seed;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.dims() != Column::MANIPULATED.len() {
            return Err(Error::Bounds(format!(
                "bounds must cover the {} manipulated variables, got {}",
                Column::MANIPULATED.len(),
                self.bounds.dims()
            )));
        }
        if let DataSource::Synthetic(spec) = &self.data {
            spec.validate()?;
        }
        if !(self.split.test_fraction > 0.0 && self.split.test_fraction < 1.0) {
            return Err(Error::InvalidParams(format!(
                "test_fraction must lie in (0, 1), got {}",
                self.split.test_fraction
            )));
        }
        for target in Column::CONTROLLED {
            self.cart.for_target(target)?.validate()?;
        }
        if !self.retain_threshold.is_finite() {
            return Err(Error::InvalidParams("retain_threshold must be finite".into()));
        }
        self.ga.validate()?;
        self.rnsga.validate(2)?;
        if self.oracle_resolution < 2 {
            return Err(Error::InvalidParams("oracle_resolution must be at least 2".into()));
        }
        Ok(())
    }

    pub fn nsga2_params(&self) -> GaParams {
        self.ga.with_seed(derive_seed(self.ga.seed, role::NSGA2))
    }

    pub fn rnsga2_params(&self) -> RnsgaParams {
        RnsgaParams {
            base: self.ga.with_seed(derive_seed(self.ga.seed, role::RNSGA2)),
            preferences: self.rnsga.clone(),
        }
    }

    pub fn scatter_seed(&self) -> u64 {
        derive_seed(self.ga.seed, role::SCATTER)
    }
}
