//! Real-coded evolutionary building blocks shared by every solver.

mod bounds;
mod ga;
mod operators;

use serde::{Deserialize, Serialize};

pub use bounds::BoundsBox;
pub use ga::{GaOutcome, evaluate, ga_maximize, ga_maximize_from, make_offspring};
pub(crate) use ga::initial_population;
pub use operators::{
    polynomial_mutation, polynomial_step, sbx_beta, sbx_crossover, sbx_pair, tournament_select,
};

use crate::error::{Error, Result};

/// Parameters of a generational real-coded GA.
///
/// Defaults are 40 parents, 10 offspring per generation, SBX with
/// probability 0.9 and index 15, polynomial mutation with per-variable
/// probability 0.1 and index 20, and 200 generations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub offspring_size: usize,
    pub crossover_probability: f64,
    pub eta_crossover: f64,
    pub mutation_probability: f64,
    pub eta_mutation: f64,
    pub generations: usize,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 40,
            offspring_size: 10,
            crossover_probability: 0.9,
            eta_crossover: 15.0,
            mutation_probability: 0.1,
            eta_mutation: 20.0,
            generations: 200,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.population_size < 2 {
            return Err(Error::InvalidParams("population_size must be at least 2".into()));
        }
        if self.offspring_size < 1 {
            return Err(Error::InvalidParams("offspring_size must be at least 1".into()));
        }
        if !prob(self.crossover_probability) || !prob(self.mutation_probability) {
            return Err(Error::InvalidParams("probabilities must lie in [0, 1]".into()));
        }
        if !(self.eta_crossover > 0.0 && self.eta_mutation > 0.0)
            || !self.eta_crossover.is_finite()
            || !self.eta_mutation.is_finite()
        {
            return Err(Error::InvalidParams("distribution indices must be positive".into()));
        }
        Ok(())
    }
}
