//! Multi-objective search over a box: Pareto dominance, non-dominated
//! sorting, crowding, NSGA-II and the reference-point variant R-NSGA-II.
//!
//! Every objective is maximized. Minimization targets enter negated when the
//! [`ProblemSpec`] is built.

mod dominance;
mod nsga2;
mod rnsga2;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use dominance::{
    crowding_distance, dominates, fast_nondominated_sort, front_ranks, hypervolume_2d,
    nondominated_fronts, nondominated_indices,
};
pub use nsga2::{Nsga2Outcome, nsga2_run};
pub use rnsga2::{
    RnsgaParams, RnsgaPreferences, Rnsga2Outcome, normalized_ref_distance, preference_order,
    rnsga2_run, rnsga2_survival,
};

use crate::error::{Error, Result};
use crate::evolve::BoundsBox;

pub type ObjectiveFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A named scalar function of the decision vector, to be maximized.
#[derive(Clone)]
pub struct Objective {
    pub name: String,
    f: ObjectiveFn,
}

impl Objective {
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    /// `scale * f(x) + shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        let f = Arc::clone(&self.f);
        Self {
            name: self.name.clone(),
            f: Arc::new(move |x| scale * f(x) + shift),
        }
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Objectives to maximize jointly over a box.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub objectives: Vec<Objective>,
    pub bounds: BoundsBox,
}

impl ProblemSpec {
    pub fn new(objectives: Vec<Objective>, bounds: BoundsBox) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::InvalidParams("a problem needs at least one objective".into()));
        }
        Ok(Self { objectives, bounds })
    }

    pub fn n_objectives(&self) -> usize {
        self.objectives.len()
    }

    /// All objective values at `x`; non-finite values are an error.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.objectives
            .iter()
            .map(|o| crate::evolve::evaluate(|g| o.value(g), x))
            .collect()
    }

    pub fn individual(&self, genome: Vec<f64>) -> Result<Individual> {
        let objectives = self.evaluate(&genome)?;
        Ok(Individual { genome, objectives })
    }

    pub(crate) fn require_multi(&self) -> Result<()> {
        if self.n_objectives() < 2 {
            return Err(Error::InvalidParams(format!(
                "multi-objective solvers need at least 2 objectives, got {}",
                self.n_objectives()
            )));
        }
        Ok(())
    }
}

/// A decision vector and its objective values (empty until evaluated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// Mutually non-dominated individuals.
pub type ParetoFront = Vec<Individual>;

/// Rank-0 members of `pop`, in population order.
pub fn first_front(pop: &[Individual]) -> ParetoFront {
    let objs: Vec<&[f64]> = pop.iter().map(|p| p.objectives.as_slice()).collect();
    nondominated_indices(&objs).into_iter().map(|i| pop[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_objective() {
        let o = Objective::new("x", |x| x[0]);
        assert_eq!(o.affine(3.0, 1.0).value(&[2.0]), 7.0);
        assert_eq!(o.affine(3.0, 1.0).name, "x");
    }

    #[test]
    fn evaluate_rejects_nan() {
        let p = ProblemSpec::new(vec![Objective::new("bad", |_| f64::NAN)], BoundsBox::unit(1)).unwrap();
        assert!(matches!(p.evaluate(&[0.5]), Err(Error::Evaluation { .. })));
        assert!(p.require_multi().is_err());
    }

    #[test]
    fn first_front_keeps_population_order() {
        let mk = |a: f64, b: f64| Individual { genome: vec![a], objectives: vec![a, b] };
        let pop = vec![mk(1.0, 1.0), mk(2.0, 0.0), mk(0.0, 2.0), mk(0.5, 0.5)];
        let f = first_front(&pop);
        assert_eq!(f.iter().map(|i| i.genome[0]).collect::<Vec<_>>(), vec![1.0, 2.0, 0.0]);
    }
}
