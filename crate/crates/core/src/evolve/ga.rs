use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{BoundsBox, GaParams, polynomial_mutation, sbx_crossover};
use crate::error::{Error, Result};
use crate::rng::{Rng, seeded};
use rand::Rng as _;

/// Mating rounds allowed per offspring slot before a generation gives up on
/// filling its offspring quota with unique genomes.
const MATING_ROUNDS_PER_CHILD: usize = 20;

/// Result of a single-objective run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaOutcome {
    pub best_genome: Vec<f64>,
    pub best_value: f64,
    /// Best-ever value after initialization (entry 0) and after each generation.
    pub history: Vec<f64>,
    /// Final population, best first.
    pub population: Vec<(Vec<f64>, f64)>,
    pub seed: u64,
    pub generations: usize,
}

/// Evaluate `objective`, rejecting non-finite values.
pub fn evaluate(objective: impl Fn(&[f64]) -> f64, genome: &[f64]) -> Result<f64> {
    let value = objective(genome);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation {
            genome: genome.to_vec(),
            value,
        })
    }
}

pub(crate) fn random_genome(bounds: &BoundsBox, rng: &mut Rng) -> Vec<f64> {
    (0..bounds.dims())
        .map(|i| bounds.lower()[i] + rng.gen::<f64>() * bounds.width(i))
        .collect()
}

/// Initial population: `seeds` first, then uniform samples from the box.
pub(crate) fn initial_population(
    bounds: &BoundsBox,
    size: usize,
    seeds: &[Vec<f64>],
    rng: &mut Rng,
) -> Result<Vec<Vec<f64>>> {
    let mut pop = Vec::with_capacity(size);
    for s in seeds.iter().take(size) {
        bounds.check(s)?;
        pop.push(s.clone());
    }
    while pop.len() < size {
        pop.push(random_genome(bounds, rng));
    }
    Ok(pop)
}

/// Produce up to `params.offspring_size` children by tournament selection,
/// SBX and polynomial mutation. Children identical to a genome in `existing`
/// or to an earlier child are discarded; generation stops after a bounded
/// number of mating rounds, so the result may be short.
pub fn make_offspring(
    existing: &[Vec<f64>],
    mut select: impl FnMut(&mut Rng) -> Result<usize>,
    params: &GaParams,
    bounds: &BoundsBox,
    rng: &mut Rng,
) -> Result<Vec<Vec<f64>>> {
    let want = params.offspring_size;
    let mut children: Vec<Vec<f64>> = Vec::with_capacity(want);
    for _ in 0..want * MATING_ROUNDS_PER_CHILD {
        if children.len() >= want {
            break;
        }
        let a = select(rng)?;
        let b = select(rng)?;
        let (c1, c2) = sbx_crossover(
            &existing[a],
            &existing[b],
            params.eta_crossover,
            params.crossover_probability,
            bounds,
            rng,
        )?;
        for child in [c1, c2] {
            let child = polynomial_mutation(&child, params.eta_mutation, params.mutation_probability, bounds, rng)?;
            if children.len() < want && !existing.contains(&child) && !children.contains(&child) {
                children.push(child);
            }
        }
    }
    Ok(children)
}

/// Maximize `objective` over `bounds` with an elitist (μ+λ) GA.
pub fn ga_maximize(objective: impl Fn(&[f64]) -> f64, bounds: &BoundsBox, params: &GaParams) -> Result<GaOutcome> {
    ga_maximize_from(objective, bounds, params, &[])
}

/// Like [`ga_maximize`], with `seeds` placed in the initial population ahead
/// of the random samples.
///
/// Each generation draws binary-tournament parents from the current
/// population, applies SBX and polynomial mutation, evaluates the children,
/// and keeps the best `population_size` of parents plus children (stable
/// sort, parents ahead of children on ties).
pub fn ga_maximize_from(
    objective: impl Fn(&[f64]) -> f64,
    bounds: &BoundsBox,
    params: &GaParams,
    seeds: &[Vec<f64>],
) -> Result<GaOutcome> {
    params.validate()?;
    let mut rng = seeded(params.seed);
    let genomes = initial_population(bounds, params.population_size, seeds, &mut rng)?;
    let mut pop: Vec<(Vec<f64>, f64)> = genomes
        .into_iter()
        .map(|g| evaluate(&objective, &g).map(|v| (g, v)))
        .collect::<Result<_>>()?;
    sort_descending(&mut pop);

    let mut history = Vec::with_capacity(params.generations + 1);
    history.push(pop[0].1);
    for _ in 0..params.generations {
        let values: Vec<f64> = pop.iter().map(|p| p.1).collect();
        let existing: Vec<Vec<f64>> = pop.iter().map(|p| p.0.clone()).collect();
        let children = make_offspring(
            &existing,
            |rng| super::tournament_select(&values, |a: &f64, b: &f64| a.total_cmp(b), rng),
            params,
            bounds,
            &mut rng,
        )?;
        for child in children {
            let v = evaluate(&objective, &child)?;
            pop.push((child, v));
        }
        sort_descending(&mut pop);
        pop.truncate(params.population_size);
        history.push(pop[0].1);
    }

    Ok(GaOutcome {
        best_genome: pop[0].0.clone(),
        best_value: pop[0].1,
        history,
        population: pop,
        seed: params.seed,
        generations: params.generations,
    })
}

fn sort_descending(pop: &mut [(Vec<f64>, f64)]) {
    pop.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
}
