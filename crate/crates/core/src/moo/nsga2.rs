use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Individual, ParetoFront, ProblemSpec, crowding_distance, first_front, hypervolume_2d, nondominated_fronts, nondominated_indices};
use crate::error::Result;
use crate::evolve::{GaParams, make_offspring, tournament_select};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nsga2Outcome {
    pub population: Vec<Individual>,
    pub front: ParetoFront,
    /// Reference point of the hypervolume log: the componentwise minimum of
    /// the initial population. Empty unless the problem has two objectives.
    pub hypervolume_reference: Vec<f64>,
    /// Hypervolume of the non-dominated archive of every point evaluated so
    /// far, after initialization and after each generation (two-objective
    /// problems only). Non-decreasing by construction.
    pub hypervolume: Vec<f64>,
    pub seed: u64,
    pub generations: usize,
}

/// Rank and crowding for every member of `objs`.
pub(crate) fn rank_and_crowding(objs: &[&[f64]]) -> (Vec<Vec<usize>>, Vec<usize>, Vec<f64>) {
    let fronts = nondominated_fronts(objs);
    let mut rank = vec![0; objs.len()];
    let mut crowd = vec![0.0; objs.len()];
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (fronts, rank, crowd)
}

/// Crowded comparison: lower rank wins, then larger crowding distance.
fn crowded_cmp(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    b.0.cmp(&a.0)
        .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
}

/// NSGA-II with binary tournament on (rank, crowding), SBX, polynomial
/// mutation and (μ+λ) survival by rank then crowding. Ties in the last
/// admitted front are broken by position in the merged pool.
pub fn nsga2_run(problem: &ProblemSpec, params: &GaParams) -> Result<Nsga2Outcome> {
    problem.require_multi()?;
    params.validate()?;
    let bounds = &problem.bounds;
    let mut rng = seeded(params.seed);
    let genomes = crate::evolve::initial_population(bounds, params.population_size, &[], &mut rng)?;
    let mut pop: Vec<Individual> = genomes
        .into_iter()
        .map(|g| problem.individual(g))
        .collect::<Result<_>>()?;

    let two = problem.n_objectives() == 2;
    let hv_ref: Vec<f64> = if two {
        (0..2)
            .map(|k| pop.iter().map(|p| p.objectives[k]).fold(f64::INFINITY, f64::min))
            .collect()
    } else {
        Vec::new()
    };
    let mut archive: Vec<Vec<f64>> = Vec::new();
    let mut hypervolume = Vec::new();
    let mut log = |archive: &mut Vec<Vec<f64>>, fresh: &[Individual]| {
        if !two {
            return;
        }
        archive.extend(fresh.iter().map(|p| p.objectives.clone()));
        let keep = nondominated_indices(archive);
        *archive = keep.into_iter().map(|i| archive[i].clone()).collect();
        archive.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        archive.dedup();
        hypervolume.push(hypervolume_2d(archive, [hv_ref[0], hv_ref[1]]));
    };
    log(&mut archive, &pop);

    for _ in 0..params.generations {
        let objs: Vec<&[f64]> = pop.iter().map(|p| p.objectives.as_slice()).collect();
        let (_, rank, crowd) = rank_and_crowding(&objs);
        let keys: Vec<(usize, f64)> = rank.into_iter().zip(crowd).collect();
        let existing: Vec<Vec<f64>> = pop.iter().map(|p| p.genome.clone()).collect();
        let children = make_offspring(
            &existing,
            |rng| tournament_select(&keys, crowded_cmp, rng),
            params,
            bounds,
            &mut rng,
        )?;
        let fresh: Vec<Individual> = children
            .into_iter()
            .map(|c| problem.individual(c))
            .collect::<Result<_>>()?;
        log(&mut archive, &fresh);
        pop.extend(fresh);
        pop = survive(pop, params.population_size);
    }

    let front = first_front(&pop);
    Ok(Nsga2Outcome {
        population: pop,
        front,
        hypervolume_reference: hv_ref,
        hypervolume,
        seed: params.seed,
        generations: params.generations,
    })
}

fn survive(pool: Vec<Individual>, size: usize) -> Vec<Individual> {
    let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
    let fronts = nondominated_fronts(&objs);
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    for front in fronts {
        if chosen.len() + front.len() <= size {
            chosen.extend(front);
            if chosen.len() == size {
                break;
            }
            continue;
        }
        let members: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
        let crowd = crowding_distance(&members);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| crowd[b].partial_cmp(&crowd[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        chosen.extend(order.into_iter().take(size - chosen.len()).map(|k| front[k]));
        break;
    }
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}
