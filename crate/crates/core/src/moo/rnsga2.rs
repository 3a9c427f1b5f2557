use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Individual, ParetoFront, ProblemSpec, first_front, nondominated_fronts};
use crate::error::{Error, Result};
use crate::evolve::{GaParams, make_offspring, tournament_select};
use crate::rng::seeded;

/// Decision-maker preferences steering R-NSGA-II.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RnsgaPreferences {
    /// Aspiration points in objective space.
    pub reference_points: Vec<Vec<f64>>,
    /// Clearing radius in weighted, range-normalized objective units.
    pub epsilon: f64,
    pub weights: Vec<f64>,
}

impl Default for RnsgaPreferences {
    fn default() -> Self {
        Self {
            reference_points: vec![vec![40.0, 90.0], vec![10.0, 278.0]],
            epsilon: 0.01,
            weights: vec![0.5, 0.5],
        }
    }
}

impl RnsgaPreferences {
    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self, n_objectives: usize) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParams(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.weights.len() != n_objectives {
            return Err(Error::Dimension {
                expected: n_objectives,
                got: self.weights.len(),
            });
        }
        if self.weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) || !self.weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidParams(
                "weights must be non-negative with at least one positive".into(),
            ));
        }
        if self.reference_points.is_empty() {
            return Err(Error::InvalidParams("at least one reference point is required".into()));
        }
        if let Some(r) = self.reference_points.iter().find(|r| r.len() != n_objectives) {
            return Err(Error::Dimension {
                expected: n_objectives,
                got: r.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnsgaParams {
    pub base: GaParams,
    pub preferences: RnsgaPreferences,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rnsga2Outcome {
    pub population: Vec<Individual>,
    /// Rank-0 members of the final population.
    pub front: ParetoFront,
    pub seed: u64,
    pub generations: usize,
}

/// `sqrt(Σ w_i ((obj_i - ref_i) / (nadir_i - ideal_i))²)`.
///
/// Dimensions with zero weight are ignored; a weighted dimension whose
/// ideal and nadir coincide is an error.
pub fn normalized_ref_distance(
    obj: &[f64],
    reference: &[f64],
    weights: &[f64],
    ideal: &[f64],
    nadir: &[f64],
) -> Result<f64> {
    let m = obj.len();
    for len in [reference.len(), weights.len(), ideal.len(), nadir.len()] {
        if len != m {
            return Err(Error::Dimension { expected: m, got: len });
        }
    }
    let mut sum = 0.0;
    for i in 0..m {
        if weights[i] == 0.0 {
            continue;
        }
        let range = nadir[i] - ideal[i];
        if range == 0.0 {
            return Err(Error::DegenerateRange(i));
        }
        sum += weights[i] * ((obj[i] - reference[i]) / range).powi(2);
    }
    Ok(sum.sqrt())
}

fn scaled_distance(a: &[f64], b: &[f64], weights: &[f64], range: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(weights.iter().zip(range))
        .map(|((x, y), (w, r))| w * ((x - y) / r).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Selection order of one front under reference-point preference and
/// ε-clearing.
///
/// Each member's preference rank is its best (smallest) position when the
/// front is sorted by distance to each reference point. Members are then
/// visited by preference rank; every member that is picked clears the
/// not-yet-picked members within `epsilon` of it, and cleared members go to
/// the back of the order. Returns the order and the number of members picked
/// before the cleared tail starts.
pub fn preference_order<V: AsRef<[f64]>>(
    front: &[V],
    preferences: &RnsgaPreferences,
    range: &[f64],
) -> (Vec<usize>, usize) {
    let n = front.len();
    let w = &preferences.weights;
    let mut pref_rank = vec![usize::MAX; n];
    let mut min_dist = vec![f64::INFINITY; n];
    for r in &preferences.reference_points {
        let d: Vec<f64> = front.iter().map(|f| scaled_distance(f.as_ref(), r, w, range)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        for (pos, &i) in order.iter().enumerate() {
            pref_rank[i] = pref_rank[i].min(pos);
            min_dist[i] = min_dist[i].min(d[i]);
        }
    }
    let mut by_pref: Vec<usize> = (0..n).collect();
    by_pref.sort_by(|&a, &b| {
        pref_rank[a]
            .cmp(&pref_rank[b])
            .then(min_dist[a].partial_cmp(&min_dist[b]).unwrap_or(Ordering::Equal))
            .then(a.cmp(&b))
    });

    let mut cleared = vec![false; n];
    let mut picked = Vec::with_capacity(n);
    for (k, &i) in by_pref.iter().enumerate() {
        if cleared[i] {
            continue;
        }
        picked.push(i);
        for &j in &by_pref[k + 1..] {
            if !cleared[j] && scaled_distance(front[i].as_ref(), front[j].as_ref(), w, range) <= preferences.epsilon {
                cleared[j] = true;
            }
        }
    }
    let n_picked = picked.len();
    picked.extend(by_pref.iter().copied().filter(|&i| cleared[i]));
    (picked, n_picked)
}

/// Pick `size` survivors from `objs`: whole fronts in rank order, each in
/// [`preference_order`], truncating the last admitted front. Ideal and nadir
/// are the componentwise best and worst of the pool; a zero range is
/// replaced by 1. The returned indices are in selection order.
pub fn rnsga2_survival<V: AsRef<[f64]>>(objs: &[V], size: usize, preferences: &RnsgaPreferences) -> Vec<usize> {
    if objs.is_empty() {
        return Vec::new();
    }
    let m = objs[0].as_ref().len();
    let range: Vec<f64> = (0..m)
        .map(|k| {
            let (lo, hi) = objs.iter().map(|o| o.as_ref()[k]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
            let r = hi - lo;
            if r > 0.0 { r } else { 1.0 }
        })
        .collect();
    let mut chosen = Vec::with_capacity(size);
    for front in nondominated_fronts(objs) {
        let members: Vec<&[f64]> = front.iter().map(|&i| objs[i].as_ref()).collect();
        let (order, _) = preference_order(&members, preferences, &range);
        let room = size - chosen.len();
        chosen.extend(order.into_iter().take(room).map(|k| front[k]));
        if chosen.len() == size {
            break;
        }
    }
    chosen
}

/// R-NSGA-II: NSGA-II with crowding replaced by reference-point preference
/// and ε-clearing. Parents are drawn by binary tournament on survivor order.
pub fn rnsga2_run(problem: &ProblemSpec, params: &RnsgaParams) -> Result<Rnsga2Outcome> {
    problem.require_multi()?;
    let base = &params.base;
    base.validate()?;
    params.preferences.validate(problem.n_objectives())?;
    let bounds = &problem.bounds;
    let mut rng = seeded(base.seed);
    let genomes = crate::evolve::initial_population(bounds, base.population_size, &[], &mut rng)?;
    let pool: Vec<Individual> = genomes
        .into_iter()
        .map(|g| problem.individual(g))
        .collect::<Result<_>>()?;
    let mut pop = survive(pool, base.population_size, &params.preferences);

    for _ in 0..base.generations {
        let positions: Vec<usize> = (0..pop.len()).collect();
        let existing: Vec<Vec<f64>> = pop.iter().map(|p| p.genome.clone()).collect();
        let children = make_offspring(
            &existing,
            |rng| tournament_select(&positions, |a: &usize, b: &usize| b.cmp(a), rng),
            base,
            bounds,
            &mut rng,
        )?;
        for child in children {
            pop.push(problem.individual(child)?);
        }
        pop = survive(pop, base.population_size, &params.preferences);
    }

    let front = first_front(&pop);
    Ok(Rnsga2Outcome {
        population: pop,
        front,
        seed: base.seed,
        generations: base.generations,
    })
}

fn survive(pool: Vec<Individual>, size: usize, preferences: &RnsgaPreferences) -> Vec<Individual> {
    let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
    let chosen = rnsga2_survival(&objs, size, preferences);
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}
