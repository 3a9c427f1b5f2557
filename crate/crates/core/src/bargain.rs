//! Two-player Nash bargaining over a pair of maximized objectives.
//!
//! Each objective is a player. Their individual optima (best responses) are
//! cross-evaluated into a 2×2 payoff matrix whose column minima form the
//! disagreement point. The bargaining solution maximizes the product of
//! payoff gains over that point, subject to neither player falling below it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{GaParams, ga_maximize, ga_maximize_from};
use crate::moo::ProblemSpec;
use crate::rng::{derive_seed, role};

/// Fitness offset that places every infeasible point below every feasible
/// one. Feasible Nash products are never negative.
const INFEASIBLE_OFFSET: f64 = 1.0;

/// `entries[i][j]` is player `j`'s payoff at player `i`'s best-response point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayoffMatrix {
    pub entries: [[f64; 2]; 2],
}

impl PayoffMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    /// Diagonal: each player's payoff at its own best response.
    pub fn best_values(&self) -> [f64; 2] {
        [self.entries[0][0], self.entries[1][1]]
    }
}

/// Payoffs each player is guaranteed without agreement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DisagreementPoint(pub [f64; 2]);

/// One player's individual optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub genome: Vec<f64>,
    pub value: f64,
    pub seed: u64,
}

/// Everything the Nash-product search needs: best responses, the payoff
/// matrix built from them, and its disagreement point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargainSetup {
    pub best_responses: [BestResponse; 2],
    pub payoff_matrix: PayoffMatrix,
    pub disagreement: DisagreementPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargainSeeds {
    pub best_response: [u64; 2],
    pub nash: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargainResult {
    pub x_best: Vec<f64>,
    pub payoffs: [f64; 2],
    pub nash_product: f64,
    pub disagreement: DisagreementPoint,
    pub payoff_matrix: PayoffMatrix,
    pub best_response_points: [Vec<f64>; 2],
    pub seeds: BargainSeeds,
    pub generations: usize,
    /// Best-ever Nash-search fitness per generation.
    pub history: Vec<f64>,
}

fn require_two_players(problem: &ProblemSpec) -> Result<()> {
    if problem.n_objectives() != 2 {
        return Err(Error::InvalidParams(format!(
            "bargaining needs exactly 2 objectives, got {}",
            problem.n_objectives()
        )));
    }
    Ok(())
}

/// Maximize objective `player` alone over the problem's box.
pub fn best_response(problem: &ProblemSpec, player: usize, params: &GaParams) -> Result<BestResponse> {
    let objective = problem.objectives.get(player).ok_or_else(|| {
        Error::InvalidParams(format!(
            "player {player} out of range for {} objectives",
            problem.n_objectives()
        ))
    })?;
    let out = ga_maximize(|x| objective.value(x), &problem.bounds, params)?;
    Ok(BestResponse {
        genome: out.best_genome,
        value: out.best_value,
        seed: params.seed,
    })
}

/// Cross-evaluate both objectives at both best-response points.
pub fn payoff_matrix(
    objective_1: impl Fn(&[f64]) -> f64,
    objective_2: impl Fn(&[f64]) -> f64,
    x1_best: &[f64],
    x2_best: &[f64],
) -> Result<PayoffMatrix> {
    let eval = |f: &dyn Fn(&[f64]) -> f64, x: &[f64]| crate::evolve::evaluate(f, x);
    Ok(PayoffMatrix {
        entries: [
            [eval(&objective_1, x1_best)?, eval(&objective_2, x1_best)?],
            [eval(&objective_1, x2_best)?, eval(&objective_2, x2_best)?],
        ],
    })
}

/// Column minima of the payoff matrix.
pub fn disagreement(p: &PayoffMatrix) -> DisagreementPoint {
    DisagreementPoint([
        p.entries[0][0].min(p.entries[1][0]),
        p.entries[0][1].min(p.entries[1][1]),
    ])
}

/// Product of payoff gains over the disagreement point.
pub fn nash_product(payoffs: [f64; 2], d: &DisagreementPoint) -> f64 {
    (payoffs[0] - d.0[0]) * (payoffs[1] - d.0[1])
}

/// Total shortfall of `payoffs` below the disagreement point.
pub fn violation(payoffs: [f64; 2], d: &DisagreementPoint) -> f64 {
    (d.0[0] - payoffs[0]).max(0.0) + (d.0[1] - payoffs[1]).max(0.0)
}

/// Solve both best responses and build the payoff matrix and disagreement point.
pub fn setup(problem: &ProblemSpec, params: &GaParams) -> Result<BargainSetup> {
    require_two_players(problem)?;
    let br1 = best_response(problem, 0, &params.with_seed(derive_seed(params.seed, role::BEST_RESPONSE_1)))?;
    let br2 = best_response(problem, 1, &params.with_seed(derive_seed(params.seed, role::BEST_RESPONSE_2)))?;
    let (o1, o2) = (&problem.objectives[0], &problem.objectives[1]);
    let p = payoff_matrix(|x| o1.value(x), |x| o2.value(x), &br1.genome, &br2.genome)?;
    Ok(BargainSetup {
        best_responses: [br1, br2],
        payoff_matrix: p,
        disagreement: disagreement(&p),
    })
}

/// Maximize the Nash product over the box subject to both payoffs reaching
/// the disagreement point.
///
/// Feasible points score their Nash product; infeasible ones score
/// `-(shortfall) - 1`, so any feasible point beats any infeasible one. The
/// two best-response points, which are feasible by construction, seed the
/// initial population. `params.seed` is used as given.
pub fn nash_solve(problem: &ProblemSpec, setup: &BargainSetup, params: &GaParams) -> Result<BargainResult> {
    require_two_players(problem)?;
    let d = setup.disagreement;
    let (o1, o2) = (&problem.objectives[0], &problem.objectives[1]);
    let fitness = |x: &[f64]| {
        let y = [o1.value(x), o2.value(x)];
        let v = violation(y, &d);
        if v > 0.0 {
            -v - INFEASIBLE_OFFSET
        } else {
            nash_product(y, &d)
        }
    };
    let seeds: Vec<Vec<f64>> = setup.best_responses.iter().map(|b| b.genome.clone()).collect();
    let out = ga_maximize_from(fitness, &problem.bounds, params, &seeds)?;

    let x_best = out.best_genome;
    let payoffs = [o1.value(&x_best), o2.value(&x_best)];
    let v = violation(payoffs, &d);
    if v > 0.0 {
        return Err(Error::Infeasible {
            least_violating: x_best,
            violation: v,
        });
    }
    Ok(BargainResult {
        nash_product: nash_product(payoffs, &d),
        x_best,
        payoffs,
        disagreement: d,
        payoff_matrix: setup.payoff_matrix,
        best_response_points: [setup.best_responses[0].genome.clone(), setup.best_responses[1].genome.clone()],
        seeds: BargainSeeds {
            best_response: [setup.best_responses[0].seed, setup.best_responses[1].seed],
            nash: params.seed,
        },
        generations: params.generations,
        history: out.history,
    })
}

/// Full bargaining run from a base seed: best responses, payoff matrix,
/// disagreement point and Nash search, each on its own derived seed.
pub fn bargain(problem: &ProblemSpec, params: &GaParams) -> Result<BargainResult> {
    let s = setup(problem, params)?;
    nash_solve(problem, &s, &params.with_seed(derive_seed(params.seed, role::NASH)))
}
