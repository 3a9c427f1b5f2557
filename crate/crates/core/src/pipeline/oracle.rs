//! Exhaustive grid reference for the solvers.

use serde::{Deserialize, Serialize};

use crate::bargain::{DisagreementPoint, PayoffMatrix, disagreement, nash_product};
use crate::error::{Error, Result};
use crate::evolve::BoundsBox;
use crate::moo::{ProblemSpec, nondominated_indices};

/// Largest grid the oracle will enumerate.
pub const GRID_LIMIT: f64 = 1e7;

/// One grid cell: its per-axis indices, decision vector and payoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: Vec<usize>,
    pub genome: Vec<f64>,
    pub payoffs: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleNash {
    pub point: GridPoint,
    pub nash_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub resolution: usize,
    /// Non-dominated grid points in grid order.
    pub front: Vec<GridPoint>,
    /// Grid argmax of the Nash product over cells whose payoffs reach the
    /// disagreement point; `None` if no cell does.
    pub nash: Option<OracleNash>,
    pub disagreement: DisagreementPoint,
}

/// Grid argmax of each objective plus the payoff matrix and disagreement
/// point built from them, all on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBargain {
    pub best_responses: [GridPoint; 2],
    pub payoff_matrix: PayoffMatrix,
    pub oracle: OracleResult,
}

/// `resolution` evenly spaced values from the lower to the upper bound of
/// axis `axis`, both ends included exactly.
pub fn grid_axis(bounds: &BoundsBox, axis: usize, resolution: usize) -> Vec<f64> {
    let (lo, hi) = (bounds.lower()[axis], bounds.upper()[axis]);
    let last = resolution - 1;
    (0..resolution)
        .map(|k| if k == last { hi } else { lo + (hi - lo) * k as f64 / last as f64 })
        .collect()
}

/// Every grid cell's payoffs, with the last axis varying fastest.
struct Grid {
    axes: Vec<Vec<f64>>,
    payoffs: Vec<[f64; 2]>,
}

impl Grid {
    fn evaluate(problem: &ProblemSpec, resolution: usize) -> Result<Self> {
        if problem.n_objectives() != 2 {
            return Err(Error::InvalidParams(format!(
                "the grid oracle needs exactly 2 objectives, got {}",
                problem.n_objectives()
            )));
        }
        if resolution < 2 {
            return Err(Error::InvalidParams("oracle resolution must be at least 2".into()));
        }
        let dims = problem.bounds.dims();
        let points = (resolution as f64).powi(dims as i32);
        if points > GRID_LIMIT {
            return Err(Error::GridTooLarge { points, limit: GRID_LIMIT });
        }
        let axes: Vec<Vec<f64>> = (0..dims).map(|i| grid_axis(&problem.bounds, i, resolution)).collect();
        let n = points as usize;
        let mut payoffs = Vec::with_capacity(n);
        let mut x = vec![0.0; dims];
        for cell in 0..n {
            let mut rest = cell;
            for i in (0..dims).rev() {
                x[i] = axes[i][rest % resolution];
                rest /= resolution;
            }
            let y = problem.evaluate(&x)?;
            payoffs.push([y[0], y[1]]);
        }
        Ok(Self { axes, payoffs })
    }

    fn point(&self, cell: usize) -> GridPoint {
        let res = self.axes[0].len();
        let dims = self.axes.len();
        let mut index = vec![0; dims];
        let mut rest = cell;
        for i in (0..dims).rev() {
            index[i] = rest % res;
            rest /= res;
        }
        let genome = index.iter().zip(&self.axes).map(|(&k, a)| a[k]).collect();
        GridPoint {
            index,
            genome,
            payoffs: self.payoffs[cell],
        }
    }

    /// First cell maximizing objective `k`.
    fn argmax(&self, k: usize) -> usize {
        let mut best = 0;
        for (cell, y) in self.payoffs.iter().enumerate() {
            if y[k] > self.payoffs[best][k] {
                best = cell;
            }
        }
        best
    }

    fn solve(&self, d: DisagreementPoint) -> OracleResult {
        let front = nondominated_indices(&self.payoffs)
            .into_iter()
            .map(|c| self.point(c))
            .collect();
        let mut nash: Option<(usize, f64)> = None;
        for (cell, y) in self.payoffs.iter().enumerate() {
            if y[0] < d.0[0] || y[1] < d.0[1] {
                continue;
            }
            let p = nash_product(*y, &d);
            if nash.is_none_or(|(_, best)| p > best) {
                nash = Some((cell, p));
            }
        }
        OracleResult {
            resolution: self.axes[0].len(),
            front,
            nash: nash.map(|(cell, nash_product)| OracleNash {
                point: self.point(cell),
                nash_product,
            }),
            disagreement: d,
        }
    }
}

/// Enumerate the full regular grid over the problem's box and return its
/// exact non-dominated subset and the Nash-product argmax subject to
/// payoffs ≥ `d`. Ties go to the first cell in grid order.
pub fn brute_force_oracle(problem: &ProblemSpec, d: DisagreementPoint, resolution: usize) -> Result<OracleResult> {
    Ok(Grid::evaluate(problem, resolution)?.solve(d))
}

/// Bargaining entirely on the grid: grid best responses, their payoff
/// matrix and disagreement point, then the oracle against that point.
pub fn grid_bargain(problem: &ProblemSpec, resolution: usize) -> Result<GridBargain> {
    let grid = Grid::evaluate(problem, resolution)?;
    let b1 = grid.point(grid.argmax(0));
    let b2 = grid.point(grid.argmax(1));
    let payoff_matrix = PayoffMatrix {
        entries: [b1.payoffs, b2.payoffs],
    };
    let oracle = grid.solve(disagreement(&payoff_matrix));
    Ok(GridBargain {
        best_responses: [b1, b2],
        payoff_matrix,
        oracle,
    })
}
