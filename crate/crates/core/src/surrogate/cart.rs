use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Growth limits for a regression tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CartParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
}

impl Default for CartParams {
    fn default() -> Self {
        Self {
            max_depth: 8,
            min_samples_leaf: 5,
            min_samples_split: 10,
        }
    }
}

impl CartParams {
    /// Grow until every leaf is pure or holds a single distinct input.
    pub fn unconstrained() -> Self {
        Self {
            max_depth: usize::MAX,
            min_samples_leaf: 1,
            min_samples_split: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || self.min_samples_leaf == 0 || self.min_samples_split < 2 {
            return Err(Error::InvalidParams(format!(
                "cart params need max_depth >= 1, min_samples_leaf >= 1, min_samples_split >= 2; got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    /// Inputs with `x[feature] <= threshold` go to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf { value: f64, samples: usize },
}

/// A fitted CART regression tree stored as a flat node list; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub features: Vec<String>,
    pub nodes: Vec<Node>,
}

impl RegressionTree {
    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features() {
            return Err(Error::Dimension {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite feature value {v}")));
        }
        Ok(self.eval(x))
    }

    /// Leaf lookup without input checks. Panics if `x` is too short.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
                Node::Leaf { value, .. } => return value,
            }
        }
    }

    /// Index of the leaf reached by `x`.
    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut at = 0;
        while let Node::Split {
            feature,
            threshold,
            left,
            right,
        } = self.nodes[at]
        {
            at = if x[feature] <= threshold { left } else { right };
        }
        at
    }

    pub fn leaves(&self) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| match *n {
            Node::Leaf { value, samples } => Some((i, value, samples)),
            Node::Split { .. } => None,
        })
    }

    /// Length of the longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
                Node::Leaf { .. } => 0,
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Fit a tree to row-major inputs `x` and targets `y`.
///
/// Each node takes the (feature, threshold) pair that minimizes the summed
/// squared error of its children. Candidate thresholds are midpoints between
/// consecutive distinct sorted values. Ties go to the lower feature index,
/// then the lower threshold. Growth stops when the depth limit is reached,
/// the node is too small to split, its targets are all equal, or no split
/// leaves `min_samples_leaf` rows on both sides.
pub fn fit_matrix(
    x: &[Vec<f64>],
    y: &[f64],
    feature_names: Vec<String>,
    params: &CartParams,
) -> Result<RegressionTree> {
    params.validate()?;
    if x.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    let p = feature_names.len();
    if let Some(row) = x.iter().find(|r| r.len() != p) {
        return Err(Error::Dimension {
            expected: p,
            got: row.len(),
        });
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Domain("training data contains non-finite values".into()));
    }

    let mut builder = Builder {
        x,
        y,
        params,
        nodes: Vec::new(),
    };
    let all: Vec<usize> = (0..x.len()).collect();
    builder.grow(all, 0);
    Ok(RegressionTree {
        features: feature_names,
        nodes: builder.nodes,
    })
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    params: &'a CartParams,
    nodes: Vec<Node>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    cost: f64,
}

impl Builder<'_> {
    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let mut targets: Vec<f64> = rows.iter().map(|&i| self.y[i]).collect();
        targets.sort_by(f64::total_cmp);
        let n = rows.len();
        let mean = targets.iter().sum::<f64>() / n as f64;
        self.nodes.push(Node::Leaf {
            value: mean,
            samples: n,
        });

        let pure = targets.first() == targets.last();
        let min_leaf = self.params.min_samples_leaf;
        if pure
            || depth >= self.params.max_depth
            || n < self.params.min_samples_split
            || n < 2 * min_leaf
        {
            return id;
        }
        let Some(best) = self.best_split(&rows, mean) else {
            return id;
        };

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.x[i][best.feature] <= best.threshold);
        let left = self.grow(left_rows, depth + 1);
        let right = self.grow(right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&self, rows: &[usize], mean: f64) -> Option<Candidate> {
        let n = rows.len();
        let min_leaf = self.params.min_samples_leaf;
        let mut best: Option<Candidate> = None;
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
        for feature in 0..self.x[0].len() {
            pairs.clear();
            pairs.extend(rows.iter().map(|&i| (self.x[i][feature], self.y[i] - mean)));
            // Sorting on (x, y) fixes the summation order regardless of row order.
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let total: f64 = pairs.iter().map(|p| p.1).sum();
            let total_sq: f64 = pairs.iter().map(|p| p.1 * p.1).sum();

            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for k in 1..n {
                let (_, yk) = pairs[k - 1];
                sum += yk;
                sum_sq += yk * yk;
                if k < min_leaf || n - k < min_leaf {
                    continue;
                }
                let (lo, hi) = (pairs[k - 1].0, pairs[k].0);
                if lo >= hi {
                    continue;
                }
                let left = (sum_sq - sum * sum / k as f64).max(0.0);
                let rest = total - sum;
                let right = (total_sq - sum_sq - rest * rest / (n - k) as f64).max(0.0);
                let cost = left + right;
                let better = match &best {
                    None => true,
                    Some(b) => cost.partial_cmp(&b.cost) == Some(Ordering::Less),
                };
                if better {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some(Candidate {
                        feature,
                        threshold,
                        cost,
                    });
                }
            }
        }
        best
    }
}
