//! Regression-tree surrogates for the controlled variables, their
//! train/test scores, and the threshold filter that decides which ones take
//! part in optimization.

mod cart;

use serde::{Deserialize, Serialize};

pub use cart::{CartParams, Node, RegressionTree, fit_matrix};

use crate::dataset::{Column, Dataset};
use crate::error::{Error, Result};

/// Fit a tree predicting `target` from `features`.
pub fn fit_cart(
    train: &Dataset,
    features: &[Column],
    target: Column,
    params: &CartParams,
) -> Result<RegressionTree> {
    if train.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if features.is_empty() {
        return Err(Error::Schema("no feature columns given".into()));
    }
    let x = train.feature_matrix(features);
    let y = train.column(target);
    let names = features.iter().map(|c| c.key().to_string()).collect();
    fit_matrix(&x, &y, names, params)
}

/// MSE, RMSE and R² on one evaluation split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub mse: f64,
    pub rmse: f64,
    pub r2: f64,
}

/// Score predictions against observations. R² uses the observations' own
/// mean; constant observations make it undefined and yield
/// [`Error::DegenerateR2`] carrying the MSE and RMSE.
pub fn score(observed: &[f64], predicted: &[f64], split: &str) -> Result<Scores> {
    if observed.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if observed.len() != predicted.len() {
        return Err(Error::Dimension {
            expected: observed.len(),
            got: predicted.len(),
        });
    }
    let n = observed.len() as f64;
    let ss_res: f64 = observed.iter().zip(predicted).map(|(o, p)| (o - p).powi(2)).sum();
    let mean = observed.iter().sum::<f64>() / n;
    let ss_tot: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    let mse = ss_res / n;
    let rmse = mse.sqrt();
    if ss_tot == 0.0 {
        return Err(Error::DegenerateR2 {
            split: split.to_string(),
            mse,
            rmse,
        });
    }
    Ok(Scores {
        mse,
        rmse,
        r2: 1.0 - ss_res / ss_tot,
    })
}

/// Train and test scores of one surrogate, in the column order of the
/// model-performance table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    pub train_mse: f64,
    pub test_mse: f64,
    pub train_rmse: f64,
    pub test_rmse: f64,
    pub train_r2: f64,
    pub test_r2: f64,
}

impl ModelMetrics {
    pub fn from_scores(train: Scores, test: Scores) -> Self {
        Self {
            train_mse: train.mse,
            test_mse: test.mse,
            train_rmse: train.rmse,
            test_rmse: test.rmse,
            train_r2: train.r2,
            test_r2: test.r2,
        }
    }
}

pub fn evaluate(tree: &RegressionTree, train: &Dataset, test: &Dataset, target: Column) -> Result<ModelMetrics> {
    let features = tree
        .features
        .iter()
        .map(|f| f.parse())
        .collect::<Result<Vec<Column>>>()?;
    let split_scores = |data: &Dataset, split: &str| -> Result<Scores> {
        if data.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let predicted: Vec<f64> = data
            .feature_matrix(&features)
            .iter()
            .map(|x| tree.predict(x))
            .collect::<Result<_>>()?;
        score(&data.column(target), &predicted, split)
    };
    Ok(ModelMetrics::from_scores(
        split_scores(train, "train")?,
        split_scores(test, "test")?,
    ))
}

/// Names of the models whose test R² reaches `test_r2_threshold`, in input order.
pub fn select_models<S: AsRef<str>>(metrics: &[(S, ModelMetrics)], test_r2_threshold: f64) -> Vec<String> {
    metrics
        .iter()
        .filter(|(_, m)| m.test_r2 >= test_r2_threshold)
        .map(|(name, _)| name.as_ref().to_string())
        .collect()
}

/// Fitted surrogates keyed by controlled variable, sharing one feature list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateSet {
    pub features: Vec<Column>,
    pub models: Vec<(Column, RegressionTree)>,
}

impl SurrogateSet {
    pub fn get(&self, target: Column) -> Option<&RegressionTree> {
        self.models.iter().find(|(c, _)| *c == target).map(|(_, t)| t)
    }

    /// Keep only the named models.
    pub fn retain(&mut self, keep: &[String]) {
        self.models.retain(|(c, _)| keep.iter().any(|k| k == c.key()));
    }
}
