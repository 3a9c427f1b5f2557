//! Furnace operating data: records, CSV ingestion, synthetic generation,
//! splitting and correlation summaries.

mod csv_io;
mod synth;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv_io::{load_csv, read_csv, write_csv};
pub use synth::{NoiseLevels, QuadraticSurface, SyntheticSpec, synthesize};

/// A numeric column of the furnace data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    StackO2,
    Efficiency,
    FuelGas,
    FiredDuty,
    AbsorbedDuty,
    Throughput,
    Cit,
    Cot,
}

impl Column {
    pub const ALL: [Column; 8] = [
        Column::StackO2,
        Column::Efficiency,
        Column::FuelGas,
        Column::FiredDuty,
        Column::AbsorbedDuty,
        Column::Throughput,
        Column::Cit,
        Column::Cot,
    ];

    /// The operator-settable inputs, in decision-vector order.
    pub const MANIPULATED: [Column; 3] = [Column::FiredDuty, Column::Throughput, Column::Cit];

    /// Process outcomes a surrogate is fitted for.
    pub const CONTROLLED: [Column; 3] = [Column::AbsorbedDuty, Column::StackO2, Column::Cot];

    /// Header name used in CSV files.
    pub fn header(self) -> &'static str {
        match self {
            Column::StackO2 => "Stack-O2",
            Column::Efficiency => "Efficiency",
            Column::FuelGas => "Fuel-Gas",
            Column::FiredDuty => "Fired-duty-MW",
            Column::AbsorbedDuty => "Absorbed-duty-MW",
            Column::Throughput => "Throughput",
            Column::Cit => "CIT-degC",
            Column::Cot => "COT-degC",
        }
    }

    /// Snake-case identifier used in configs and report files.
    pub fn key(self) -> &'static str {
        match self {
            Column::StackO2 => "stack_o2",
            Column::Efficiency => "efficiency",
            Column::FuelGas => "fuel_gas",
            Column::FiredDuty => "fired_duty",
            Column::AbsorbedDuty => "absorbed_duty",
            Column::Throughput => "throughput",
            Column::Cit => "cit",
            Column::Cot => "cot",
        }
    }

    pub fn of(self, r: &FurnaceRecord) -> f64 {
        match self {
            Column::StackO2 => r.stack_o2,
            Column::Efficiency => r.efficiency,
            Column::FuelGas => r.fuel_gas,
            Column::FiredDuty => r.fired_duty,
            Column::AbsorbedDuty => r.absorbed_duty,
            Column::Throughput => r.throughput,
            Column::Cit => r.cit,
            Column::Cot => r.cot,
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Column {
    type Err = Error;

    /// Accepts either the CSV header or the snake-case key.
    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.header() == s || c.key() == s)
            .ok_or_else(|| Error::Schema(format!("unknown column `{s}`")))
    }
}

pub const TIMESTAMP_HEADER: &str = "Timestamp";

/// One timestamped operating sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FurnaceRecord {
    pub timestamp: String,
    /// Excess oxygen in the flue gas, percent.
    pub stack_o2: f64,
    /// Absorbed over fired duty, percent.
    pub efficiency: f64,
    /// kg/hr
    pub fuel_gas: f64,
    /// MW
    pub fired_duty: f64,
    /// MW
    pub absorbed_duty: f64,
    /// Dimensionless process rate.
    pub throughput: f64,
    /// Coil inlet temperature, degC.
    pub cit: f64,
    /// Coil outlet temperature, degC.
    pub cot: f64,
}

impl FurnaceRecord {
    pub fn validate(&self) -> std::result::Result<(), String> {
        for c in Column::ALL {
            let v = c.of(self);
            if !v.is_finite() {
                return Err(format!("`{}` is not finite ({v})", c.header()));
            }
        }
        if self.stack_o2 < 0.0 {
            return Err(format!("`Stack-O2` is negative ({})", self.stack_o2));
        }
        if self.fired_duty <= 0.0 {
            return Err(format!("`Fired-duty-MW` must be positive ({})", self.fired_duty));
        }
        if self.absorbed_duty < 0.0 {
            return Err(format!(
                "`Absorbed-duty-MW` is negative ({})",
                self.absorbed_duty
            ));
        }
        Ok(())
    }

    /// Values of `features`, in order.
    pub fn features(&self, features: &[Column]) -> Vec<f64> {
        features.iter().map(|c| c.of(self)).collect()
    }
}

/// An immutable, validated table of operating samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    records: Vec<FurnaceRecord>,
}

impl Dataset {
    /// Validate every record; row numbers in errors are 1-based.
    pub fn new(records: Vec<FurnaceRecord>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            r.validate()
                .map_err(|message| Error::Validation { row: i + 1, message })?;
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[FurnaceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column(&self, c: Column) -> Vec<f64> {
        self.records.iter().map(|r| c.of(r)).collect()
    }

    pub fn column_by_name(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self.column(name.parse()?))
    }

    /// Row-major feature matrix.
    pub fn feature_matrix(&self, features: &[Column]) -> Vec<Vec<f64>> {
        self.records.iter().map(|r| r.features(features)).collect()
    }

    fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            records: idx.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }
}

/// Split into `(train, test)` by uniform sampling without replacement.
///
/// The test side holds `round(test_fraction * n)` rows clamped to
/// `[1, n - 1]`. Both sides keep the original row order.
pub fn train_test_split(data: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParams(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let n_test = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut crate::rng::seeded(seed));
    let mut test_idx = order[..n_test].to_vec();
    let mut train_idx = order[n_test..].to_vec();
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    Ok((data.subset(&train_idx), data.subset(&test_idx)))
}

/// Pearson correlation matrix of `columns`, computed with mean-centred sums.
pub fn correlation_matrix(data: &Dataset, columns: &[Column]) -> Result<Vec<Vec<f64>>> {
    if data.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: data.len(),
        });
    }
    let centred: Vec<Vec<f64>> = columns
        .iter()
        .map(|&c| {
            let v = data.column(c);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.into_iter().map(|x| x - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centred
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    for (c, &norm) in columns.iter().zip(&norms) {
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateVariance(c.header().to_string()));
        }
    }
    let k = columns.len();
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        m[i][i] = 1.0;
        for j in (i + 1)..k {
            let dot: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    Ok(m)
}
