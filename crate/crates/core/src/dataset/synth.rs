use chrono::{Duration, NaiveDate};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Dataset, FurnaceRecord};
use crate::error::{Error, Result};
use crate::evolve::BoundsBox;

/// Lower heating value of the fuel gas used to derive `Fuel-Gas` from fired duty.
pub const FUEL_LHV_MJ_PER_KG: f64 = 50.0;

/// A quadratic response over the box-normalized inputs `z = (x - lower) / (upper - lower)`:
///
/// `value(z) = intercept + Σ linear[i]·z[i] + Σ quadratic[i][j]·z[i]·z[j]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSurface {
    pub intercept: f64,
    pub linear: Vec<f64>,
    pub quadratic: Vec<Vec<f64>>,
}

impl QuadraticSurface {
    pub fn linear(intercept: f64, linear: Vec<f64>) -> Self {
        let n = linear.len();
        Self {
            intercept,
            linear,
            quadratic: vec![vec![0.0; n]; n],
        }
    }

    /// `peak - Σ curvature[i]·(z[i] - center[i])²`, concave when every curvature is positive.
    pub fn peaked(peak: f64, center: &[f64], curvature: &[f64]) -> Self {
        assert_eq!(center.len(), curvature.len());
        let n = center.len();
        let mut quadratic = vec![vec![0.0; n]; n];
        let mut linear = vec![0.0; n];
        let mut intercept = peak;
        for i in 0..n {
            quadratic[i][i] = -curvature[i];
            linear[i] = 2.0 * curvature[i] * center[i];
            intercept -= curvature[i] * center[i] * center[i];
        }
        Self {
            intercept,
            linear,
            quadratic,
        }
    }

    pub fn dims(&self) -> usize {
        self.linear.len()
    }

    /// Evaluate at normalized coordinates.
    pub fn value(&self, z: &[f64]) -> f64 {
        let mut v = self.intercept;
        for (i, &zi) in z.iter().enumerate() {
            v += self.linear[i] * zi;
            for (j, &zj) in z.iter().enumerate() {
                v += self.quadratic[i][j] * zi * zj;
            }
        }
        v
    }

    fn check(&self, name: &str, dims: usize) -> Result<()> {
        let square = self.quadratic.len() == dims && self.quadratic.iter().all(|r| r.len() == dims);
        if self.linear.len() != dims || !square {
            return Err(Error::InvalidParams(format!(
                "surface `{name}` must have {dims} linear terms and a {dims}x{dims} quadratic block"
            )));
        }
        let finite = self.intercept.is_finite()
            && self.linear.iter().all(|v| v.is_finite())
            && self.quadratic.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams(format!("surface `{name}` has non-finite coefficients")));
        }
        Ok(())
    }
}

/// Gaussian noise standard deviations per response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseLevels {
    pub absorbed_duty: f64,
    pub cot: f64,
    pub stack_o2: f64,
}

/// Recipe for a synthetic furnace data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Sampling box for (fired duty, throughput, CIT).
    pub bounds: BoundsBox,
    pub absorbed_duty: QuadraticSurface,
    pub cot: QuadraticSurface,
    pub stack_o2: QuadraticSurface,
    pub noise: NoiseLevels,
    pub samples: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Absorbed duty and COT peak at the same interior operating point, so
    /// the bi-objective problem has a single ideal point.
    pub fn single_peak() -> Self {
        let center = [0.70, 0.75, 0.45];
        Self {
            bounds: BoundsBox::furnace(),
            absorbed_duty: QuadraticSurface::peaked(75.2, &center, &[30.0, 12.0, 8.0]),
            cot: QuadraticSurface::peaked(361.3, &center, &[20.0, 25.0, 40.0]),
            stack_o2: QuadraticSurface::linear(1.6, vec![0.6, -0.4, 0.0]),
            noise: NoiseLevels {
                absorbed_duty: 0.3,
                cot: 0.6,
                stack_o2: 0.3,
            },
            samples: 1000,
            seed: 42,
        }
    }

    /// The two responses peak at opposite corners of the box.
    pub fn conflicting() -> Self {
        Self {
            absorbed_duty: QuadraticSurface::peaked(75.2, &[0.9, 0.8, 0.2], &[30.0, 12.0, 8.0]),
            cot: QuadraticSurface::peaked(361.3, &[0.2, 0.3, 0.9], &[20.0, 25.0, 40.0]),
            noise: NoiseLevels {
                absorbed_duty: 1.0,
                cot: 2.0,
                stack_o2: 0.3,
            },
            ..Self::single_peak()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.dims() != 3 {
            return Err(Error::Bounds(format!(
                "synthetic data needs 3 manipulated variables, bounds have {}",
                self.bounds.dims()
            )));
        }
        self.absorbed_duty.check("absorbed_duty", 3)?;
        self.cot.check("cot", 3)?;
        self.stack_o2.check("stack_o2", 3)?;
        let n = &self.noise;
        for (name, sd) in [("absorbed_duty", n.absorbed_duty), ("cot", n.cot), ("stack_o2", n.stack_o2)] {
            if !(sd >= 0.0 && sd.is_finite()) {
                return Err(Error::InvalidParams(format!("noise sd for `{name}` must be >= 0, got {sd}")));
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidParams("sample count must be at least 1".into()));
        }
        Ok(())
    }

    /// Noise-free responses `(absorbed_duty, cot, stack_o2)` at raw inputs `x`.
    pub fn ground_truth(&self, x: &[f64]) -> (f64, f64, f64) {
        let z = self.bounds.normalize(x);
        (self.absorbed_duty.value(&z), self.cot.value(&z), self.stack_o2.value(&z))
    }
}

/// Generate a data set from `spec`.
///
/// Per record the stream is consumed as: three uniforms for (fired duty,
/// throughput, CIT), then standard normals for absorbed duty, COT and
/// stack O2. Absorbed duty and stack O2 are floored at zero. Timestamps
/// start at 2024-01-01T00:00:00Z with one-minute spacing.
pub fn synthesize(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = crate::rng::seeded(spec.seed);
    let start = NaiveDate::from_ymd_opt(2024, 1, 1)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid start date");
    let lo = spec.bounds.lower();
    let mut records = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        let x: Vec<f64> = (0..3)
            .map(|k| lo[k] + rng.gen::<f64>() * spec.bounds.width(k))
            .collect();
        let (absorbed, cot, o2) = spec.ground_truth(&x);
        let mut noise = || rng.sample::<f64, _>(StandardNormal);
        let absorbed = (absorbed + spec.noise.absorbed_duty * noise()).max(0.0);
        let cot = cot + spec.noise.cot * noise();
        let stack_o2 = (o2 + spec.noise.stack_o2 * noise()).max(0.0);
        let fired = x[0];
        let ts = start + Duration::minutes(i as i64);
        records.push(FurnaceRecord {
            timestamp: ts.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            stack_o2,
            efficiency: absorbed / fired * 100.0,
            fuel_gas: fired * 3600.0 / FUEL_LHV_MJ_PER_KG,
            fired_duty: fired,
            absorbed_duty: absorbed,
            throughput: x[1],
            cit: x[2],
            cot,
        });
    }
    Dataset::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Column, correlation_matrix};

    fn linear_spec() -> SyntheticSpec {
        SyntheticSpec {
            absorbed_duty: QuadraticSurface::linear(30.0, vec![40.0, 5.0, -3.0]),
            cot: QuadraticSurface::linear(320.0, vec![10.0, -20.0, 30.0]),
            stack_o2: QuadraticSurface::linear(1.5, vec![0.5, 0.0, 0.0]),
            noise: NoiseLevels {
                absorbed_duty: 0.0,
                cot: 0.0,
                stack_o2: 0.0,
            },
            samples: 200,
            ..SyntheticSpec::single_peak()
        }
    }

    #[test]
    fn zero_noise_hits_surface_exactly() {
        let spec = linear_spec();
        let data = synthesize(&spec).unwrap();
        for r in data.records() {
            let (a, c, o) = spec.ground_truth(&[r.fired_duty, r.throughput, r.cit]);
            assert_eq!(r.absorbed_duty, a);
            assert_eq!(r.cot, c);
            assert_eq!(r.stack_o2, o);
            assert_eq!(r.efficiency, r.absorbed_duty / r.fired_duty * 100.0);
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = SyntheticSpec::conflicting();
        let mut a = Vec::new();
        let mut b = Vec::new();
        crate::dataset::write_csv(&synthesize(&spec).unwrap(), &mut a).unwrap();
        crate::dataset::write_csv(&synthesize(&spec).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let other = SyntheticSpec { seed: 43, ..spec };
        let mut c = Vec::new();
        crate::dataset::write_csv(&synthesize(&other).unwrap(), &mut c).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn inputs_stay_in_furnace_envelope() {
        let data = synthesize(&SyntheticSpec::single_peak()).unwrap();
        assert_eq!(data.len(), 1000);
        for r in data.records() {
            assert!((44.4..=103.0).contains(&r.fired_duty));
            assert!((58.6..=107.0).contains(&r.throughput));
            assert!((176.3..=223.0).contains(&r.cit));
        }
    }

    #[test]
    fn absorbed_duty_tracks_fired_duty() {
        let spec = SyntheticSpec {
            absorbed_duty: QuadraticSurface::peaked(80.0, &[1.2, 0.5, 0.5], &[40.0, 1.0, 1.0]),
            ..linear_spec()
        };
        let data = synthesize(&spec).unwrap();
        let m = correlation_matrix(&data, &[Column::AbsorbedDuty, Column::FiredDuty]).unwrap();

        // Pearson by definition, straight from the sample.
        let a = data.column(Column::AbsorbedDuty);
        let f = data.column(Column::FiredDuty);
        let n = a.len() as f64;
        let (ma, mf) = (a.iter().sum::<f64>() / n, f.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(&f).map(|(x, y)| (x - ma) * (y - mf)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vf: f64 = f.iter().map(|y| (y - mf).powi(2)).sum();
        let r = cov / (va * vf).sqrt();
        assert!(r > 0.9, "r = {r}");
        assert!((m[0][1] - r).abs() < 1e-12);
    }

    #[test]
    fn rejects_inverted_bounds_and_bad_noise() {
        let json = r#"{"lower":[50,60,180],"upper":[40,100,220]}"#;
        assert!(serde_json::from_str::<BoundsBox>(json).is_err());

        let mut spec = SyntheticSpec::single_peak();
        spec.noise.cot = -1.0;
        assert!(synthesize(&spec).is_err());
        let spec = SyntheticSpec {
            samples: 0,
            ..SyntheticSpec::single_peak()
        };
        assert!(synthesize(&spec).is_err());
    }

    #[test]
    fn peaked_surface_has_its_maximum_at_center() {
        let s = QuadraticSurface::peaked(10.0, &[0.2, 0.7], &[3.0, 5.0]);
        assert!((s.value(&[0.2, 0.7]) - 10.0).abs() < 1e-12);
        assert!((s.value(&[0.0, 0.0]) - (10.0 - 3.0 * 0.04 - 5.0 * 0.49)).abs() < 1e-12);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = SyntheticSpec::conflicting();
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back: SyntheticSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
