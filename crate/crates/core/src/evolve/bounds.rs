use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-variable box constraints on a real-coded decision vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct BoundsBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBounds> for BoundsBox {
    type Error = Error;

    fn try_from(raw: RawBounds) -> Result<Self> {
        BoundsBox::new(raw.lower, raw.upper)
    }
}

impl From<BoundsBox> for RawBounds {
    fn from(b: BoundsBox) -> Self {
        RawBounds {
            lower: b.lower,
            upper: b.upper,
        }
    }
}

impl BoundsBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Bounds("no variables".into()));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Bounds(format!("variable {i} has a non-finite bound")));
            }
            if lo >= hi {
                return Err(Error::Bounds(format!(
                    "variable {i}: lower {lo} must be below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Operating envelope of the furnace: fired duty (MW), throughput and
    /// coil inlet temperature (degC).
    pub fn furnace() -> Self {
        Self {
            lower: vec![44.4, 58.6, 176.3],
            upper: vec![103.0, 107.0, 223.0],
        }
    }

    /// The unit hypercube `[0, 1]^dims`.
    pub fn unit(dims: usize) -> Self {
        assert!(dims > 0, "unit box needs at least one dimension");
        Self {
            lower: vec![0.0; dims],
            upper: vec![1.0; dims],
        }
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dims() {
            return Err(Error::Dimension {
                expected: self.dims(),
                got: x.len(),
            });
        }
        if !self.contains(x) {
            return Err(Error::Bounds(format!("{x:?} lies outside the box")));
        }
        Ok(())
    }

    pub fn clip(&self, i: usize, v: f64) -> f64 {
        v.clamp(self.lower[i], self.upper[i])
    }

    /// Map `x` into `[0, 1]^dims`.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| (v - self.lower[i]) / self.width(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_and_empty_boxes() {
        assert!(matches!(
            BoundsBox::new(vec![1.0], vec![0.0]),
            Err(Error::Bounds(_))
        ));
        assert!(matches!(
            BoundsBox::new(vec![1.0], vec![1.0]),
            Err(Error::Bounds(_))
        ));
        assert!(BoundsBox::new(vec![], vec![]).is_err());
        assert!(matches!(
            BoundsBox::new(vec![0.0, 0.0], vec![1.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn json_goes_through_validation() {
        let ok: BoundsBox = serde_json::from_str(r#"{"lower":[0,1],"upper":[1,2]}"#).unwrap();
        assert_eq!(ok.dims(), 2);
        let bad = serde_json::from_str::<BoundsBox>(r#"{"lower":[3],"upper":[2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn furnace_envelope() {
        let b = BoundsBox::furnace();
        assert!(b.contains(&[44.4, 58.6, 176.3]));
        assert!(b.contains(&[103.0, 107.0, 223.0]));
        assert!(!b.contains(&[103.1, 80.0, 200.0]));
    }
}
