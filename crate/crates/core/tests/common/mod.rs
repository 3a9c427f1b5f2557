//! Instance generators shared by the integration tests.

#![allow(dead_code)]

use furnace_core::BoundsBox;
use furnace_core::moo::{Objective, ProblemSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// A concave quadratic in coordinates normalized to the box:
/// `peak - Σ k_i (z_i - c_i)² - Σ_{i<j} m_ij (z_i - c_i)(z_j - c_j)`.
/// Cross terms are small enough to keep the Hessian negative definite.
pub fn random_quadratic(name: &str, bounds: &BoundsBox, rng: &mut impl Rng) -> Objective {
    let dims = bounds.dims();
    let peak: f64 = rng.gen_range(50.0..400.0);
    let center: Vec<f64> = (0..dims).map(|_| rng.gen_range(0.1..0.9)).collect();
    let curvature: Vec<f64> = (0..dims).map(|_| rng.gen_range(5.0..40.0)).collect();
    let kmin = curvature.iter().copied().fold(f64::INFINITY, f64::min);
    let cross: Vec<f64> = (0..dims * dims).map(|_| rng.gen_range(-0.5..0.5) * kmin / dims as f64).collect();
    let b = bounds.clone();
    Objective::new(name, move |x| {
        let z = b.normalize(x);
        let dz: Vec<f64> = z.iter().zip(&center).map(|(a, c)| a - c).collect();
        let mut v = peak;
        for i in 0..dims {
            v -= curvature[i] * dz[i] * dz[i];
            for j in i + 1..dims {
                v -= cross[i * dims + j] * dz[i] * dz[j];
            }
        }
        v
    })
}

pub fn random_quadratic_problem(bounds: &BoundsBox, rng: &mut impl Rng) -> ProblemSpec {
    let y1 = random_quadratic("y1", bounds, rng);
    let y2 = random_quadratic("y2", bounds, rng);
    ProblemSpec::new(vec![y1, y2], bounds.clone()).unwrap()
}

/// `f1 = -x²`, `f2 = -(x-1)²` on `[0, 1]`.
pub fn conflicting_toy() -> ProblemSpec {
    ProblemSpec::new(
        vec![
            Objective::new("f1", |x| -x[0] * x[0]),
            Objective::new("f2", |x| -(x[0] - 1.0) * (x[0] - 1.0)),
        ],
        BoundsBox::unit(1),
    )
    .unwrap()
}

/// Pareto fronts by repeatedly peeling off the members nobody remaining
/// dominates, written directly from the definition.
pub fn peel_fronts(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let dominates = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y);
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&objs[j], &objs[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}
