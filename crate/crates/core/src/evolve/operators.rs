//! Real-coded variation and selection operators.
//!
//! Random draws are taken from the caller's stream in a fixed order:
//!
//! * SBX: one uniform for the crossover decision, then (if crossing) one
//!   uniform per variable.
//! * Polynomial mutation: per variable, one uniform for the mutation
//!   decision followed, if mutating, by one uniform for the perturbation.
//! * Tournament: two uniform indices, plus one coin flip on an exact tie.

use std::cmp::Ordering;

use rand::Rng as _;

use super::BoundsBox;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// SBX spread factor for uniform draw `u` and distribution index `eta`.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// Unbounded SBX children of one variable. `u = 0.5` reproduces the parents.
pub fn sbx_pair(p1: f64, p2: f64, u: f64, eta: f64) -> (f64, f64) {
    let beta = sbx_beta(u, eta);
    let c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
    let c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    (c1, c2)
}

/// Simulated binary crossover. With probability `1 - crossover_probability`
/// the parents are returned unchanged; otherwise every variable is
/// recombined and children falling outside the box are clipped to the
/// violated bound.
pub fn sbx_crossover(
    p1: &[f64],
    p2: &[f64],
    eta: f64,
    crossover_probability: f64,
    bounds: &BoundsBox,
    rng: &mut Rng,
) -> Result<(Vec<f64>, Vec<f64>)> {
    bounds.check(p1)?;
    bounds.check(p2)?;
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() >= crossover_probability {
        return Ok((c1, c2));
    }
    for i in 0..p1.len() {
        let u = rng.gen::<f64>();
        let (a, b) = sbx_pair(p1[i], p2[i], u, eta);
        c1[i] = bounds.clip(i, a);
        c2[i] = bounds.clip(i, b);
    }
    Ok((c1, c2))
}

/// Bounded polynomial-mutation step for one variable. Returns the new value,
/// already clipped to `[lo, hi]`; `u = 0.5` leaves it unchanged.
pub fn polynomial_step(x: f64, lo: f64, hi: f64, u: f64, eta: f64) -> f64 {
    let span = hi - lo;
    let exponent = 1.0 / (eta + 1.0);
    let delta = if u < 0.5 {
        let xy = 1.0 - (x - lo) / span;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(exponent) - 1.0
    } else {
        let xy = 1.0 - (hi - x) / span;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(exponent)
    };
    (x + delta * span).clamp(lo, hi)
}

/// Mutate each variable independently with probability `mutation_probability`.
pub fn polynomial_mutation(
    x: &[f64],
    eta: f64,
    mutation_probability: f64,
    bounds: &BoundsBox,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    bounds.check(x)?;
    let mut out = x.to_vec();
    for (i, v) in out.iter_mut().enumerate() {
        if rng.gen::<f64>() < mutation_probability {
            let u = rng.gen::<f64>();
            *v = polynomial_step(*v, bounds.lower()[i], bounds.upper()[i], u, eta);
        }
    }
    Ok(out)
}

/// Binary tournament with replacement. `compare(a, b) == Greater` means `a`
/// wins; exact ties are settled by a fair coin. Returns the winner's index.
pub fn tournament_select<T>(
    pop: &[T],
    compare: impl Fn(&T, &T) -> Ordering,
    rng: &mut Rng,
) -> Result<usize> {
    if pop.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let a = rng.gen_range(0..pop.len());
    let b = rng.gen_range(0..pop.len());
    Ok(match compare(&pop[a], &pop[b]) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if rng.gen::<bool>() {
                a
            } else {
                b
            }
        }
    })
}
