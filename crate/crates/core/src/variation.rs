//! Variation operators: simulated binary crossover (SBX) and bounded
//! polynomial mutation, both clamped to the problem's box bounds.

use rand::{Rng, RngExt};

use crate::types::DesignVector;

/// SBX spread factor for a uniform draw `u` in [0, 1).
fn spread_factor(u: f64, distribution_index: f64) -> f64 {
    let exponent = 1.0 / (distribution_index + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// Blends one pair of parent variables with spread `beta`. The children are
/// symmetric around the parents' mean, so their sum equals the parents' sum.
fn blend(a: f64, b: f64, beta: f64) -> (f64, f64) {
    (
        0.5 * ((1.0 + beta) * a + (1.0 - beta) * b),
        0.5 * ((1.0 - beta) * a + (1.0 + beta) * b),
    )
}

/// Simulated binary crossover.
///
/// With probability `1 - crossover_rate` the parents are returned unchanged.
/// Otherwise each variable is crossed with probability 0.5 (and copied
/// otherwise), drawing a fresh spread factor per crossed variable. Children
/// are clamped to the bounds afterwards.
pub fn sbx_crossover(
    p1: &DesignVector,
    p2: &DesignVector,
    crossover_rate: f64,
    distribution_index: f64,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> (DesignVector, DesignVector) {
    let n = p1.len();
    assert_eq!(n, p2.len(), "parent length mismatch");
    assert_eq!(n, lower.len(), "bounds length mismatch");
    assert_eq!(n, upper.len(), "bounds length mismatch");

    let mut c1 = p1.values().to_vec();
    let mut c2 = p2.values().to_vec();
    if rng.random::<f64>() < crossover_rate {
        for k in 0..n {
            if rng.random::<f64>() < 0.5 {
                let beta = spread_factor(rng.random(), distribution_index);
                (c1[k], c2[k]) = blend(c1[k], c2[k], beta);
            }
        }
    }
    for k in 0..n {
        c1[k] = c1[k].clamp(lower[k], upper[k]);
        c2[k] = c2[k].clamp(lower[k], upper[k]);
    }
    (DesignVector::new(c1), DesignVector::new(c2))
}

/// Bounded polynomial mutation: each variable is perturbed independently with
/// probability `mutation_rate`; the perturbation shrinks to zero at the
/// variable's bound on that side, so mutants stay inside the box.
pub fn polynomial_mutation(
    x: &DesignVector,
    mutation_rate: f64,
    distribution_index: f64,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> DesignVector {
    let n = x.len();
    assert_eq!(n, lower.len(), "bounds length mismatch");
    assert_eq!(n, upper.len(), "bounds length mismatch");

    let exponent = distribution_index + 1.0;
    let mut out = x.values().to_vec();
    for k in 0..n {
        if rng.random::<f64>() < mutation_rate {
            let (lb, ub) = (lower[k], upper[k]);
            let range = ub - lb;
            let u: f64 = rng.random();
            let delta = if u < 0.5 {
                let to_lower = (out[k] - lb) / range;
                (2.0 * u + (1.0 - 2.0 * u) * (1.0 - to_lower).powf(exponent)).powf(1.0 / exponent)
                    - 1.0
            } else {
                let to_upper = (ub - out[k]) / range;
                1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - to_upper).powf(exponent))
                    .powf(1.0 / exponent)
            };
            out[k] = (out[k] + delta * range).clamp(lb, ub);
        }
    }
    DesignVector::new(out)
}
