//! Decomposition machinery: uniformly spaced weight vectors, nearest-neighbor
//! subproblem neighborhoods, scalarizing functions, and the running reference
//! point.

use crate::types::{ReferencePoint, WeightVector};
use crate::{Error, Result};

/// Generates `count` weight vectors uniformly spaced on the unit simplex.
///
/// For two objectives the i-th vector is `(i/(count-1), 1 - i/(count-1))`.
/// For three or more objectives a simplex-lattice design is used, which only
/// exists for counts of the form C(h+m-1, m-1); other counts are rejected.
pub fn generate_weights(count: usize, objectives: usize) -> Result<Vec<WeightVector>> {
    if objectives < 2 {
        return Err(Error::Config(format!(
            "weight generation needs at least 2 objectives, got {objectives}"
        )));
    }
    if count < 2 {
        return Err(Error::Config(format!(
            "weight generation needs at least 2 vectors, got {count}"
        )));
    }
    if objectives == 2 {
        let step = (count - 1) as f64;
        return (0..count)
            .map(|i| {
                let first = i as f64 / step;
                WeightVector::new(vec![first, 1.0 - first])
            })
            .collect();
    }

    let divisions = lattice_divisions(count, objectives)?;
    let mut weights = Vec::with_capacity(count);
    let mut partial = Vec::with_capacity(objectives);
    enumerate_lattice(divisions, objectives, &mut partial, &mut weights)?;
    debug_assert_eq!(weights.len(), count);
    Ok(weights)
}

/// Finds the lattice resolution whose point count equals `count` exactly.
fn lattice_divisions(count: usize, objectives: usize) -> Result<usize> {
    let mut h = 1usize;
    loop {
        let points = lattice_size(h, objectives);
        if points == count as u128 {
            return Ok(h);
        }
        if points > count as u128 {
            let below = lattice_size(h - 1, objectives);
            return Err(Error::Config(format!(
                "no simplex lattice with {count} points for {objectives} objectives \
                 (nearest valid sizes: {below} and {points})"
            )));
        }
        h += 1;
    }
}

/// Number of lattice points C(h+m-1, m-1).
fn lattice_size(h: usize, m: usize) -> u128 {
    let mut result: u128 = 1;
    for k in 1..m {
        result = result * (h + k) as u128 / k as u128;
    }
    result
}

/// Emits lattice weights in ascending lexicographic order of their integer
/// coordinates.
fn enumerate_lattice(
    divisions: usize,
    objectives: usize,
    partial: &mut Vec<usize>,
    out: &mut Vec<WeightVector>,
) -> Result<()> {
    let used: usize = partial.iter().sum();
    if partial.len() == objectives - 1 {
        let mut components: Vec<f64> = partial
            .iter()
            .map(|&k| k as f64 / divisions as f64)
            .collect();
        components.push((divisions - used) as f64 / divisions as f64);
        out.push(WeightVector::new(components)?);
        return Ok(());
    }
    for k in 0..=(divisions - used) {
        partial.push(k);
        enumerate_lattice(divisions, objectives, partial, out)?;
        partial.pop();
    }
    Ok(())
}

/// For each weight vector, the indices of the `t` nearest vectors (Euclidean
/// distance, ties broken toward the lower index), sorted ascending.
///
/// Every neighborhood contains its own index because generated weights are
/// pairwise distinct, making self the unique nearest vector.
pub fn build_neighborhoods(weights: &[WeightVector], t: usize) -> Result<Vec<Vec<usize>>> {
    if t == 0 || t > weights.len() {
        return Err(Error::Config(format!(
            "neighborhood size must be in 1..={}, got {t}",
            weights.len()
        )));
    }
    let mut neighborhoods = Vec::with_capacity(weights.len());
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(weights.len());
    for wi in weights {
        order.clear();
        for (j, wj) in weights.iter().enumerate() {
            let d2: f64 = wi
                .components()
                .iter()
                .zip(wj.components())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            order.push((d2, j));
        }
        order.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut nearest: Vec<usize> = order[..t].iter().map(|&(_, j)| j).collect();
        nearest.sort_unstable();
        neighborhoods.push(nearest);
    }
    Ok(neighborhoods)
}

/// Weighted Tchebycheff scalarization: `max_j w_j * |f_j - z_j|` (smaller is
/// better).
pub fn tchebycheff(objectives: &[f64], weight: &WeightVector, z: &ReferencePoint) -> f64 {
    assert_eq!(
        objectives.len(),
        weight.len(),
        "objective/weight length mismatch"
    );
    assert_eq!(
        objectives.len(),
        z.len(),
        "objective/reference length mismatch"
    );
    objectives
        .iter()
        .zip(weight.components())
        .zip(z.components())
        .map(|((&f, &w), &zj)| w * (f - zj).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Weighted-sum scalarization: `sum_j w_j * f_j` (smaller is better).
pub fn weighted_sum(objectives: &[f64], weight: &WeightVector) -> f64 {
    assert_eq!(
        objectives.len(),
        weight.len(),
        "objective/weight length mismatch"
    );
    objectives
        .iter()
        .zip(weight.components())
        .map(|(&f, &w)| w * f)
        .sum()
}

/// Componentwise minimum of the reference point and a new objective vector.
pub fn update_reference_point(z: &ReferencePoint, objectives: &[f64]) -> ReferencePoint {
    assert_eq!(
        z.len(),
        objectives.len(),
        "objective/reference length mismatch"
    );
    ReferencePoint::from_components(
        z.components()
            .iter()
            .zip(objectives)
            .map(|(&zj, &fj)| zj.min(fj))
            .collect(),
    )
}
