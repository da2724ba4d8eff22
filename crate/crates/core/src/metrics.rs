//! Performance measures: non-dominated filtering, exact two-objective
//! hypervolume, and cross-seed aggregation of hypervolume histories.

use crate::dominance::dominates;
use crate::{Error, Result};

/// Indices of the non-dominated, de-duplicated points, in input order.
///
/// Weakly dominated points are removed; exact duplicates keep their first
/// occurrence only. Two-objective inputs use an `O(n log n)` sweep, higher
/// dimensions fall back to pairwise comparison. Panics if point lengths
/// disagree.
pub fn nondominated_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let m = points[0].as_ref().len();
    assert!(
        points.iter().all(|p| p.as_ref().len() == m),
        "points of mixed dimension"
    );
    if m == 2 {
        sweep_indices(points)
    } else {
        pairwise_indices(points)
    }
}

/// The non-dominated, de-duplicated points themselves, in input order.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    nondominated_indices(points)
        .into_iter()
        .map(|i| points[i].clone())
        .collect()
}

/// Two-objective sweep: after sorting by (f1, f2, index), a point survives
/// exactly when its f2 strictly improves on everything seen before it.
fn sweep_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let (pa, pb) = (points[a].as_ref(), points[b].as_ref());
        pa[0]
            .partial_cmp(&pb[0])
            .unwrap()
            .then(pa[1].partial_cmp(&pb[1]).unwrap())
            .then(a.cmp(&b))
    });
    let mut survivor = vec![false; points.len()];
    let mut best_f2 = f64::INFINITY;
    for &idx in &order {
        let f2 = points[idx].as_ref()[1];
        if f2 < best_f2 {
            survivor[idx] = true;
            best_f2 = f2;
        }
    }
    (0..points.len()).filter(|&i| survivor[i]).collect()
}

/// General-dimension filter by pairwise dominance checks.
fn pairwise_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            let pi = points[i].as_ref();
            !points.iter().enumerate().any(|(j, q)| {
                let q = q.as_ref();
                j != i && (dominates(q, pi) || (j < i && q == pi))
            })
        })
        .collect()
}

/// Exact hypervolume of the region dominated by `points` and bounded by
/// `reference`, for two objectives (minimization).
///
/// Only points componentwise less than or equal to the reference contribute;
/// a coordinate equal to the reference contributes zero area. Returns an
/// error for any dimension other than two.
pub fn hypervolume_2d(points: &[Vec<f64>], reference: &[f64]) -> Result<f64> {
    if reference.len() != 2 {
        return Err(Error::UnsupportedDimension(reference.len()));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != 2) {
        return Err(Error::UnsupportedDimension(bad.len()));
    }
    let within: Vec<Vec<f64>> = points
        .iter()
        .filter(|p| p[0] <= reference[0] && p[1] <= reference[1])
        .cloned()
        .collect();
    let mut front = nondominated_filter(&within);
    front.sort_unstable_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());

    // After filtering, f1 is strictly increasing and f2 strictly decreasing,
    // so the dominated region decomposes into disjoint vertical slabs.
    let mut hv = 0.0;
    let mut prev_f2 = reference[1];
    for p in &front {
        hv += (reference[0] - p[0]) * (prev_f2 - p[1]);
        prev_f2 = p[1];
    }
    Ok(hv)
}

/// Per-generation mean and sample standard deviation across run histories.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAggregate {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// True when fewer than two histories were supplied, in which case the
    /// standard deviation is reported as zero.
    pub degenerate_std: bool,
}

/// Aggregates per-seed hypervolume series (all of equal length) pointwise.
pub fn aggregate_runs(series: &[Vec<f64>]) -> Result<RunAggregate> {
    let Some(first) = series.first() else {
        return Err(Error::Config("no run histories to aggregate".into()));
    };
    let generations = first.len();
    if series.iter().any(|s| s.len() != generations) {
        return Err(Error::Config(
            "run histories of different lengths cannot be aggregated".into(),
        ));
    }
    let runs = series.len() as f64;
    let degenerate_std = series.len() < 2;
    let mut mean = vec![0.0; generations];
    let mut std = vec![0.0; generations];
    for g in 0..generations {
        let sum: f64 = series.iter().map(|s| s[g]).sum();
        mean[g] = sum / runs;
        if !degenerate_std {
            let ss: f64 = series.iter().map(|s| (s[g] - mean[g]).powi(2)).sum();
            std[g] = (ss / (runs - 1.0)).sqrt();
        }
    }
    Ok(RunAggregate {
        mean,
        std,
        degenerate_std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn filter_drops_dominated_points() {
        let points = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        assert_eq!(
            nondominated_filter(&points),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn filter_keeps_single_point_and_preserves_order() {
        assert_eq!(nondominated_filter(&[vec![3.0, 3.0]]), vec![vec![3.0, 3.0]]);
        let points = vec![
            vec![3.0, 3.0],
            vec![5.0, 0.0],
            vec![0.0, 5.0],
            vec![4.0, 4.0],
        ];
        assert_eq!(
            nondominated_filter(&points),
            vec![vec![3.0, 3.0], vec![5.0, 0.0], vec![0.0, 5.0]]
        );
    }

    #[test]
    fn filter_collapses_duplicates_to_first_occurrence() {
        let points = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![1.0, 2.0]];
        assert_eq!(nondominated_indices(&points), vec![0, 1]);
    }

    #[test]
    fn filter_handles_three_objectives() {
        let points = vec![
            vec![1.0, 1.0, 1.0],
            vec![2.0, 2.0, 2.0],
            vec![2.0, 1.0, 1.0],
            vec![0.5, 3.0, 1.0],
        ];
        assert_eq!(nondominated_indices(&points), vec![0, 3]);
    }

    #[test]
    fn filter_of_empty_input_is_empty() {
        assert!(nondominated_filter(&[]).is_empty());
    }

    #[test]
    fn hypervolume_single_point() {
        assert_eq!(hypervolume_2d(&[vec![0.0, 0.0]], &[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn hypervolume_two_point_staircase() {
        let points = vec![vec![0.0, 0.5], vec![0.5, 0.0]];
        assert_eq!(hypervolume_2d(&points, &[1.0, 1.0]).unwrap(), 0.75);
    }

    #[test]
    fn points_beyond_the_reference_contribute_nothing() {
        let base = vec![vec![0.0, 0.5], vec![0.5, 0.0]];
        let with_outlier = vec![
            vec![0.0, 0.5],
            vec![0.5, 0.0],
            vec![2.0, 2.0],
            vec![0.25, 1.5],
        ];
        assert_eq!(
            hypervolume_2d(&base, &[1.0, 1.0]).unwrap(),
            hypervolume_2d(&with_outlier, &[1.0, 1.0]).unwrap()
        );
        // A point sitting exactly on the reference adds zero area.
        assert_eq!(hypervolume_2d(&[vec![1.0, 1.0]], &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(hypervolume_2d(&[], &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn hypervolume_rejects_other_dimensions() {
        assert!(matches!(
            hypervolume_2d(&[vec![0.0, 0.0, 0.0]], &[1.0, 1.0, 1.0]),
            Err(Error::UnsupportedDimension(3))
        ));
        assert!(matches!(
            hypervolume_2d(&[vec![0.0]], &[1.0, 1.0]),
            Err(Error::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn aggregate_matches_hand_computed_statistics() {
        let agg = aggregate_runs(&[vec![1.0], vec![3.0]]).unwrap();
        assert_eq!(agg.mean, vec![2.0]);
        assert!((agg.std[0] - 2.0f64.sqrt()).abs() < 1e-15);
        assert!(!agg.degenerate_std);
    }

    #[test]
    fn aggregate_of_identical_histories_has_zero_std() {
        // Dyadic values keep the arithmetic exact for any run count.
        let series = vec![vec![0.5, 0.75, 0.875]; 37];
        let agg = aggregate_runs(&series).unwrap();
        assert_eq!(agg.mean, vec![0.5, 0.75, 0.875]);
        assert_eq!(agg.std, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn aggregate_flags_single_history() {
        let agg = aggregate_runs(&[vec![1.0, 2.0]]).unwrap();
        assert!(agg.degenerate_std);
        assert_eq!(agg.std, vec![0.0, 0.0]);
    }

    #[test]
    fn aggregate_rejects_ragged_or_empty_input() {
        assert!(aggregate_runs(&[]).is_err());
        assert!(aggregate_runs(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    fn arbitrary_points(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 0..max)
    }

    proptest! {
        #[test]
        fn sweep_agrees_with_pairwise_on_two_objectives(points in arbitrary_points(60)) {
            prop_assert_eq!(sweep_indices(&points), pairwise_indices(&points));
        }

        #[test]
        fn hypervolume_never_decreases_when_points_are_added(
            points in arbitrary_points(40),
            extra in proptest::collection::vec(0.0f64..1.0, 2),
        ) {
            let reference = [1.5, 1.5];
            let before = hypervolume_2d(&points, &reference).unwrap();
            let mut grown = points.clone();
            grown.push(extra);
            let after = hypervolume_2d(&grown, &reference).unwrap();
            prop_assert!(after >= before - 1e-12);
        }

        #[test]
        fn hypervolume_ignores_dominated_points(points in arbitrary_points(40)) {
            let reference = [1.5, 1.5];
            let all = hypervolume_2d(&points, &reference).unwrap();
            let front = nondominated_filter(&points);
            let filtered = hypervolume_2d(&front, &reference).unwrap();
            prop_assert!((all - filtered).abs() < 1e-12);
        }
    }
}
