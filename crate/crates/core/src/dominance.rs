//! Dominance relations used for replacement and filtering: Pareto dominance
//! on objective vectors and on constraint-violation vectors.
//!
//! Both relations are strict partial orders (irreflexive, asymmetric,
//! transitive). Comparing vectors of different lengths is a programmer error
//! and panics.

use crate::types::Evaluation;

/// Strict Pareto dominance on raw minimization vectors: `a` is no worse in
/// every component and strictly better in at least one.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(
        a.len(),
        b.len(),
        "dominance comparison on vectors of different lengths"
    );
    let mut strictly_better = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Dominance on constraint-violation vectors: `a` violates every constraint
/// no more than `b` and at least one strictly less.
///
/// A feasible individual (all violations zero) can never be cv-dominated.
pub fn cv_dominates(a: &Evaluation, b: &Evaluation) -> bool {
    dominates(a.violations(), b.violations())
}

/// Dominance on objective vectors (minimization).
pub fn objective_dominates(a: &Evaluation, b: &Evaluation) -> bool {
    dominates(a.objectives(), b.objectives())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_with_violations(h: Vec<f64>) -> Evaluation {
        Evaluation::new(vec![0.0], h)
    }

    fn eval_with_objectives(f: Vec<f64>) -> Evaluation {
        Evaluation::new(f, vec![])
    }

    #[test]
    fn cv_dominates_requires_strict_improvement_somewhere() {
        let a = eval_with_violations(vec![0.0, 1.0]);
        let b = eval_with_violations(vec![1.0, 1.0]);
        assert!(cv_dominates(&a, &b));
        assert!(!cv_dominates(&b, &a));
    }

    #[test]
    fn cv_incomparable_when_each_is_better_somewhere() {
        let a = eval_with_violations(vec![0.0, 2.0]);
        let b = eval_with_violations(vec![1.0, 1.0]);
        assert!(!cv_dominates(&a, &b));
        assert!(!cv_dominates(&b, &a));
    }

    #[test]
    fn cv_is_irreflexive_on_equal_vectors() {
        let a = eval_with_violations(vec![0.0, 0.0]);
        let b = eval_with_violations(vec![0.0, 0.0]);
        assert!(!cv_dominates(&a, &b));
        assert!(!cv_dominates(&b, &a));
    }

    #[test]
    fn objective_dominance_examples() {
        let a = eval_with_objectives(vec![1.0, 2.0]);
        let b = eval_with_objectives(vec![2.0, 2.0]);
        let c = eval_with_objectives(vec![2.0, 1.0]);
        assert!(objective_dominates(&a, &b));
        assert!(!objective_dominates(&b, &a));
        assert!(!objective_dominates(&a, &c));
        assert!(!objective_dominates(&c, &a));
        let a2 = eval_with_objectives(vec![1.0, 2.0]);
        assert!(!objective_dominates(&a, &a2));
    }

    #[test]
    #[should_panic(expected = "different lengths")]
    fn mismatched_lengths_panic() {
        dominates(&[1.0], &[1.0, 2.0]);
    }

    proptest! {
        #[test]
        fn irreflexive_and_asymmetric(v in proptest::collection::vec(0.0f64..5.0, 2..5),
                                      w in proptest::collection::vec(0.0f64..5.0, 2..5)) {
            prop_assert!(!dominates(&v, &v));
            if v.len() == w.len() && dominates(&v, &w) {
                prop_assert!(!dominates(&w, &v));
            }
        }

        #[test]
        fn transitive(a in proptest::collection::vec(0.0f64..5.0, 3),
                      b in proptest::collection::vec(0.0f64..5.0, 3),
                      c in proptest::collection::vec(0.0f64..5.0, 3)) {
            if dominates(&a, &b) && dominates(&b, &c) {
                prop_assert!(dominates(&a, &c));
            }
        }

        #[test]
        fn feasible_is_never_cv_dominated(h in proptest::collection::vec(-5.0f64..5.0, 1..6)) {
            let feasible = eval_with_violations(vec![-1.0; h.len()]);
            let other = eval_with_violations(h);
            prop_assert!(!cv_dominates(&other, &feasible));
        }
    }
}
