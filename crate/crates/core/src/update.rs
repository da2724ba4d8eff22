//! Neighborhood replacement rules. All three rules visit the neighborhood of
//! the subproblem that produced the offspring and decide, per neighbor,
//! whether the offspring displaces the incumbent:
//!
//! * [`update_cmoead`] — feasibility first: among feasible solutions the
//!   scalarized fitness decides, feasible always beats infeasible, and among
//!   infeasible solutions the smaller total violation wins.
//! * [`update_dma`] — like the above for feasible incumbents, but an
//!   infeasible offspring with better scalarized fitness is remembered in the
//!   neighbor's bounded archive, and infeasible incumbents are compared by
//!   violation-vector dominance before falling back to scalarized fitness.
//! * [`update_lm`] — the feasibility-first rule restricted to neighbors whose
//!   incumbents are currently feasible (computed before any replacement).
//!
//! Every rule returns the number of incumbents replaced; archive insertions
//! are not counted.

use crate::decomposition::tchebycheff;
use crate::dominance::cv_dominates;
use crate::types::{Individual, ReferencePoint, Subproblem, WeightVector};

/// Single-neighbor test of the feasibility-first rule.
///
/// The final branch (infeasible offspring against a feasible incumbent) never
/// replaces; it is spelled out so each case is visible even where callers
/// pre-filter to feasible incumbents.
fn feasibility_first_replaces(
    offspring: &Individual,
    incumbent: &Individual,
    weight: &WeightVector,
    z: &ReferencePoint,
) -> bool {
    match (offspring.is_feasible(), incumbent.is_feasible()) {
        (true, true) => {
            tchebycheff(offspring.objectives(), weight, z)
                < tchebycheff(incumbent.objectives(), weight, z)
        }
        (true, false) => true,
        (false, false) => offspring.violation_sum() < incumbent.violation_sum(),
        (false, true) => false,
    }
}

/// Feasibility-first replacement over the whole neighborhood of `origin`.
pub fn update_cmoead(
    subproblems: &mut [Subproblem],
    offspring: &Individual,
    origin: usize,
    z: &ReferencePoint,
) -> usize {
    let neighborhood = subproblems[origin].neighborhood.clone();
    let mut replaced = 0;
    for j in neighborhood {
        let sp = &subproblems[j];
        if feasibility_first_replaces(offspring, &sp.incumbent, &sp.weight, z) {
            subproblems[j].incumbent = offspring.clone();
            replaced += 1;
        }
    }
    replaced
}

/// What the directed-mating rule decided for one neighbor.
enum DmaAction {
    Replace,
    Archive,
    Keep,
}

/// Directed-mating replacement: keeps useful infeasible offspring in bounded
/// per-subproblem archives and compares infeasible incumbents by
/// violation-vector dominance.
pub fn update_dma(
    subproblems: &mut [Subproblem],
    offspring: &Individual,
    origin: usize,
    z: &ReferencePoint,
    archive_capacity: usize,
) -> usize {
    assert!(archive_capacity >= 1, "archive capacity must be >= 1");
    let neighborhood = subproblems[origin].neighborhood.clone();
    let mut replaced = 0;
    for j in neighborhood {
        let action = {
            let sp = &subproblems[j];
            let better_fitness = || {
                tchebycheff(offspring.objectives(), &sp.weight, z)
                    < tchebycheff(sp.incumbent.objectives(), &sp.weight, z)
            };
            match (offspring.is_feasible(), sp.incumbent.is_feasible()) {
                (true, true) if better_fitness() => DmaAction::Replace,
                (true, true) => DmaAction::Keep,
                (false, true) if better_fitness() => DmaAction::Archive,
                (false, true) => DmaAction::Keep,
                (true, false) => DmaAction::Replace,
                // Both infeasible: replace when the offspring's violations
                // dominate, or when neither side dominates and the offspring
                // scalarizes better.
                (false, false) => {
                    if cv_dominates(&offspring.eval, &sp.incumbent.eval)
                        || (!cv_dominates(&sp.incumbent.eval, &offspring.eval) && better_fitness())
                    {
                        DmaAction::Replace
                    } else {
                        DmaAction::Keep
                    }
                }
            }
        };
        match action {
            DmaAction::Replace => {
                subproblems[j].incumbent = offspring.clone();
                replaced += 1;
            }
            DmaAction::Archive => {
                let sp = &mut subproblems[j];
                sp.archive.push(offspring.clone());
                if sp.archive.len() > archive_capacity {
                    let worst = worst_archive_index(&sp.archive, &sp.weight, z);
                    sp.archive.remove(worst);
                }
            }
            DmaAction::Keep => {}
        }
    }
    replaced
}

/// Index of the archive member to evict: the largest scalarized fitness under
/// the subproblem's own weight, ties broken toward the larger total violation,
/// remaining ties toward the oldest entry.
fn worst_archive_index(archive: &[Individual], weight: &WeightVector, z: &ReferencePoint) -> usize {
    let mut worst = 0;
    let mut worst_key = (
        tchebycheff(archive[0].objectives(), weight, z),
        archive[0].violation_sum(),
    );
    for (k, member) in archive.iter().enumerate().skip(1) {
        let key = (
            tchebycheff(member.objectives(), weight, z),
            member.violation_sum(),
        );
        if key.0 > worst_key.0 || (key.0 == worst_key.0 && key.1 > worst_key.1) {
            worst = k;
            worst_key = key;
        }
    }
    worst
}

/// Local-mating replacement: the feasibility-first rule applied only to
/// neighbors whose incumbents are feasible, with the feasible set fixed
/// before the first replacement.
pub fn update_lm(
    subproblems: &mut [Subproblem],
    offspring: &Individual,
    origin: usize,
    z: &ReferencePoint,
) -> usize {
    let feasible_neighbors: Vec<usize> = subproblems[origin]
        .neighborhood
        .iter()
        .copied()
        .filter(|&j| subproblems[j].incumbent.is_feasible())
        .collect();
    let mut replaced = 0;
    for j in feasible_neighbors {
        let sp = &subproblems[j];
        if feasibility_first_replaces(offspring, &sp.incumbent, &sp.weight, z) {
            subproblems[j].incumbent = offspring.clone();
            replaced += 1;
        }
    }
    replaced
}
