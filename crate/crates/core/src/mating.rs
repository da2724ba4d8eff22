//! Parent selection strategies.
//!
//! Every selector returns the origin subproblem's incumbent as the first
//! parent and differs only in how the second parent is chosen:
//!
//! * [`select_neighborhood`]: uniform draw from the neighborhood, the plain
//!   decomposition-based baseline.
//! * [`select_dm`] (directed mating): picks, from a pool of neighborhood
//!   incumbents and archived infeasible individuals, the best-scalarized one
//!   that Pareto-dominates the first parent in objective space — feasibility
//!   ignored — steering offspring through infeasible regions that lie beyond
//!   the current front. Falls back to a uniform neighborhood draw when
//!   nothing in the pool dominates.
//! * [`select_lm`] (local mating): uniform draw among neighbors whose
//!   incumbents are feasible, keeping variation inside the feasible region.
//!   Falls back to the whole neighborhood when no neighbor is feasible.
//! * [`select_hybrid`]: flips a biased coin per offspring between directed
//!   and local mating.

use rand::{Rng, RngExt};

use crate::decomposition::tchebycheff;
use crate::dominance::objective_dominates;
use crate::types::{DmPool, Individual, ReferencePoint, Subproblem};

/// A mating pair plus bookkeeping about how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectedParents {
    /// The origin subproblem's incumbent.
    pub first: Individual,
    pub second: Individual,
    /// True when the directed-mating selector produced this pair.
    pub used_dm: bool,
    /// True when directed mating found a dominating candidate (as opposed to
    /// falling back to a plain neighborhood draw).
    pub dm_found_candidate: bool,
}

fn uniform_neighbor<R: Rng + ?Sized>(
    subproblems: &[Subproblem],
    origin: usize,
    rng: &mut R,
) -> Individual {
    let hood = &subproblems[origin].neighborhood;
    let pick = hood[rng.random_range(0..hood.len())];
    subproblems[pick].incumbent.clone()
}

/// Baseline pairing: the incumbent plus a uniformly drawn neighbor incumbent.
pub fn select_neighborhood<R: Rng + ?Sized>(
    subproblems: &[Subproblem],
    origin: usize,
    rng: &mut R,
) -> SelectedParents {
    SelectedParents {
        first: subproblems[origin].incumbent.clone(),
        second: uniform_neighbor(subproblems, origin, rng),
        used_dm: false,
        dm_found_candidate: false,
    }
}

/// Directed mating: the second parent is the pool member with the best
/// scalarized fitness among those that Pareto-dominate the first parent.
///
/// The pool is the origin's neighborhood incumbents (in neighborhood order)
/// followed by its archive (oldest first), or the archive alone under
/// [`DmPool::ArchiveOnly`]. Ties on fitness keep the earliest pool member.
/// The random number stream is consumed only on fallback.
pub fn select_dm<R: Rng + ?Sized>(
    subproblems: &[Subproblem],
    origin: usize,
    z: &ReferencePoint,
    pool: DmPool,
    rng: &mut R,
) -> SelectedParents {
    let sub = &subproblems[origin];
    let first = sub.incumbent.clone();

    let neighbor_pool: &[usize] = match pool {
        DmPool::NeighborhoodAndArchive => &sub.neighborhood,
        DmPool::ArchiveOnly => &[],
    };
    let neighbors = neighbor_pool.iter().map(|&j| &subproblems[j].incumbent);
    let mut best: Option<(&Individual, f64)> = None;
    for candidate in neighbors.chain(sub.archive.iter()) {
        if !objective_dominates(&candidate.eval, &first.eval) {
            continue;
        }
        let fitness = tchebycheff(candidate.objectives(), &sub.weight, z);
        if best.is_none_or(|(_, incumbent_best)| fitness < incumbent_best) {
            best = Some((candidate, fitness));
        }
    }

    match best {
        Some((candidate, _)) => SelectedParents {
            first,
            second: candidate.clone(),
            used_dm: true,
            dm_found_candidate: true,
        },
        None => SelectedParents {
            first,
            second: uniform_neighbor(subproblems, origin, rng),
            used_dm: true,
            dm_found_candidate: false,
        },
    }
}

/// Local mating: the second parent is drawn uniformly from the neighbors
/// whose incumbents are feasible, or from the whole neighborhood when none
/// are.
pub fn select_lm<R: Rng + ?Sized>(
    subproblems: &[Subproblem],
    origin: usize,
    rng: &mut R,
) -> SelectedParents {
    let sub = &subproblems[origin];
    let feasible: Vec<usize> = sub
        .neighborhood
        .iter()
        .copied()
        .filter(|&j| subproblems[j].incumbent.is_feasible())
        .collect();
    let second = if feasible.is_empty() {
        uniform_neighbor(subproblems, origin, rng)
    } else {
        let pick = feasible[rng.random_range(0..feasible.len())];
        subproblems[pick].incumbent.clone()
    };
    SelectedParents {
        first: sub.incumbent.clone(),
        second,
        used_dm: false,
        dm_found_candidate: false,
    }
}

/// Hybrid selection: directed mating with probability `dm_rate`, local
/// mating otherwise.
pub fn select_hybrid<R: Rng + ?Sized>(
    subproblems: &[Subproblem],
    origin: usize,
    z: &ReferencePoint,
    dm_rate: f64,
    pool: DmPool,
    rng: &mut R,
) -> SelectedParents {
    if rng.random::<f64>() < dm_rate {
        select_dm(subproblems, origin, z, pool, rng)
    } else {
        select_lm(subproblems, origin, rng)
    }
}
