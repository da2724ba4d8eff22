//! Seeded optimization runs, multi-seed experiments, and CSV reporting.
//!
//! A [`run`] is fully determined by the problem and the [`RunConfig`]
//! (including its seed): it uses a single sequential ChaCha8 random stream,
//! so identical inputs reproduce identical histories bit for bit.
//! [`run_experiment`] fans a config out over a seed list (in parallel — the
//! per-run streams are independent), aggregates the hypervolume histories,
//! and optionally writes per-run and summary CSV files.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::Path;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decomposition::{build_neighborhoods, generate_weights, update_reference_point};
use crate::mating::{select_dm, select_hybrid, select_lm, select_neighborhood};
use crate::metrics::{aggregate_runs, hypervolume_2d};
use crate::types::{
    Algorithm, DesignVector, HybridSplit, Individual, Problem, ReferencePoint, RunConfig,
    Subproblem,
};
use crate::update::{update_cmoead, update_dma, update_lm};
use crate::variation::{polynomial_mutation, sbx_crossover};
use crate::{Error, Result};

/// Per-generation progress of one run.
///
/// All vectors have one entry per completed generation (so a zero-generation
/// run yields empty vectors). `population_hv` measures the feasible
/// incumbents only; `cumulative_hv` measures an unbounded non-dominated
/// archive of every feasible individual evaluated so far, and is therefore
/// non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct HvHistory {
    pub seed: u64,
    pub population_hv: Vec<f64>,
    pub cumulative_hv: Vec<f64>,
    /// Number of subproblems whose incumbent is feasible.
    pub feasible_count: Vec<usize>,
    /// Directed-mating selections that found a dominating candidate.
    pub dm_success_count: Vec<usize>,
    /// Total evaluator invocations: population × (generations + 1).
    pub evaluations: u64,
    /// Hash of the initial population (designs, objectives, constraint
    /// values), for checking that runs with equal seeds started identically.
    pub initial_population_digest: u64,
}

/// Outcome of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub history: HvHistory,
    /// Non-dominated feasible individuals over the whole run, sorted by the
    /// first objective.
    pub front: Vec<Individual>,
}

/// Unbounded archive of mutually non-dominated individuals, two objectives.
///
/// Members are kept sorted by ascending first objective, which (with
/// duplicates rejected and dominated members evicted) forces the second
/// objective to descend strictly; inserts then only need to look at adjacent
/// members.
#[derive(Debug, Clone, Default)]
struct ParetoArchive {
    members: Vec<Individual>,
}

impl ParetoArchive {
    fn new() -> Self {
        Self::default()
    }

    /// Adds `candidate` unless a member weakly dominates it; evicts members
    /// it weakly dominates. An exact objective duplicate keeps the earlier
    /// arrival. Returns whether the candidate was added.
    fn insert(&mut self, candidate: Individual) -> bool {
        let f = candidate.objectives();
        let key = (f[0], f[1]);
        let pos = self
            .members
            .partition_point(|m| (m.objectives()[0], m.objectives()[1]) < key);
        if pos > 0 && self.members[pos - 1].objectives()[1] <= key.1 {
            return false; // weakly dominated from the left
        }
        if pos < self.members.len() {
            let at = self.members[pos].objectives();
            if (at[0], at[1]) == key {
                return false; // duplicate
            }
        }
        let mut end = pos;
        while end < self.members.len() && self.members[end].objectives()[1] >= key.1 {
            end += 1; // these members are dominated by the candidate
        }
        self.members.splice(pos..end, [candidate]);
        true
    }

    fn hypervolume(&self, reference: &[f64]) -> Result<f64> {
        let points: Vec<Vec<f64>> = self
            .members
            .iter()
            .map(|m| m.objectives().to_vec())
            .collect();
        hypervolume_2d(&points, reference)
    }
}

fn digest(population: &[Individual]) -> u64 {
    let mut hasher = DefaultHasher::new();
    for individual in population {
        for v in individual.x.values() {
            v.to_bits().hash(&mut hasher);
        }
        for v in individual.objectives() {
            v.to_bits().hash(&mut hasher);
        }
        for v in individual.eval.constraint_values() {
            v.to_bits().hash(&mut hasher);
        }
    }
    hasher.finish()
}

/// Draws `count` distinct indices out of `0..length` (partial Fisher–Yates).
fn sample_indices(length: usize, count: usize, rng: &mut impl Rng) -> Vec<usize> {
    let count = count.min(length);
    let mut indices: Vec<usize> = (0..length).collect();
    for j in 0..count {
        let pick = j + rng.random_range(0..length - j);
        indices.swap(j, pick);
    }
    indices.truncate(count);
    indices
}

/// Executes one seeded run.
///
/// Evaluation failures abort the run with the offending generation attached;
/// generation 0 is the initial population.
pub fn run(problem: &Problem, config: &RunConfig) -> Result<RunResult> {
    config.validate(problem)?;
    if problem.objectives() != 2 {
        return Err(Error::Config(format!(
            "hypervolume tracking requires exactly 2 objectives, problem '{}' has {}",
            problem.name(),
            problem.objectives()
        )));
    }

    let weights = generate_weights(config.population, problem.objectives())?;
    let neighborhoods = build_neighborhoods(&weights, config.neighborhood)?;
    let mutation_rate = config.resolved_mutation_rate(problem.dimensions());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut evaluations: u64 = 0;
    let evaluate =
        |x: DesignVector, generation: usize, evaluations: &mut u64| -> Result<Individual> {
            let eval = problem.evaluate(&x).map_err(|e| Error::Run {
                generation,
                source: Box::new(e),
            })?;
            *evaluations += 1;
            Ok(Individual::new(x, eval))
        };

    let mut initial = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let x: Vec<f64> = problem
            .lower()
            .iter()
            .zip(problem.upper())
            .map(|(&lb, &ub)| rng.random_range(lb..ub))
            .collect();
        initial.push(evaluate(DesignVector::new(x), 0, &mut evaluations)?);
    }
    let initial_population_digest = digest(&initial);

    let mut z = ReferencePoint::at_infinity(problem.objectives());
    let mut archive = ParetoArchive::new();
    for individual in &initial {
        z = update_reference_point(&z, individual.objectives());
        if individual.is_feasible() {
            archive.insert(individual.clone());
        }
    }

    let mut subproblems: Vec<Subproblem> = weights
        .into_iter()
        .zip(neighborhoods)
        .zip(initial)
        .enumerate()
        .map(|(i, ((weight, hood), incumbent))| Subproblem::new(i, weight, hood, incumbent))
        .collect();

    let mut history = HvHistory {
        seed: config.seed,
        population_hv: Vec::with_capacity(config.generations),
        cumulative_hv: Vec::with_capacity(config.generations),
        feasible_count: Vec::with_capacity(config.generations),
        dm_success_count: Vec::with_capacity(config.generations),
        evaluations: 0,
        initial_population_digest,
    };

    for generation in 1..=config.generations {
        // Under the per-generation hybrid split, directed mating is assigned
        // to a fixed share of subproblems up front instead of per offspring.
        let dm_mask: Option<Vec<bool>> = if config.algorithm == Algorithm::CmoeadDmaLm
            && config.hybrid_split == HybridSplit::PerGeneration
        {
            let share = (config.dm_rate * config.population as f64).round() as usize;
            let mut mask = vec![false; config.population];
            for i in sample_indices(config.population, share, &mut rng) {
                mask[i] = true;
            }
            Some(mask)
        } else {
            None
        };

        let mut dm_successes = 0;
        for i in 0..config.population {
            let parents = match config.algorithm {
                Algorithm::Cmoead => select_neighborhood(&subproblems, i, &mut rng),
                Algorithm::CmoeadDma => select_dm(&subproblems, i, &z, config.dm_pool, &mut rng),
                Algorithm::CmoeadDmaLm => match &dm_mask {
                    None => select_hybrid(
                        &subproblems,
                        i,
                        &z,
                        config.dm_rate,
                        config.dm_pool,
                        &mut rng,
                    ),
                    Some(mask) if mask[i] => {
                        select_dm(&subproblems, i, &z, config.dm_pool, &mut rng)
                    }
                    Some(_) => select_lm(&subproblems, i, &mut rng),
                },
            };
            if parents.used_dm && parents.dm_found_candidate {
                dm_successes += 1;
            }

            let (child, _) = sbx_crossover(
                &parents.first.x,
                &parents.second.x,
                config.crossover_rate,
                config.crossover_index,
                problem.lower(),
                problem.upper(),
                &mut rng,
            );
            let child = polynomial_mutation(
                &child,
                mutation_rate,
                config.mutation_index,
                problem.lower(),
                problem.upper(),
                &mut rng,
            );
            let offspring = evaluate(child, generation, &mut evaluations)?;

            z = update_reference_point(&z, offspring.objectives());
            if offspring.is_feasible() {
                archive.insert(offspring.clone());
            }
            match config.algorithm {
                Algorithm::Cmoead => {
                    update_cmoead(&mut subproblems, &offspring, i, &z);
                }
                Algorithm::CmoeadDma => {
                    update_dma(&mut subproblems, &offspring, i, &z, config.archive_capacity);
                }
                Algorithm::CmoeadDmaLm => {
                    if parents.used_dm {
                        update_dma(&mut subproblems, &offspring, i, &z, config.archive_capacity);
                    } else {
                        update_lm(&mut subproblems, &offspring, i, &z);
                    }
                }
            }
        }

        let feasible_points: Vec<Vec<f64>> = subproblems
            .iter()
            .filter(|s| s.incumbent.is_feasible())
            .map(|s| s.incumbent.objectives().to_vec())
            .collect();
        history.feasible_count.push(feasible_points.len());
        history
            .population_hv
            .push(hypervolume_2d(&feasible_points, problem.hv_reference())?);
        history
            .cumulative_hv
            .push(archive.hypervolume(problem.hv_reference())?);
        history.dm_success_count.push(dm_successes);
    }

    history.evaluations = evaluations;
    Ok(RunResult {
        history,
        front: archive.members,
    })
}

/// Expands one master seed into `count` per-run seeds with the SplitMix64
/// sequence (state advances by 0x9E3779B97F4A7C15 per output), so a whole
/// seed list is reproducible from a single integer.
pub fn derive_seeds(master_seed: u64, count: usize) -> Vec<u64> {
    let mut state = master_seed;
    (0..count)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut mixed = state;
            mixed = (mixed ^ (mixed >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            mixed = (mixed ^ (mixed >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            mixed ^ (mixed >> 31)
        })
        .collect()
}

/// Histories and aggregates of one config fanned out over several seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub problem: String,
    pub algorithm: Algorithm,
    /// Successful runs, in seed-list order.
    pub histories: Vec<(u64, HvHistory)>,
    /// Failed runs as (seed, error message), in seed-list order.
    pub failures: Vec<(u64, String)>,
    /// Per-generation mean/sample standard deviation of `cumulative_hv`
    /// across the successful runs; empty when every run failed.
    pub mean_hv: Vec<f64>,
    pub std_hv: Vec<f64>,
    /// True when fewer than two runs succeeded, making `std_hv` all zero.
    pub degenerate_std: bool,
}

/// Runs `config` once per seed (in parallel) and aggregates the histories.
///
/// A failing seed is recorded in `failures` and excluded from the aggregate
/// rather than aborting the experiment. With `out_dir` set, writes
/// `history_*` and `front_*` CSV files per successful run plus one
/// `summary_*` CSV (see the crate README for the formats).
pub fn run_experiment(
    problem: &Problem,
    config: &RunConfig,
    seeds: &[u64],
    out_dir: Option<&Path>,
) -> Result<ExperimentReport> {
    if seeds.is_empty() {
        return Err(Error::Config("experiment needs at least one seed".into()));
    }

    let outcomes: Vec<(u64, Result<RunResult>)> = seeds
        .par_iter()
        .map(|&seed| {
            let per_seed = RunConfig {
                seed,
                ..config.clone()
            };
            (seed, run(problem, &per_seed))
        })
        .collect();

    let mut histories = Vec::new();
    let mut fronts = Vec::new();
    let mut failures = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(result) => {
                histories.push((seed, result.history));
                fronts.push((seed, result.front));
            }
            Err(error) => failures.push((seed, error.to_string())),
        }
    }

    let series: Vec<Vec<f64>> = histories
        .iter()
        .map(|(_, h)| h.cumulative_hv.clone())
        .collect();
    let (mean_hv, std_hv, degenerate_std) = if series.is_empty() {
        (Vec::new(), Vec::new(), false)
    } else {
        let aggregate = aggregate_runs(&series)?;
        (aggregate.mean, aggregate.std, aggregate.degenerate_std)
    };

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let stem = |kind: &str, seed: u64| {
            dir.join(format!(
                "{kind}_{}_{}_{seed}.csv",
                problem.name(),
                config.algorithm
            ))
        };
        for ((seed, history), (_, front)) in histories.iter().zip(&fronts) {
            write_history_csv(&stem("history", *seed), history)?;
            write_front_csv(&stem("front", *seed), front)?;
        }
        if !histories.is_empty() {
            let path = dir.join(format!(
                "summary_{}_{}.csv",
                problem.name(),
                config.algorithm
            ));
            write_summary_csv(&path, &mean_hv, &std_hv)?;
        }
    }

    Ok(ExperimentReport {
        problem: problem.name().to_string(),
        algorithm: config.algorithm,
        histories,
        failures,
        mean_hv,
        std_hv,
        degenerate_std,
    })
}

/// Floats are written with `{}` (shortest round-trip form), so parsing a CSV
/// back recovers bit-identical values.
fn write_history_csv(path: &Path, history: &HvHistory) -> Result<()> {
    let mut text =
        String::from("generation,population_hv,cumulative_hv,feasible_count,dm_success\n");
    for g in 0..history.population_hv.len() {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            g + 1,
            history.population_hv[g],
            history.cumulative_hv[g],
            history.feasible_count[g],
            history.dm_success_count[g],
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_summary_csv(path: &Path, mean: &[f64], std: &[f64]) -> Result<()> {
    let mut text = String::from("generation,mean_hv,std_hv\n");
    for g in 0..mean.len() {
        text.push_str(&format!("{},{},{}\n", g + 1, mean[g], std[g]));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_front_csv(path: &Path, front: &[Individual]) -> Result<()> {
    let dimensions = front.first().map_or(0, |m| m.x.len());
    let mut text = String::from("f1,f2");
    for k in 1..=dimensions {
        text.push_str(&format!(",x{k}"));
    }
    text.push('\n');
    for member in front {
        let f = member.objectives();
        text.push_str(&format!("{},{}", f[0], f[1]));
        for v in member.x.values() {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::nondominated_filter;
    use crate::problems;
    use crate::types::Evaluation;
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    fn small_config(algorithm: Algorithm) -> RunConfig {
        let mut config = RunConfig::new(algorithm);
        config.population = 8;
        config.generations = 5;
        config.neighborhood = 3;
        config.archive_capacity = 3;
        config.seed = 42;
        config
    }

    /// Always-feasible problem whose objectives lie on the line f2 = 1 - f1,
    /// so every evaluated point joins the non-dominated archive. Structural
    /// assertions use it to avoid depending on feasibility luck.
    fn line_problem() -> Problem {
        Problem::new(
            "toy",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            2,
            1,
            vec![2.0, 2.0],
            Arc::new(|x: &[f64]| Ok((vec![x[0], 1.0 - x[0]], vec![-1.0]))),
        )
        .unwrap()
    }

    fn point(f1: f64, f2: f64) -> Individual {
        Individual::new(
            DesignVector::new(vec![f1]),
            Evaluation::new(vec![f1, f2], vec![-1.0]),
        )
    }

    #[test]
    fn archive_keeps_exactly_the_nondominated_set() {
        let mut archive = ParetoArchive::new();
        for (f1, f2) in [
            (2.0, 2.0),
            (1.0, 3.0),
            (3.0, 1.0),
            (2.0, 2.0), // duplicate
            (1.5, 2.5),
            (0.5, 0.5), // dominates everything so far
            (4.0, 4.0), // dominated on arrival
        ] {
            archive.insert(point(f1, f2));
        }
        let objectives: Vec<Vec<f64>> = archive
            .members
            .iter()
            .map(|m| m.objectives().to_vec())
            .collect();
        assert_eq!(objectives, vec![vec![0.5, 0.5]]);
    }

    #[test]
    fn archive_orders_members_by_first_objective() {
        let mut archive = ParetoArchive::new();
        for (f1, f2) in [(3.0, 1.0), (1.0, 3.0), (2.0, 2.0)] {
            assert!(archive.insert(point(f1, f2)));
        }
        let firsts: Vec<f64> = archive.members.iter().map(|m| m.objectives()[0]).collect();
        assert_eq!(firsts, vec![1.0, 2.0, 3.0]);
        assert!(!archive.insert(point(2.0, 2.0)), "duplicates are rejected");
        assert!(
            !archive.insert(point(2.5, 2.5)),
            "dominated points are rejected"
        );
    }

    proptest! {
        #[test]
        fn archive_matches_the_batch_filter(
            raw in proptest::collection::vec((0u8..16, 0u8..16), 1..120)
        ) {
            let points: Vec<Vec<f64>> = raw
                .iter()
                .map(|&(a, b)| vec![a as f64, b as f64])
                .collect();
            let mut archive = ParetoArchive::new();
            for p in &points {
                archive.insert(point(p[0], p[1]));
            }
            let mut by_archive: Vec<Vec<f64>> = archive
                .members
                .iter()
                .map(|m| m.objectives().to_vec())
                .collect();
            let mut by_filter = nondominated_filter(&points);
            by_archive.sort_by(|a, b| a.partial_cmp(b).unwrap());
            by_filter.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert_eq!(by_archive, by_filter);
        }
    }

    #[test]
    fn runs_are_bit_reproducible_per_seed() {
        let problem = problems::tnk();
        for algorithm in Algorithm::ALL {
            let config = small_config(algorithm);
            let first = run(&problem, &config).unwrap();
            let second = run(&problem, &config).unwrap();
            assert_eq!(first, second, "{algorithm} is not deterministic");

            let other = run(&problem, &RunConfig { seed: 43, ..config }).unwrap();
            assert_ne!(
                first.history.initial_population_digest, other.history.initial_population_digest,
                "{algorithm} ignored the seed"
            );
        }
    }

    #[test]
    fn evaluation_budget_is_population_times_generations_plus_one() {
        let problem = problems::tnk();
        for algorithm in Algorithm::ALL {
            let config = small_config(algorithm);
            let result = run(&problem, &config).unwrap();
            assert_eq!(result.history.evaluations, 8 * (5 + 1));
            assert_eq!(result.history.population_hv.len(), 5);
        }
    }

    #[test]
    fn zero_generations_still_evaluates_the_initial_population() {
        let problem = line_problem();
        let config = RunConfig {
            generations: 0,
            ..small_config(Algorithm::Cmoead)
        };
        let result = run(&problem, &config).unwrap();
        assert_eq!(result.history.population_hv, Vec::<f64>::new());
        assert_eq!(result.history.evaluations, 8);
        assert!(
            !result.front.is_empty(),
            "feasible initial points are archived"
        );
    }

    #[test]
    fn equal_seeds_share_the_initial_population_across_algorithms() {
        let problem = problems::tnk();
        let digests: Vec<u64> = Algorithm::ALL
            .into_iter()
            .map(|algorithm| {
                run(&problem, &small_config(algorithm))
                    .unwrap()
                    .history
                    .initial_population_digest
            })
            .collect();
        assert_eq!(digests[0], digests[1]);
        assert_eq!(digests[0], digests[2]);

        let other = run(
            &problem,
            &RunConfig {
                seed: 43,
                ..small_config(Algorithm::Cmoead)
            },
        )
        .unwrap();
        assert_ne!(digests[0], other.history.initial_population_digest);
    }

    #[test]
    fn cumulative_hypervolume_is_monotone_and_bounds_the_population() {
        let problem = problems::tnk();
        for algorithm in Algorithm::ALL {
            let config = RunConfig {
                generations: 30,
                ..small_config(algorithm)
            };
            let history = run(&problem, &config).unwrap().history;
            for g in 0..30 {
                assert!(
                    history.population_hv[g] <= history.cumulative_hv[g] + 1e-12,
                    "population exceeded the all-time archive at generation {g}"
                );
                assert!(history.feasible_count[g] <= 8);
                if g > 0 {
                    assert!(
                        history.cumulative_hv[g] >= history.cumulative_hv[g - 1],
                        "cumulative hypervolume regressed at generation {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn front_is_nondominated_feasible_and_sorted() {
        let problem = line_problem();
        let result = run(&problem, &small_config(Algorithm::CmoeadDmaLm)).unwrap();
        let front = &result.front;
        assert!(!front.is_empty());
        for member in front {
            assert!(member.is_feasible());
        }
        for pair in front.windows(2) {
            assert!(pair[0].objectives()[0] < pair[1].objectives()[0]);
            assert!(pair[0].objectives()[1] > pair[1].objectives()[1]);
        }
    }

    #[test]
    fn baseline_never_reports_directed_mating_successes() {
        let problem = problems::tnk();
        let history = run(&problem, &small_config(Algorithm::Cmoead))
            .unwrap()
            .history;
        assert!(history.dm_success_count.iter().all(|&c| c == 0));
    }

    #[test]
    fn per_generation_split_caps_directed_mating_at_its_share() {
        let problem = problems::tnk();
        let config = RunConfig {
            hybrid_split: HybridSplit::PerGeneration,
            generations: 20,
            ..small_config(Algorithm::CmoeadDmaLm)
        };
        let history = run(&problem, &config).unwrap().history;
        // dm_rate 0.5 of 8 subproblems: at most 4 directed matings per
        // generation can succeed.
        assert!(history.dm_success_count.iter().all(|&c| c <= 4));
    }

    /// A 2-variable problem whose evaluator fails on the `failing`-th call.
    fn failing_problem(failing: usize) -> Problem {
        let calls = AtomicUsize::new(0);
        Problem::new(
            "fragile",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            2,
            1,
            vec![2.0, 2.0],
            Arc::new(move |x: &[f64]| {
                if calls.fetch_add(1, Ordering::SeqCst) + 1 == failing {
                    return Err(Error::Evaluation {
                        message: "solver diverged".into(),
                        design: x.to_vec(),
                    });
                }
                Ok((vec![x[0], x[1]], vec![-1.0]))
            }),
        )
        .unwrap()
    }

    #[test]
    fn evaluation_failures_abort_with_the_failing_generation() {
        // Call 30 falls in generation 3 (initialization is calls 1–8, then 8
        // offspring per generation).
        let err = run(&failing_problem(30), &small_config(Algorithm::Cmoead)).unwrap_err();
        match err {
            Error::Run { generation, source } => {
                assert_eq!(generation, 3);
                assert!(source.to_string().contains("solver diverged"));
            }
            other => panic!("expected a run error, got {other:?}"),
        }

        let err = run(&failing_problem(2), &small_config(Algorithm::Cmoead)).unwrap_err();
        match err {
            Error::Run { generation, .. } => assert_eq!(generation, 0),
            other => panic!("expected a run error, got {other:?}"),
        }
    }

    #[test]
    fn derived_seeds_are_deterministic_and_distinct() {
        let seeds = derive_seeds(0, 4);
        assert_eq!(seeds, derive_seeds(0, 4));
        // First output of the SplitMix64 sequence from state 0.
        assert_eq!(seeds[0], 0xE220_A839_7B1D_CDAF);
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
        assert_ne!(derive_seeds(1, 4), seeds);
    }

    #[test]
    fn experiment_aggregates_histories_and_writes_csv_files() {
        let problem = line_problem();
        let config = small_config(Algorithm::CmoeadDma);
        let dir = tempfile::tempdir().unwrap();
        let report = run_experiment(&problem, &config, &[1, 2], Some(dir.path())).unwrap();

        assert_eq!(report.histories.len(), 2);
        assert!(report.failures.is_empty());
        assert!(!report.degenerate_std);
        assert_eq!(report.mean_hv.len(), 5);
        for g in 0..5 {
            let a = report.histories[0].1.cumulative_hv[g];
            let b = report.histories[1].1.cumulative_hv[g];
            assert!((report.mean_hv[g] - 0.5 * (a + b)).abs() < 1e-15);
        }

        let history_path = dir.path().join("history_toy_cmoead-dma_1.csv");
        let text = std::fs::read_to_string(&history_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "generation,population_hv,cumulative_hv,feasible_count,dm_success"
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 5);
        // CSV floats round-trip to the exact in-memory history values.
        let first_row: Vec<&str> = rows[0].split(',').collect();
        assert_eq!(first_row[0], "1");
        let hv: f64 = first_row[2].parse().unwrap();
        assert_eq!(hv, report.histories[0].1.cumulative_hv[0]);

        let summary =
            std::fs::read_to_string(dir.path().join("summary_toy_cmoead-dma.csv")).unwrap();
        assert!(summary.starts_with("generation,mean_hv,std_hv\n"));
        assert_eq!(summary.lines().count(), 6);

        let front = std::fs::read_to_string(dir.path().join("front_toy_cmoead-dma_2.csv")).unwrap();
        assert!(front.starts_with("f1,f2,x1,x2\n"));
        assert!(front.lines().count() > 1);
    }

    #[test]
    fn failing_seeds_are_reported_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_experiment(
            &failing_problem(1),
            &small_config(Algorithm::Cmoead),
            &[7, 8],
            Some(dir.path()),
        )
        .unwrap();
        // Only the first run trips the single failure injection; exactly one
        // seed fails and the other still aggregates.
        assert_eq!(report.histories.len() + report.failures.len(), 2);
        assert_eq!(report.failures.len(), 1);
        assert!(report.failures[0].1.contains("generation 0"));
        assert!(
            report.degenerate_std,
            "one surviving run cannot estimate spread"
        );

        let empty = run_experiment(
            &problems::tnk(),
            &small_config(Algorithm::Cmoead),
            &[],
            None,
        );
        assert!(empty.is_err());
    }
}
