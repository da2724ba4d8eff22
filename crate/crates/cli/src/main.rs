//! Command-line driver for the `cmoead` crate.
//!
//! Subcommands:
//!
//! * `run` — one problem under one algorithm, fanned out over seeds, with
//!   per-run and aggregate CSV reports
//! * `compare` — the same experiment repeated for all three algorithms over
//!   one shared seed list, so every algorithm starts each seed from the
//!   identical initial population
//! * `problems` — the built-in problem catalogue and the external-evaluator
//!   problem template
//! * `validate` — the oracle self-test battery
//!
//! Exit status is 0 on success and nonzero on configuration errors, failed
//! runs, or failed self-test checks.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cmoead::harness::derive_seeds;
use cmoead::problems::{self, external};
use cmoead::selftest;
use cmoead::{Algorithm, DmPool, ExperimentReport, HybridSplit, Problem, RunConfig};

#[derive(Parser)]
#[command(
    name = "cmoead",
    version,
    about = "Constrained multi-objective optimization by decomposition",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one problem and aggregate over seeds
    Run(RunArgs),
    /// Run all three algorithms on one problem with a shared seed list
    Compare(CompareArgs),
    /// List built-in problems and the external-evaluator template
    Problems,
    /// Run the self-test battery of oracle checks
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    target: TargetArgs,

    /// Algorithm: cmoead, cmoead-dma, or cmoead-dma-lm
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,

    #[command(flatten)]
    params: ParamArgs,

    #[command(flatten)]
    seeds: SeedArgs,

    /// Directory for history/front/summary CSV files (created if missing)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    target: TargetArgs,

    #[command(flatten)]
    params: ParamArgs,

    #[command(flatten)]
    seeds: SeedArgs,

    /// Directory for history/front/summary CSV files (created if missing)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// What to optimize: exactly one of a built-in problem or an external spec.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Built-in problem name: osy, tnk, mcdtlz, or wb
    #[arg(long, value_name = "NAME")]
    problem: Option<String>,

    /// Path to an external-evaluator problem description (see `problems`)
    #[arg(long, value_name = "PATH")]
    external_spec: Option<PathBuf>,
}

impl TargetArgs {
    fn resolve(&self) -> Result<Problem, String> {
        match (&self.problem, &self.external_spec) {
            (Some(name), None) => problems::by_name(name).map_err(|e| e.to_string()),
            (None, Some(path)) => external::external_problem(path).map_err(|e| e.to_string()),
            _ => unreachable!("clap enforces exactly one target"),
        }
    }
}

/// Algorithm parameters shared by `run` and `compare`. Defaults reproduce the
/// reference experimental setup.
#[derive(Args)]
struct ParamArgs {
    /// Population size / number of subproblems (N)
    #[arg(long, default_value_t = 100)]
    population: usize,

    /// Offspring generations (G); total evaluations are N*(G+1)
    #[arg(long, default_value_t = 1000)]
    generations: usize,

    /// Neighborhood size (T)
    #[arg(long, default_value_t = 20)]
    neighborhood: usize,

    /// Directed-mating rate of the hybrid algorithm
    #[arg(long = "r", default_value_t = 0.5)]
    dm_rate: f64,

    /// Per-subproblem capacity of the infeasible-solutions archive
    #[arg(long = "alpha", default_value_t = 10)]
    archive_capacity: usize,

    /// Crossover probability (pc)
    #[arg(long = "pc", default_value_t = 0.9)]
    crossover_rate: f64,

    /// Crossover distribution index (eta_c)
    #[arg(long = "eta-c", default_value_t = 20.0)]
    crossover_index: f64,

    /// Per-variable mutation probability (pm); defaults to 1/n
    #[arg(long = "pm")]
    mutation_rate: Option<f64>,

    /// Mutation distribution index (eta_m)
    #[arg(long = "eta-m", default_value_t = 20.0)]
    mutation_index: f64,

    /// Pool searched for the guiding parent in directed mating:
    /// neighborhood-and-archive or archive-only
    #[arg(
        long,
        value_name = "POOL",
        default_value = "neighborhood-and-archive",
        value_parser = parse_dm_pool
    )]
    dm_pool: DmPool,

    /// How the hybrid splits offspring between directed and local mating:
    /// per-offspring or per-generation
    #[arg(
        long,
        value_name = "SPLIT",
        default_value = "per-offspring",
        value_parser = parse_hybrid_split
    )]
    hybrid_split: HybridSplit,
}

impl ParamArgs {
    fn config(&self, algorithm: Algorithm) -> RunConfig {
        RunConfig {
            algorithm,
            population: self.population,
            generations: self.generations,
            neighborhood: self.neighborhood,
            dm_rate: self.dm_rate,
            archive_capacity: self.archive_capacity,
            crossover_rate: self.crossover_rate,
            crossover_index: self.crossover_index,
            mutation_rate: self.mutation_rate,
            mutation_index: self.mutation_index,
            seed: 0, // replaced per run
            dm_pool: self.dm_pool,
            hybrid_split: self.hybrid_split,
        }
    }
}

/// Seed selection: either a count expanded from a master seed, or an
/// explicit list.
#[derive(Args)]
struct SeedArgs {
    /// Number of independent runs, with seeds derived from --master-seed
    #[arg(long, default_value_t = 1, conflicts_with = "seed_list")]
    seeds: usize,

    /// Explicit comma-separated run seeds, e.g. --seed-list 3,7,11
    #[arg(long, value_name = "SEEDS", value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,

    /// Master seed expanded into per-run seeds when --seed-list is absent
    #[arg(long, default_value_t = 2024, conflicts_with = "seed_list")]
    master_seed: u64,
}

impl SeedArgs {
    fn resolve(&self) -> Result<Vec<u64>, String> {
        match &self.seed_list {
            Some(list) if list.is_empty() => Err("--seed-list must name at least one seed".into()),
            Some(list) => Ok(list.clone()),
            None if self.seeds == 0 => Err("--seeds must be at least 1".into()),
            None => Ok(derive_seeds(self.master_seed, self.seeds)),
        }
    }

    fn describe(&self, resolved: &[u64]) -> String {
        match &self.seed_list {
            Some(_) => format!(
                "seeds: {}",
                resolved
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            None => format!(
                "seeds: {} derived from master seed {}",
                resolved.len(),
                self.master_seed
            ),
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Run the full-size battery (slower; sizes match the acceptance tests)
    #[arg(long)]
    full: bool,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: cmoead::Error| e.to_string())
}

fn parse_dm_pool(s: &str) -> Result<DmPool, String> {
    match s {
        "neighborhood-and-archive" => Ok(DmPool::NeighborhoodAndArchive),
        "archive-only" => Ok(DmPool::ArchiveOnly),
        other => Err(format!(
            "unknown pool '{other}' (expected neighborhood-and-archive or archive-only)"
        )),
    }
}

fn parse_hybrid_split(s: &str) -> Result<HybridSplit, String> {
    match s {
        "per-offspring" => Ok(HybridSplit::PerOffspring),
        "per-generation" => Ok(HybridSplit::PerGeneration),
        other => Err(format!(
            "unknown split '{other}' (expected per-offspring or per-generation)"
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Problems => cmd_problems(),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<(), String> {
    let problem = args.target.resolve()?;
    let seeds = args.seeds.resolve()?;
    let config = args.params.config(args.algorithm);
    announce(&problem, &config, &args.seeds.describe(&seeds));

    let report = cmoead::run_experiment(&problem, &config, &seeds, args.out.as_deref())
        .map_err(|e| e.to_string())?;
    print_table(std::slice::from_ref(&report));
    if let Some(dir) = &args.out {
        println!("wrote CSV reports to {}", dir.display());
    }
    fail_on_failed_runs(std::slice::from_ref(&report))
}

fn cmd_compare(args: CompareArgs) -> Result<(), String> {
    let problem = args.target.resolve()?;
    let seeds = args.seeds.resolve()?;
    announce(
        &problem,
        &args.params.config(Algorithm::Cmoead),
        &args.seeds.describe(&seeds),
    );

    let mut reports = Vec::new();
    for algorithm in Algorithm::ALL {
        let config = args.params.config(algorithm);
        let report = cmoead::run_experiment(&problem, &config, &seeds, args.out.as_deref())
            .map_err(|e| e.to_string())?;
        reports.push(report);
    }

    verify_shared_initial_populations(&reports)?;
    print_table(&reports);
    if let Some(dir) = &args.out {
        println!("wrote CSV reports to {}", dir.display());
    }
    fail_on_failed_runs(&reports)
}

/// Prints the problem and parameter header shared by `run` and `compare`.
fn announce(problem: &Problem, config: &RunConfig, seed_description: &str) {
    println!(
        "problem {}: {} variables, {} objectives, {} constraints",
        problem.name(),
        problem.dimensions(),
        problem.objectives(),
        problem.constraints()
    );
    println!(
        "N = {}, G = {}, T = {}, r = {}, alpha = {}, pc = {}, eta_c = {}, pm = {}, eta_m = {}",
        config.population,
        config.generations,
        config.neighborhood,
        config.dm_rate,
        config.archive_capacity,
        config.crossover_rate,
        config.crossover_index,
        config.resolved_mutation_rate(problem.dimensions()),
        config.mutation_index
    );
    println!("{seed_description}");
}

/// One row per algorithm: final-generation aggregates across seeds.
fn print_table(reports: &[ExperimentReport]) {
    println!(
        "{:<14} {:>5} {:>7} {:>18} {:>18} {:>14}",
        "algorithm", "runs", "failed", "final mean hv", "final std hv", "mean feasible"
    );
    for report in reports {
        let final_mean = report.mean_hv.last().copied().unwrap_or(f64::NAN);
        let final_std = report.std_hv.last().copied().unwrap_or(f64::NAN);
        let feasible = mean(
            report
                .histories
                .iter()
                .filter_map(|(_, h)| h.feasible_count.last().map(|&c| c as f64)),
        );
        println!(
            "{:<14} {:>5} {:>7} {:>18.10} {:>18.10} {:>14.1}",
            report.algorithm.as_str(),
            report.histories.len(),
            report.failures.len(),
            final_mean,
            final_std,
            feasible
        );
        if report.degenerate_std {
            println!("  note: std needs at least two successful runs and is reported as 0");
        }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for value in values {
        sum += value;
        count += 1;
    }
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Comparisons are only meaningful when every algorithm saw the same starting
/// population per seed; the per-run digests make that checkable.
fn verify_shared_initial_populations(reports: &[ExperimentReport]) -> Result<(), String> {
    let mut digest_by_seed: HashMap<u64, u64> = HashMap::new();
    for report in reports {
        for (seed, history) in &report.histories {
            if let Some(previous) = digest_by_seed.insert(*seed, history.initial_population_digest)
            {
                if previous != history.initial_population_digest {
                    return Err(format!(
                        "seed {seed}: initial populations differ across algorithms, \
                         so the comparison would not share starting points"
                    ));
                }
            }
        }
    }
    println!("shared seeds verified: identical initial population per seed across algorithms");
    Ok(())
}

fn fail_on_failed_runs(reports: &[ExperimentReport]) -> Result<(), String> {
    let mut failed = 0usize;
    let mut total = 0usize;
    for report in reports {
        total += report.histories.len() + report.failures.len();
        failed += report.failures.len();
        for (seed, message) in &report.failures {
            eprintln!("{} seed {seed} failed: {message}", report.algorithm);
        }
    }
    if failed > 0 {
        Err(format!("{failed} of {total} runs failed"))
    } else {
        Ok(())
    }
}

fn cmd_problems() -> Result<(), String> {
    let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");

    println!("built-in problems (select with --problem NAME):");
    println!();
    for problem in problems::catalogue() {
        println!(
            "  {:<7} {} variables, {} objectives, {} constraints",
            problem.name(),
            problem.dimensions(),
            problem.objectives(),
            problem.constraints()
        );
        println!("          lower bounds: {}", join(problem.lower()));
        println!("          upper bounds: {}", join(problem.upper()));
        println!("          hv reference: {}", join(problem.hv_reference()));
        println!();
    }

    println!("external problems (select with --external-spec PATH):");
    println!();
    println!("  PATH names a key = value file describing the task and the evaluator");
    println!("  command. Per evaluation the command receives the design variables as");
    println!("  one whitespace-separated line on stdin and must print one line of m");
    println!("  objective values and, when p > 0, one line of p constraint values");
    println!("  (h <= 0 means satisfied) to stdout, then exit with status 0.");
    println!();
    println!("  Template for the six-variable hybrid rocket design task (the");
    println!("  simulator itself is not bundled and must be supplied as `command`):");
    println!();
    let metadata = problems::hre_metadata();
    for line in metadata
        .problem_spec("python3 simulate_rocket.py", 60.0)
        .lines()
    {
        println!("    {line}");
    }
    println!();
    println!("  variables:");
    for (name, unit, lower, upper) in metadata.variables {
        println!("    {name} [{unit}] in [{lower}, {upper}]");
    }
    println!("  objectives: {}", metadata.objectives.join(", "));
    println!("  constraints: {}", metadata.constraints.join(", "));
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), String> {
    let results = selftest::standard_battery(!args.full);
    let mut failed = 0usize;
    for result in &results {
        let status = if result.passed { "ok" } else { "FAILED" };
        println!("{}: {status} - {}", result.name, result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        Err(format!("{failed} of {} checks failed", results.len()))
    } else {
        println!("all {} checks passed", results.len());
        Ok(())
    }
}
