//! Decomposition-based constrained multi-objective optimization.
//!
//! This crate implements MOEA/D-style constrained optimizers that share one
//! machinery: a set of scalarizing subproblems with overlapping neighborhoods,
//! simulated binary crossover + polynomial mutation for variation, and
//! per-neighborhood replacement rules that decide how constraint violations
//! trade off against scalarized fitness. Three replacement/mating strategies
//! are provided:
//!
//! * `cmoead` — feasibility-first neighborhood replacement with standard
//!   neighborhood mating,
//! * `cmoead-dma` — directed mating steered by dominating (possibly
//!   infeasible) solutions, with bounded per-subproblem archives of useful
//!   infeasible individuals,
//! * `cmoead-dma-lm` — a hybrid that mixes directed mating with local mating
//!   restricted to feasible neighbors.
//!
//! Module map:
//!
//! * [`types`] — design vectors, evaluations, individuals, run configuration
//! * [`decomposition`] — weight vectors, neighborhoods, scalarizing functions
//! * [`dominance`] — objective dominance and constraint-violation dominance
//! * [`update`] — neighborhood replacement rules
//! * [`mating`] — parent selection (neighborhood, directed, local, hybrid)
//! * [`variation`] — SBX crossover and polynomial mutation
//! * [`problems`] — benchmark problems and external evaluator support
//! * [`metrics`] — non-dominated filtering, 2-D hypervolume, run aggregation
//! * [`harness`] — seeded runs, multi-seed experiments, CSV reports
//! * [`selftest`] — oracle battery backing the `validate` CLI subcommand

pub mod decomposition;
pub mod dominance;
pub mod harness;
pub mod mating;
pub mod metrics;
pub mod problems;
pub mod selftest;
pub mod types;
pub mod update;
pub mod variation;

pub use harness::{run, run_experiment, ExperimentReport, HvHistory, RunResult};
pub use types::{
    Algorithm, DesignVector, DmPool, Evaluation, HybridSplit, Individual, Problem, ReferencePoint,
    RunConfig, Subproblem, WeightVector,
};

/// Errors surfaced by configuration, evaluation, and reporting code paths.
///
/// Dimension mismatches between values that already passed construction-time
/// validation (e.g. comparing two evaluations of the same problem) are treated
/// as programmer errors and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration (population sizes, neighborhood sizes, rates…).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A design vector did not match the problem's dimension or bounds.
    #[error("design vector rejected: {0}")]
    Design(String),

    /// An external evaluator failed (exit status, timeout, malformed reply).
    #[error("evaluation of {design:?} failed: {message}")]
    Evaluation { message: String, design: Vec<f64> },

    /// A run aborted mid-flight; carries the generation for diagnosis.
    #[error("run aborted at generation {generation}: {source}")]
    Run {
        generation: usize,
        #[source]
        source: Box<Error>,
    },

    /// Hypervolume is only defined for two objectives here.
    #[error("unsupported number of objectives: expected 2, got {0}")]
    UnsupportedDimension(usize),

    /// Problem-specification files that cannot be parsed.
    #[error("problem spec {path}: {message}")]
    Spec { path: String, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
