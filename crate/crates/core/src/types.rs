//! Domain types shared by every module: design vectors, evaluations,
//! individuals, subproblems, and run configuration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::{Error, Result};

/// A point in decision space. Length and bounds are validated by the owning
/// [`Problem`] before evaluation, not by the vector itself.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector(Vec<f64>);

impl DesignVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for DesignVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Objectives plus constraint results for one evaluated design.
///
/// Constraint values use the `h_k(x) <= 0` convention: non-positive means
/// satisfied. Violations are clamped at zero, so `violation_sum == 0.0`
/// exactly when every constraint is satisfied (boundary values count as
/// feasible).
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    objectives: Vec<f64>,
    constraint_values: Vec<f64>,
    violations: Vec<f64>,
    violation_sum: f64,
}

impl Evaluation {
    /// Builds an evaluation, deriving violations from raw constraint values.
    pub fn new(objectives: Vec<f64>, constraint_values: Vec<f64>) -> Self {
        assert!(!objectives.is_empty(), "evaluation needs >= 1 objective");
        let violations: Vec<f64> = constraint_values.iter().map(|&h| h.max(0.0)).collect();
        let violation_sum = violations.iter().sum();
        Self {
            objectives,
            constraint_values,
            violations,
            violation_sum,
        }
    }

    pub fn objectives(&self) -> &[f64] {
        &self.objectives
    }

    pub fn constraint_values(&self) -> &[f64] {
        &self.constraint_values
    }

    pub fn violations(&self) -> &[f64] {
        &self.violations
    }

    /// Total constraint violation (the feasibility measure).
    pub fn violation_sum(&self) -> f64 {
        self.violation_sum
    }

    pub fn is_feasible(&self) -> bool {
        self.violation_sum == 0.0
    }
}

/// A design vector together with its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: DesignVector,
    pub eval: Evaluation,
}

impl Individual {
    pub fn new(x: DesignVector, eval: Evaluation) -> Self {
        Self { x, eval }
    }

    pub fn objectives(&self) -> &[f64] {
        self.eval.objectives()
    }

    pub fn is_feasible(&self) -> bool {
        self.eval.is_feasible()
    }

    pub fn violation_sum(&self) -> f64 {
        self.eval.violation_sum()
    }
}

/// A weight vector on the unit simplex (non-negative, sums to one).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates simplex membership to absolute tolerance 1e-12.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Config("weight vector must be non-empty".into()));
        }
        if components.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::Config(format!(
                "weight vector has negative or non-finite component: {components:?}"
            )));
        }
        let sum: f64 = components.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "weight vector components sum to {sum}, expected 1"
            )));
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The running componentwise minimum of all observed objective vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint(Vec<f64>);

impl ReferencePoint {
    /// Sentinel used before any evaluation has been observed.
    pub fn at_infinity(m: usize) -> Self {
        Self(vec![f64::INFINITY; m])
    }

    pub fn from_components(z: Vec<f64>) -> Self {
        Self(z)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One scalarizing subproblem: weight, neighborhood, current incumbent, and
/// the bounded archive of useful infeasible individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    pub index: usize,
    pub weight: WeightVector,
    /// Indices of the nearest subproblems (always contains `index`).
    pub neighborhood: Vec<usize>,
    pub incumbent: Individual,
    /// Infeasible individuals kept for directed mating, oldest first.
    pub archive: Vec<Individual>,
}

impl Subproblem {
    pub fn new(
        index: usize,
        weight: WeightVector,
        neighborhood: Vec<usize>,
        incumbent: Individual,
    ) -> Self {
        Self {
            index,
            weight,
            neighborhood,
            incumbent,
            archive: Vec::new(),
        }
    }
}

type Evaluator = dyn Fn(&[f64]) -> Result<(Vec<f64>, Vec<f64>)> + Send + Sync;

/// An optimization problem: box bounds, objective/constraint dimensions, an
/// evaluator, and the reference point used for hypervolume reporting.
///
/// Evaluators must be deterministic. Out-of-range design vectors are rejected
/// here and never reach the evaluator.
#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objectives: usize,
    constraints: usize,
    hv_reference: Vec<f64>,
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.dimensions())
            .field("m", &self.objectives)
            .field("p", &self.constraints)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("hv_reference", &self.hv_reference)
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objectives: usize,
        constraints: usize,
        hv_reference: Vec<f64>,
        evaluator: Arc<Evaluator>,
    ) -> Result<Self> {
        let name = name.into();
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "problem {name}: bounds arrays must be non-empty and equal length"
            )));
        }
        // `partial_cmp` keeps NaN bounds from slipping through.
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| l.partial_cmp(u) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Config(format!(
                "problem {name}: every lower bound must be strictly below its upper bound"
            )));
        }
        if objectives == 0 {
            return Err(Error::Config(format!(
                "problem {name}: needs at least one objective"
            )));
        }
        if hv_reference.len() != objectives {
            return Err(Error::Config(format!(
                "problem {name}: hypervolume reference has length {}, expected {objectives}",
                hv_reference.len()
            )));
        }
        Ok(Self {
            name,
            lower,
            upper,
            objectives,
            constraints,
            hv_reference,
            evaluator,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of decision variables (n).
    pub fn dimensions(&self) -> usize {
        self.lower.len()
    }

    /// Number of objectives (m).
    pub fn objectives(&self) -> usize {
        self.objectives
    }

    /// Number of constraints (p).
    pub fn constraints(&self) -> usize {
        self.constraints
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn hv_reference(&self) -> &[f64] {
        &self.hv_reference
    }

    /// Evaluates a design vector after checking dimension and bounds.
    pub fn evaluate(&self, x: &DesignVector) -> Result<Evaluation> {
        let v = x.values();
        if v.len() != self.dimensions() {
            return Err(Error::Design(format!(
                "problem {} expects {} variables, got {}",
                self.name,
                self.dimensions(),
                v.len()
            )));
        }
        for (k, &value) in v.iter().enumerate() {
            if !(self.lower[k] <= value && value <= self.upper[k]) {
                return Err(Error::Design(format!(
                    "variable {k} = {value} outside [{}, {}] for problem {}",
                    self.lower[k], self.upper[k], self.name
                )));
            }
        }
        let (objectives, constraint_values) = (self.evaluator)(v)?;
        if objectives.len() != self.objectives {
            return Err(Error::Evaluation {
                message: format!(
                    "evaluator returned {} objectives, expected {}",
                    objectives.len(),
                    self.objectives
                ),
                design: v.to_vec(),
            });
        }
        if constraint_values.len() != self.constraints {
            return Err(Error::Evaluation {
                message: format!(
                    "evaluator returned {} constraint values, expected {}",
                    constraint_values.len(),
                    self.constraints
                ),
                design: v.to_vec(),
            });
        }
        Ok(Evaluation::new(objectives, constraint_values))
    }
}

/// Which replacement/mating strategy a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Feasibility-first neighborhood replacement, neighborhood mating.
    Cmoead,
    /// Directed mating plus archives of useful infeasible individuals.
    CmoeadDma,
    /// Hybrid of directed mating and feasible-only local mating.
    CmoeadDmaLm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Cmoead,
        Algorithm::CmoeadDma,
        Algorithm::CmoeadDmaLm,
    ];

    /// Stable identifier used in CLI arguments and output file names.
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Cmoead => "cmoead",
            Algorithm::CmoeadDma => "cmoead-dma",
            Algorithm::CmoeadDmaLm => "cmoead-dma-lm",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cmoead" => Ok(Algorithm::Cmoead),
            "cmoead-dma" => Ok(Algorithm::CmoeadDma),
            "cmoead-dma-lm" => Ok(Algorithm::CmoeadDmaLm),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected cmoead, cmoead-dma, or cmoead-dma-lm)"
            ))),
        }
    }
}

/// Candidate pool used by directed mating when picking the guiding parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DmPool {
    /// Neighborhood incumbents plus the subproblem's archive (default).
    #[default]
    NeighborhoodAndArchive,
    /// Only the subproblem's archive.
    ArchiveOnly,
}

/// How the hybrid strategy splits reproduction between directed and local
/// mating at rate `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HybridSplit {
    /// Independent Bernoulli draw per offspring (default).
    #[default]
    PerOffspring,
    /// A fixed share of subproblems, re-drawn each generation.
    PerGeneration,
}

/// Run parameters. Defaults match the reference experimental setup:
/// `population` 100, `generations` 1000, `neighborhood` 20, `dm_rate` 0.5,
/// `archive_capacity` 10, `crossover_rate` 0.9, `crossover_index` 20,
/// `mutation_rate` 1/n (when unset), `mutation_index` 20.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Number of subproblems / population size (N).
    pub population: usize,
    /// Number of offspring generations (G); evaluations total N*(G+1).
    pub generations: usize,
    /// Neighborhood size (T).
    pub neighborhood: usize,
    /// Probability of taking the directed-mating path in the hybrid (r).
    pub dm_rate: f64,
    /// Per-subproblem archive capacity (alpha).
    pub archive_capacity: usize,
    /// SBX crossover probability (pc).
    pub crossover_rate: f64,
    /// SBX distribution index (eta_c).
    pub crossover_index: f64,
    /// Per-variable mutation probability (pm); `None` resolves to 1/n.
    pub mutation_rate: Option<f64>,
    /// Polynomial-mutation distribution index (eta_m).
    pub mutation_index: f64,
    pub seed: u64,
    pub dm_pool: DmPool,
    pub hybrid_split: HybridSplit,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            population: 100,
            generations: 1000,
            neighborhood: 20,
            dm_rate: 0.5,
            archive_capacity: 10,
            crossover_rate: 0.9,
            crossover_index: 20.0,
            mutation_rate: None,
            mutation_index: 20.0,
            seed: 0,
            dm_pool: DmPool::default(),
            hybrid_split: HybridSplit::default(),
        }
    }

    /// The per-variable mutation probability for an `n`-variable problem.
    pub fn resolved_mutation_rate(&self, dimensions: usize) -> f64 {
        self.mutation_rate
            .unwrap_or_else(|| 1.0 / dimensions as f64)
    }

    /// Checks every parameter range against the given problem.
    pub fn validate(&self, problem: &Problem) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config(format!(
                "population must be >= 2, got {}",
                self.population
            )));
        }
        if self.neighborhood == 0 || self.neighborhood > self.population {
            return Err(Error::Config(format!(
                "neighborhood must be in 1..={}, got {}",
                self.population, self.neighborhood
            )));
        }
        if self.archive_capacity == 0 {
            return Err(Error::Config("archive capacity must be >= 1".into()));
        }
        for (label, value) in [
            ("dm_rate", self.dm_rate),
            ("crossover_rate", self.crossover_rate),
            (
                "mutation_rate",
                self.resolved_mutation_rate(problem.dimensions()),
            ),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Config(format!(
                    "{label} must lie in [0, 1], got {value}"
                )));
            }
        }
        for (label, value) in [
            ("crossover_index", self.crossover_index),
            ("mutation_index", self.mutation_index),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!(
                    "{label} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::new(Algorithm::Cmoead)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy_problem() -> Problem {
        Problem::new(
            "toy",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            2,
            1,
            vec![2.0, 2.0],
            Arc::new(|x: &[f64]| Ok((vec![x[0], x[1]], vec![x[0] + x[1] - 1.0]))),
        )
        .unwrap()
    }

    #[test]
    fn evaluation_clamps_violations_at_zero() {
        let e = Evaluation::new(vec![1.0, 2.0], vec![-1.0, -2.0]);
        assert_eq!(e.violations(), &[0.0, 0.0]);
        assert_eq!(e.violation_sum(), 0.0);
        assert!(e.is_feasible());
    }

    #[test]
    fn evaluation_sums_positive_violations() {
        let e = Evaluation::new(vec![0.0], vec![1.0, -1.0]);
        assert_eq!(e.violations(), &[1.0, 0.0]);
        assert_eq!(e.violation_sum(), 1.0);
        assert!(!e.is_feasible());

        let e = Evaluation::new(vec![0.0], vec![0.5, 0.25]);
        assert_eq!(e.violation_sum(), 0.75);
    }

    #[test]
    fn boundary_constraint_values_count_as_feasible() {
        let e = Evaluation::new(vec![0.0], vec![0.0, -3.0]);
        assert!(e.is_feasible());
        assert_eq!(e.violation_sum(), 0.0);
    }

    #[test]
    fn problem_rejects_wrong_dimension_and_out_of_bounds() {
        let p = toy_problem();
        assert!(matches!(
            p.evaluate(&DesignVector::new(vec![0.5])),
            Err(Error::Design(_))
        ));
        assert!(matches!(
            p.evaluate(&DesignVector::new(vec![0.5, 1.5])),
            Err(Error::Design(_))
        ));
        assert!(p.evaluate(&DesignVector::new(vec![0.5, 0.5])).is_ok());
    }

    #[test]
    fn problem_validates_bounds_at_construction() {
        let bad = Problem::new(
            "bad",
            vec![1.0],
            vec![1.0],
            1,
            0,
            vec![0.0],
            Arc::new(|_: &[f64]| Ok((vec![0.0], vec![]))),
        );
        assert!(matches!(bad, Err(Error::Config(_))));
    }

    #[test]
    fn problem_rejects_evaluator_arity_mismatch() {
        let p = Problem::new(
            "lying",
            vec![0.0],
            vec![1.0],
            2,
            2,
            vec![1.0, 1.0],
            Arc::new(|_: &[f64]| Ok((vec![0.0, 0.0], vec![0.0]))),
        )
        .unwrap();
        let err = p.evaluate(&DesignVector::new(vec![0.5])).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn weight_vector_enforces_simplex() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.6, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn run_config_defaults_match_reference_setup() {
        let c = RunConfig::new(Algorithm::CmoeadDmaLm);
        assert_eq!(c.population, 100);
        assert_eq!(c.generations, 1000);
        assert_eq!(c.neighborhood, 20);
        assert_eq!(c.dm_rate, 0.5);
        assert_eq!(c.archive_capacity, 10);
        assert_eq!(c.crossover_rate, 0.9);
        assert_eq!(c.crossover_index, 20.0);
        assert_eq!(c.mutation_index, 20.0);
        assert_eq!(c.resolved_mutation_rate(6), 1.0 / 6.0);
        assert_eq!(c.resolved_mutation_rate(2), 0.5);
    }

    #[test]
    fn run_config_validation_catches_bad_ranges() {
        let p = toy_problem();
        let mut c = RunConfig::new(Algorithm::Cmoead);
        c.neighborhood = 101;
        assert!(c.validate(&p).is_err());
        c = RunConfig::new(Algorithm::Cmoead);
        c.population = 1;
        assert!(c.validate(&p).is_err());
        c = RunConfig::new(Algorithm::Cmoead);
        c.dm_rate = 1.5;
        assert!(c.validate(&p).is_err());
        c = RunConfig::new(Algorithm::Cmoead);
        c.mutation_rate = Some(-0.1);
        assert!(c.validate(&p).is_err());
        assert!(RunConfig::new(Algorithm::Cmoead).validate(&p).is_ok());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.as_str().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("nsga2".parse::<Algorithm>().is_err());
    }

    proptest! {
        #[test]
        fn violation_sum_is_consistent(h in proptest::collection::vec(-10.0f64..10.0, 1..8)) {
            let e = Evaluation::new(vec![0.0], h.clone());
            let expected: f64 = h.iter().map(|&v| v.max(0.0)).sum();
            prop_assert_eq!(e.violation_sum(), expected);
            for (&v, &raw) in e.violations().iter().zip(&h) {
                prop_assert_eq!(v, raw.max(0.0));
            }
            let all_satisfied = h.iter().all(|&v| v <= 0.0);
            prop_assert_eq!(e.is_feasible(), all_satisfied);
        }
    }
}
