//! Runtime verification battery.
//!
//! Each check re-derives expected behavior from first principles — Monte
//! Carlo integration for hypervolume, a quadratic scan for non-dominated
//! filtering, independently rewritten benchmark formulas, closed-form
//! variation identities — and compares the library against it, so a
//! transcription slip in the fast paths cannot hide behind a matching bug in
//! the tests. The CLI `validate` subcommand runs [`standard_battery`] in its
//! fast configuration; the acceptance test suite runs the checks at full
//! size.
//!
//! The module also hosts the exact one-sided Wilcoxon signed-rank test used
//! to compare paired hypervolume outcomes across algorithms.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::tchebycheff;
use crate::metrics::{hypervolume_2d, nondominated_indices};
use crate::problems;
use crate::types::{
    DesignVector, Evaluation, Individual, Problem, ReferencePoint, Subproblem, WeightVector,
};
use crate::update::{update_cmoead, update_dma, update_lm};
use crate::variation::{polynomial_mutation, sbx_crossover};

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// What was checked, plus the first failure when `passed` is false.
    pub detail: String,
}

impl CheckResult {
    fn from_failures(name: &'static str, summary: String, failures: Vec<String>) -> Self {
        match failures.first() {
            None => CheckResult {
                name,
                passed: true,
                detail: summary,
            },
            Some(first) => CheckResult {
                name,
                passed: false,
                detail: format!("{} failure(s), first: {first}", failures.len()),
            },
        }
    }
}

/// Runs every check at a standard size. `fast` trades sample counts for
/// latency (sub-second) and is what `validate` uses interactively.
pub fn standard_battery(fast: bool) -> Vec<CheckResult> {
    if fast {
        vec![
            check_hypervolume_monte_carlo(10, 100_000, 0xA5A5),
            check_nondominated_brute_force(150, 60, 0xB6B6),
            check_problem_transcriptions(200, 0xC7C7),
            check_variation_identities(20_000, 0xD8D8),
            check_replacement_branches(),
            check_archive_fuzz(2_000, 0xE9E9),
        ]
    } else {
        vec![
            check_hypervolume_monte_carlo(50, 1_000_000, 0xA5A5),
            check_nondominated_brute_force(1_000, 200, 0xB6B6),
            check_problem_transcriptions(1_000, 0xC7C7),
            check_variation_identities(100_000, 0xD8D8),
            check_replacement_branches(),
            check_archive_fuzz(10_000, 0xE9E9),
        ]
    }
}

// ---------------------------------------------------------------------------
// Hypervolume vs. Monte Carlo integration
// ---------------------------------------------------------------------------

/// Monte Carlo estimate of the 2-D hypervolume: samples uniformly in the
/// bounding box of the dominated region and tests domination with a sorted
/// prefix-minimum. Returns (estimate, standard error).
fn monte_carlo_hv(
    points: &[Vec<f64>],
    reference: &[f64],
    samples: usize,
    rng: &mut impl Rng,
) -> (f64, f64) {
    let mut clipped: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p[0] <= reference[0] && p[1] <= reference[1])
        .map(|p| (p[0], p[1]))
        .collect();
    if clipped.is_empty() {
        return (0.0, 0.0);
    }
    clipped.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let xs: Vec<f64> = clipped.iter().map(|p| p.0).collect();
    let mut prefix_min = Vec::with_capacity(clipped.len());
    let mut best = f64::INFINITY;
    for &(_, y) in &clipped {
        best = best.min(y);
        prefix_min.push(best);
    }

    // The dominated region lies inside [min f1, ref1] x [min f2, ref2].
    let (x0, y0) = (xs[0], *prefix_min.last().unwrap());
    let (width, height) = (reference[0] - x0, reference[1] - y0);
    let area = width * height;
    if area <= 0.0 {
        return (0.0, 0.0);
    }

    let mut hits = 0usize;
    for _ in 0..samples {
        let qx = x0 + rng.random::<f64>() * width;
        let qy = y0 + rng.random::<f64>() * height;
        // Dominated iff among the points with f1 <= qx the smallest f2 is <= qy.
        let idx = xs.partition_point(|&v| v <= qx);
        if idx > 0 && prefix_min[idx - 1] <= qy {
            hits += 1;
        }
    }
    let fraction = hits as f64 / samples as f64;
    let se = area * (fraction * (1.0 - fraction) / samples as f64).sqrt();
    (area * fraction, se)
}

/// Compares [`hypervolume_2d`] against Monte Carlo integration on random
/// point sets; a set passes when the difference stays within three standard
/// errors of the estimate.
pub fn check_hypervolume_monte_carlo(sets: usize, samples: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = [1.0, 1.0];
    let mut failures = Vec::new();
    for set in 0..sets {
        let count = rng.random_range(1..=10);
        let quantize = set % 3 == 0;
        let points: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                // Slightly beyond the reference on purpose: those points must
                // contribute nothing.
                let mut p = vec![rng.random::<f64>() * 1.3, rng.random::<f64>() * 1.3];
                if quantize {
                    for v in &mut p {
                        *v = (*v * 8.0).floor() / 8.0;
                    }
                }
                p
            })
            .collect();
        let exact = hypervolume_2d(&points, &reference).expect("2-D input");
        let (estimate, se) = monte_carlo_hv(&points, &reference, samples, &mut rng);
        let difference = (exact - estimate).abs();
        if difference > 3.0 * se + 1e-12 {
            failures.push(format!(
                "set {set}: exact {exact} vs estimate {estimate} (3 SE = {})",
                3.0 * se
            ));
        }
    }
    CheckResult::from_failures(
        "hypervolume-monte-carlo",
        format!("{sets} random point sets, {samples} samples each, within 3 SE"),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Non-dominated filter vs. quadratic scan
// ---------------------------------------------------------------------------

/// Definition-level reference filter: keep index i iff no point dominates
/// point i and no earlier point equals it. Quadratic on purpose.
fn brute_force_nondominated(points: &[Vec<f64>]) -> Vec<usize> {
    let dominates = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
    };
    let mut kept = Vec::new();
    'candidate: for i in 0..points.len() {
        for j in 0..points.len() {
            if j != i && dominates(&points[j], &points[i]) {
                continue 'candidate;
            }
        }
        for j in 0..i {
            if points[j] == points[i] {
                continue 'candidate;
            }
        }
        kept.push(i);
    }
    kept
}

/// Compares [`nondominated_indices`] (both its 2-D sweep and its general
/// path) against the quadratic reference on random sets rich in ties and
/// duplicates. Exact index-list equality is required.
pub fn check_nondominated_brute_force(sets: usize, max_points: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for set in 0..sets {
        let dimensions = if set % 2 == 0 { 2 } else { 3 };
        let count = rng.random_range(1..=max_points);
        let from_grid = set % 3 == 0;
        let points: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                (0..dimensions)
                    .map(|_| {
                        if from_grid {
                            rng.random_range(0..6) as f64
                        } else {
                            rng.random::<f64>()
                        }
                    })
                    .collect()
            })
            .collect();
        let fast = nondominated_indices(&points);
        let slow = brute_force_nondominated(&points);
        if fast != slow {
            failures.push(format!(
                "set {set} ({count} points, {dimensions}-D): {fast:?} != {slow:?}"
            ));
        }
    }
    CheckResult::from_failures(
        "nondominated-brute-force",
        format!("{sets} random 2-D/3-D sets vs a quadratic reference filter"),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Problem transcriptions vs. independent re-derivations
// ---------------------------------------------------------------------------

type OracleFn = fn(&[f64]) -> (Vec<f64>, Vec<f64>);

/// Independently rewritten formulas (different factoring and evaluation
/// order than the implementations in [`problems`]).
fn osy_oracle(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let sq = |v: f64| v * v;
    let f1 =
        -25.0 * sq(x[0] - 2.0) - sq(x[1] - 2.0) - sq(x[2] - 1.0) - sq(x[3] - 4.0) - sq(x[4] - 1.0);
    let f2: f64 = x.iter().map(|&v| v * v).sum();
    let h = vec![
        -(x[0] + x[1] - 2.0),
        -(6.0 - x[0] - x[1]),
        -(2.0 + x[0] - x[1]),
        -(2.0 - x[0] + 3.0 * x[1]),
        -(4.0 - sq(x[2] - 3.0) - x[3]),
        -(sq(x[4] - 3.0) + x[5] - 4.0),
    ];
    (vec![f1, f2], h)
}

fn tnk_oracle(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (x[0], x[1]);
    let angle = 16.0 * f64::atan2(a, b);
    let h1 = -(a * a + b * b - 1.0 - 0.1 * angle.cos());
    let h2 = -(0.5 - (a - 0.5) * (a - 0.5) - (b - 0.5) * (b - 0.5));
    (vec![a, b], vec![h1, h2])
}

fn mcdtlz_oracle(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let theta = 0.5 * std::f64::consts::PI * x[0];
    let g = x[1..]
        .iter()
        .fold(0.0, |acc, &v| acc + (v - 0.5) * (v - 0.5));
    let radius = 1.0 + g;
    let f = vec![radius * theta.cos(), radius * theta.sin()];
    let h = vec![1.1 - f[0] - 0.5 * f[1], 1.1 - 0.5 * f[0] - f[1]];
    (f, h)
}

fn welded_beam_oracle(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    let sqrt2 = std::f64::consts::SQRT_2;
    let tau1 = 6000.0 / (sqrt2 * h * l);
    let half_span = (h + t) / 2.0;
    let r = (l * l / 4.0 + half_span * half_span).sqrt();
    // Polar moment written as sqrt(2) h l (l^2/6 + (h+t)^2/2), an equivalent
    // factoring of the usual doubled form.
    let j = sqrt2 * h * l * (l * l / 6.0 + 2.0 * half_span * half_span);
    let tau2 = 6000.0 * (14.0 + l / 2.0) * r / j;
    let tau = (tau1 * tau1 + tau1 * tau2 * l / r + tau2 * tau2).sqrt();
    let sigma = 504_000.0 / (t * t * b);
    let buckling = 64746.022 * (1.0 - 0.0282346 * t) * t * b * b * b;
    let deflection = 2.1952 / (t * t * t * b);
    let cost = 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
    (
        vec![deflection, cost],
        vec![tau - 13600.0, sigma - 30000.0, h - b, 6000.0 - buckling],
    )
}

/// Evaluates each built-in problem on random in-bounds designs and compares
/// every objective and constraint value against the independent oracle to a
/// relative tolerance of 1e-10 (absolute below magnitude 1).
pub fn check_problem_transcriptions(points_per_problem: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracles: [(Problem, OracleFn); 4] = [
        (problems::osy(), osy_oracle),
        (problems::tnk(), tnk_oracle),
        (problems::mcdtlz(), mcdtlz_oracle),
        (problems::welded_beam(), welded_beam_oracle),
    ];
    let mut failures = Vec::new();
    for (problem, oracle) in &oracles {
        for point in 0..points_per_problem {
            let x: Vec<f64> = problem
                .lower()
                .iter()
                .zip(problem.upper())
                .map(|(&lb, &ub)| rng.random_range(lb..ub))
                .collect();
            let actual = problem
                .evaluate(&DesignVector::new(x.clone()))
                .expect("in-bounds evaluation");
            let (expected_f, expected_h) = oracle(&x);
            let mut compare = |label: &str, got: &[f64], want: &[f64]| {
                for (k, (&g, &w)) in got.iter().zip(want).enumerate() {
                    if (g - w).abs() > 1e-10 * w.abs().max(1.0) {
                        failures.push(format!(
                            "{} point {point} {label}[{k}]: {g} vs oracle {w} at x = {x:?}",
                            problem.name()
                        ));
                    }
                }
            };
            compare("objective", actual.objectives(), &expected_f);
            compare("constraint", actual.constraint_values(), &expected_h);
        }
    }
    CheckResult::from_failures(
        "problem-transcriptions",
        format!(
            "4 problems x {points_per_problem} random designs vs independently rewritten formulas"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Variation operator identities
// ---------------------------------------------------------------------------

/// Checks closed-form identities of the variation operators: with bounds too
/// wide to clamp, SBX preserves the per-variable parent sum to 1e-12; a
/// zero-probability mutation returns its input bit for bit.
pub fn check_variation_identities(matings: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dimensions = 4;
    let wide_lower = vec![-1e9; dimensions];
    let wide_upper = vec![1e9; dimensions];
    let mut failures = Vec::new();
    for mating in 0..matings {
        let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..dimensions)
                .map(|_| rng.random::<f64>() * 10.0 - 5.0)
                .collect()
        };
        let p1 = DesignVector::new(sample(&mut rng));
        let p2 = DesignVector::new(sample(&mut rng));
        let (c1, c2) = sbx_crossover(
            &p1,
            &p2,
            0.9,
            rng.random_range(2.0..30.0),
            &wide_lower,
            &wide_upper,
            &mut rng,
        );
        for k in 0..dimensions {
            let parent_sum = p1.values()[k] + p2.values()[k];
            let child_sum = c1.values()[k] + c2.values()[k];
            if (parent_sum - child_sum).abs() > 1e-12 * parent_sum.abs().max(1.0) {
                failures.push(format!(
                    "mating {mating} variable {k}: children sum to {child_sum}, parents to {parent_sum}"
                ));
            }
        }

        let untouched = polynomial_mutation(&p1, 0.0, 20.0, &wide_lower, &wide_upper, &mut rng);
        if untouched != p1 {
            failures.push(format!(
                "mating {mating}: zero-rate mutation altered the vector"
            ));
        }
    }
    CheckResult::from_failures(
        "variation-identities",
        format!("{matings} matings: SBX parent-sum preservation and zero-rate mutation identity"),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Replacement-rule branch fixtures
// ---------------------------------------------------------------------------

fn fixture_individual(objectives: [f64; 2], h: f64) -> Individual {
    Individual::new(
        DesignVector::new(vec![0.0]),
        Evaluation::new(objectives.to_vec(), vec![h]),
    )
}

fn fixture_population(incumbents: Vec<Individual>) -> Vec<Subproblem> {
    let all: Vec<usize> = (0..incumbents.len()).collect();
    incumbents
        .into_iter()
        .enumerate()
        .map(|(i, incumbent)| {
            Subproblem::new(
                i,
                WeightVector::new(vec![0.5, 0.5]).unwrap(),
                all.clone(),
                incumbent,
            )
        })
        .collect()
}

/// Exercises every decision branch of the three replacement rules on
/// hand-built one-neighbor fixtures.
pub fn check_replacement_branches() -> CheckResult {
    let z = ReferencePoint::from_components(vec![0.0, 0.0]);
    let mut failures = Vec::new();
    let mut expect = |label: &str, condition: bool| {
        if !condition {
            failures.push(label.to_string());
        }
    };

    // Feasibility-first rule (shared by the baseline and local mating).
    {
        let mut subs = fixture_population(vec![fixture_individual([2.0, 2.0], -1.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([1.0, 1.0], 0.0), 0, &z);
        expect(
            "feasible offspring with better fitness replaces",
            replaced == 1,
        );

        let mut subs = fixture_population(vec![fixture_individual([2.0, 2.0], -1.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([3.0, 3.0], -1.0), 0, &z);
        expect("feasible offspring with worse fitness keeps", replaced == 0);

        let mut subs = fixture_population(vec![fixture_individual([1.0, 1.0], 2.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([5.0, 5.0], -1.0), 0, &z);
        expect(
            "feasible offspring displaces infeasible incumbent",
            replaced == 1,
        );

        let mut subs = fixture_population(vec![fixture_individual([5.0, 5.0], -1.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([1.0, 1.0], 2.0), 0, &z);
        expect(
            "infeasible offspring never displaces feasible",
            replaced == 0,
        );

        let mut subs = fixture_population(vec![fixture_individual([1.0, 1.0], 3.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([5.0, 5.0], 1.0), 0, &z);
        expect("smaller violation sum wins among infeasible", replaced == 1);

        let mut subs = fixture_population(vec![fixture_individual([5.0, 5.0], 1.0)]);
        let replaced = update_cmoead(&mut subs, &fixture_individual([1.0, 1.0], 1.0), 0, &z);
        expect("equal violation sum keeps the incumbent", replaced == 0);
    }

    // Directed-mating rule: archives and violation-vector dominance.
    {
        let mut subs = fixture_population(vec![fixture_individual([4.0, 4.0], -1.0)]);
        update_dma(&mut subs, &fixture_individual([1.0, 1.0], 2.0), 0, &z, 2);
        expect(
            "better-fitness infeasible offspring is archived",
            subs[0].archive.len() == 1 && subs[0].incumbent.objectives() == [4.0, 4.0],
        );

        let mut subs = fixture_population(vec![fixture_individual([4.0, 4.0], -1.0)]);
        update_dma(&mut subs, &fixture_individual([5.0, 5.0], 2.0), 0, &z, 2);
        expect(
            "worse-fitness infeasible offspring is dropped",
            subs[0].archive.is_empty(),
        );

        let mut subs = fixture_population(vec![fixture_individual([9.0, 9.0], -1.0)]);
        for f in [3.0, 2.0, 1.0] {
            update_dma(&mut subs, &fixture_individual([f, f], 1.0), 0, &z, 2);
        }
        let kept: Vec<f64> = subs[0].archive.iter().map(|m| m.objectives()[0]).collect();
        expect(
            "archive eviction removes the worst-fitness member",
            kept == vec![2.0, 1.0],
        );

        // Violation vectors (0.5, 0.5) vs (1.0, 1.0): offspring cv-dominates.
        let dominated = Individual::new(
            DesignVector::new(vec![0.0]),
            Evaluation::new(vec![5.0, 5.0], vec![1.0, 1.0]),
        );
        let dominating = Individual::new(
            DesignVector::new(vec![0.0]),
            Evaluation::new(vec![9.0, 9.0], vec![0.5, 0.5]),
        );
        let mut subs = fixture_population(vec![dominated.clone()]);
        let replaced = update_dma(&mut subs, &dominating, 0, &z, 2);
        expect(
            "violation-dominating offspring replaces despite worse fitness",
            replaced == 1,
        );
        let mut subs = fixture_population(vec![dominating.clone()]);
        let replaced = update_dma(&mut subs, &dominated, 0, &z, 2);
        expect("violation-dominated offspring keeps", replaced == 0);

        // Mutually non-dominated violations (1, 0) vs (0, 1): fitness decides.
        let left = Individual::new(
            DesignVector::new(vec![0.0]),
            Evaluation::new(vec![2.0, 2.0], vec![1.0, 0.0]),
        );
        let right = Individual::new(
            DesignVector::new(vec![0.0]),
            Evaluation::new(vec![1.0, 1.0], vec![0.0, 1.0]),
        );
        let mut subs = fixture_population(vec![left.clone()]);
        let replaced = update_dma(&mut subs, &right, 0, &z, 2);
        expect(
            "non-dominated violations: better fitness replaces",
            replaced == 1,
        );
        let mut subs = fixture_population(vec![right]);
        let replaced = update_dma(&mut subs, &left, 0, &z, 2);
        expect(
            "non-dominated violations: worse fitness keeps",
            replaced == 0,
        );
    }

    // Local mating: only feasible incumbents participate.
    {
        let mut subs = fixture_population(vec![
            fixture_individual([2.0, 2.0], -1.0),
            fixture_individual([2.0, 2.0], 1.0),
            fixture_individual([3.0, 3.0], 0.0),
        ]);
        let replaced = update_lm(&mut subs, &fixture_individual([1.0, 1.0], -1.0), 0, &z);
        expect(
            "local mating replaces only feasible neighbors",
            replaced == 2
                && subs[1].incumbent.objectives() == [2.0, 2.0]
                && subs[1].incumbent.violation_sum() == 1.0,
        );
    }

    CheckResult::from_failures(
        "replacement-branches",
        "hand-built fixtures for every replacement decision branch".to_string(),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Archive invariants under random traffic
// ---------------------------------------------------------------------------

/// Pushes a random offspring stream through the directed-mating update and
/// asserts the archive invariants after every step: capacity respected, only
/// infeasible members stored, feasible incumbents never displaced by
/// infeasible offspring, and feasible-to-feasible replacements only ever
/// improve the scalarized fitness.
pub fn check_archive_fuzz(offspring_count: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let capacity = 3;
    let weights = crate::decomposition::generate_weights(6, 2).unwrap();
    let neighborhoods = crate::decomposition::build_neighborhoods(&weights, 3).unwrap();
    let z = ReferencePoint::from_components(vec![0.0, 0.0]);
    let mut subproblems: Vec<Subproblem> = weights
        .into_iter()
        .zip(neighborhoods)
        .enumerate()
        .map(|(i, (weight, hood))| {
            Subproblem::new(i, weight, hood, fixture_individual([2.0, 2.0], 1.0))
        })
        .collect();

    let mut failures = Vec::new();
    for step in 0..offspring_count {
        let offspring = Individual::new(
            DesignVector::new(vec![step as f64]),
            Evaluation::new(
                vec![rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0],
                vec![rng.random::<f64>() * 2.0 - 1.0],
            ),
        );
        let origin = rng.random_range(0..subproblems.len());
        let before: Vec<(bool, f64)> = subproblems
            .iter()
            .map(|s| {
                (
                    s.incumbent.is_feasible(),
                    tchebycheff(s.incumbent.objectives(), &s.weight, &z),
                )
            })
            .collect();
        update_dma(&mut subproblems, &offspring, origin, &z, capacity);

        for (i, sub) in subproblems.iter().enumerate() {
            if sub.archive.len() > capacity {
                failures.push(format!(
                    "step {step}: subproblem {i} archive grew to {}",
                    sub.archive.len()
                ));
            }
            if sub.archive.iter().any(|m| m.is_feasible()) {
                failures.push(format!("step {step}: feasible individual in archive {i}"));
            }
            let (was_feasible, old_fitness) = before[i];
            if was_feasible && !sub.incumbent.is_feasible() {
                failures.push(format!(
                    "step {step}: feasible incumbent {i} displaced by an infeasible one"
                ));
            }
            if was_feasible && sub.incumbent.is_feasible() {
                let new_fitness = tchebycheff(sub.incumbent.objectives(), &sub.weight, &z);
                if new_fitness > old_fitness {
                    failures.push(format!(
                        "step {step}: incumbent {i} fitness worsened {old_fitness} -> {new_fitness}"
                    ));
                }
            }
        }
        if failures.len() > 3 {
            break;
        }
    }
    CheckResult::from_failures(
        "archive-fuzz",
        format!("{offspring_count} random offspring: capacity, feasibility, and monotonicity invariants"),
        failures,
    )
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank test
// ---------------------------------------------------------------------------

/// Standard normal CDF via a rational erf approximation (absolute error
/// below 1.5e-7, far tighter than any decision threshold used here).
pub fn standard_normal_cdf(zscore: f64) -> f64 {
    let x = zscore / std::f64::consts::SQRT_2;
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.327_591_1 * x);
    let poly = t
        * (0.254_829_592
            + t * (-0.284_496_736
                + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    let erf = sign * (1.0 - poly * (-x * x).exp());
    0.5 * (1.0 + erf)
}

/// One-sided Wilcoxon signed-rank test of paired samples, alternative
/// "first tends to exceed second". Returns `(w_plus, p_value)`.
///
/// Zero differences are dropped; tied magnitudes get average ranks. The
/// p-value is exact — the signed-rank distribution is enumerated by dynamic
/// programming over doubled ranks (which are integers even with average
/// ranks) — for up to 30 informative pairs, and a tie-corrected,
/// continuity-corrected normal approximation beyond that.
pub fn wilcoxon_signed_rank_greater(first: &[f64], second: &[f64]) -> (f64, f64) {
    assert_eq!(
        first.len(),
        second.len(),
        "paired test needs equally many observations"
    );
    let differences: Vec<f64> = first
        .iter()
        .zip(second)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    let n = differences.len();
    if n == 0 {
        return (0.0, 1.0);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        differences[i]
            .abs()
            .partial_cmp(&differences[j].abs())
            .expect("finite differences")
    });
    let mut ranks = vec![0.0; n];
    let mut tie_sizes = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && differences[order[j + 1]].abs() == differences[order[i]].abs() {
            j += 1;
        }
        let average = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[order[k]] = average;
        }
        tie_sizes.push(j - i + 1);
        i = j + 1;
    }
    let w_plus: f64 = (0..n)
        .filter(|&k| differences[k] > 0.0)
        .map(|k| ranks[k])
        .sum();

    let p = if n <= 30 {
        // Exact tail: count sign assignments with a doubled rank sum of at
        // least 2 * w_plus.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let total: usize = doubled.iter().sum();
        let mut counts = vec![0.0f64; total + 1];
        counts[0] = 1.0;
        let mut reachable = 0;
        for &r in &doubled {
            reachable += r;
            for s in (r..=reachable).rev() {
                counts[s] += counts[s - r];
            }
        }
        let threshold = (2.0 * w_plus).round() as usize;
        let tail: f64 = counts[threshold..].iter().sum();
        tail / (n as f64).exp2()
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let tie_correction: f64 = tie_sizes
            .iter()
            .map(|&t| {
                let t = t as f64;
                (t * t * t - t) / 48.0
            })
            .sum();
        let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_correction;
        let zscore = (w_plus - mean - 0.5) / variance.sqrt();
        1.0 - standard_normal_cdf(zscore)
    };
    (w_plus, p.clamp(0.0, 1.0))
}
