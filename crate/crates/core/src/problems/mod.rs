//! Benchmark problem catalogue.
//!
//! Every constraint is expressed as `h_k(x) <= 0` (non-positive means
//! satisfied); formulations from the literature using `g_k(x) >= 0` are
//! negated during transcription. All evaluators are deterministic closed
//! forms.

pub mod external;

use std::sync::Arc;

use crate::types::Problem;
use crate::{Error, Result};

pub use external::{external_problem, load_spec, ExternalSpec};

/// Osyczka–Kundu six-variable design problem: two objectives, six linear and
/// quadratic constraints.
pub fn osy() -> Problem {
    Problem::new(
        "osy",
        vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        vec![10.0, 10.0, 5.0, 6.0, 5.0, 10.0],
        2,
        6,
        vec![-30.0, 80.0],
        Arc::new(|x: &[f64]| {
            let (x1, x2, x3, x4, x5, x6) = (x[0], x[1], x[2], x[3], x[4], x[5]);
            let f1 = -(25.0 * (x1 - 2.0).powi(2)
                + (x2 - 2.0).powi(2)
                + (x3 - 1.0).powi(2)
                + (x4 - 4.0).powi(2)
                + (x5 - 1.0).powi(2));
            let f2 = x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 + x5 * x5 + x6 * x6;
            let h = vec![
                2.0 - x1 - x2,
                x1 + x2 - 6.0,
                x2 - x1 - 2.0,
                x1 - 3.0 * x2 - 2.0,
                (x3 - 3.0).powi(2) + x4 - 4.0,
                4.0 - (x5 - 3.0).powi(2) - x6,
            ];
            Ok((vec![f1, f2], h))
        }),
    )
    .expect("static problem definition is valid")
}

/// Tanaka's two-variable problem: the identity objectives constrained to a
/// wavy ring minus a centered disk.
///
/// The angular term uses `atan2(x1, x2)`, the continuous extension of
/// `atan(x1/x2)` to the closed first quadrant (defined as 0 at the origin).
pub fn tnk() -> Problem {
    use std::f64::consts::PI;
    Problem::new(
        "tnk",
        vec![0.0, 0.0],
        vec![PI, PI],
        2,
        2,
        vec![1.2, 1.2],
        Arc::new(|x: &[f64]| {
            let (x1, x2) = (x[0], x[1]);
            let h1 = 1.0 + 0.1 * (16.0 * x1.atan2(x2)).cos() - x1 * x1 - x2 * x2;
            let h2 = (x1 - 0.5).powi(2) + (x2 - 0.5).powi(2) - 0.5;
            Ok((vec![x1, x2], vec![h1, h2]))
        }),
    )
    .expect("static problem definition is valid")
}

/// Number of decision variables in the bi-objective constrained DTLZ variant.
const MCDTLZ_DIMENSIONS: usize = 11;

/// Bi-objective constrained DTLZ variant with one constraint per objective.
///
/// The objectives trace a quarter circle of radius `1 + g(x)` where `g` is
/// the squared distance of the tail variables from 0.5. Two half-plane
/// constraints (`f1 + 0.5 f2 >= 1.1` and `0.5 f1 + f2 >= 1.1`) make the whole
/// unconstrained front infeasible, so the constrained Pareto front lies
/// exactly on the constraint boundary and dominating infeasible solutions
/// exist just beyond it.
pub fn mcdtlz() -> Problem {
    use std::f64::consts::FRAC_PI_2;
    Problem::new(
        "mcdtlz",
        vec![0.0; MCDTLZ_DIMENSIONS],
        vec![1.0; MCDTLZ_DIMENSIONS],
        2,
        2,
        vec![1.0, 1.0],
        Arc::new(|x: &[f64]| {
            let theta = x[0] * FRAC_PI_2;
            let g: f64 = x[1..].iter().map(|&v| (v - 0.5) * (v - 0.5)).sum();
            let f1 = (1.0 + g) * theta.cos();
            let f2 = (1.0 + g) * theta.sin();
            let h1 = 1.1 - (f1 + 0.5 * f2);
            let h2 = 1.1 - (0.5 * f1 + f2);
            Ok((vec![f1, f2], vec![h1, h2]))
        }),
    )
    .expect("static problem definition is valid")
}

/// Welded-beam design problem: minimize end deflection and fabrication cost
/// subject to shear-stress, bending-stress, geometry, and buckling limits.
///
/// Variables are weld thickness `h`, weld length `l`, beam height `t`, and
/// beam width `b`. Objectives are ordered (deflection, cost) to match the
/// hypervolume reference point (0.3, 50).
pub fn welded_beam() -> Problem {
    Problem::new(
        "wb",
        vec![0.125, 0.1, 0.1, 0.125],
        vec![5.0, 10.0, 10.0, 5.0],
        2,
        4,
        vec![0.3, 50.0],
        Arc::new(|x: &[f64]| {
            let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
            let (p, big_l, e) = (6000.0, 14.0, 30e6);

            let tau_primary = p / (2.0f64.sqrt() * h * l);
            let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
            let moment = p * (big_l + l / 2.0);
            let polar = 2.0 * (2.0f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
            let tau_secondary = moment * r / polar;
            let tau = (tau_primary * tau_primary
                + 2.0 * tau_primary * tau_secondary * l / (2.0 * r)
                + tau_secondary * tau_secondary)
                .sqrt();
            let sigma = 6.0 * p * big_l / (t * t * b);
            let buckling = 64746.022 * (1.0 - 0.0282346 * t) * t * b.powi(3);

            let deflection = 4.0 * p * big_l.powi(3) / (e * t.powi(3) * b);
            let cost = 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
            let h_constraints = vec![tau - 13600.0, sigma - 30000.0, h - b, 6000.0 - buckling];
            Ok((vec![deflection, cost], h_constraints))
        }),
    )
    .expect("static problem definition is valid")
}

/// All built-in problems, in catalogue order.
pub fn catalogue() -> Vec<Problem> {
    vec![osy(), tnk(), mcdtlz(), welded_beam()]
}

/// Looks up a built-in problem by its CLI name.
pub fn by_name(name: &str) -> Result<Problem> {
    match name {
        "osy" => Ok(osy()),
        "tnk" => Ok(tnk()),
        "mcdtlz" => Ok(mcdtlz()),
        "wb" => Ok(welded_beam()),
        other => Err(Error::Config(format!(
            "unknown problem '{other}' (built-in problems: osy, tnk, mcdtlz, wb)"
        ))),
    }
}

/// Static description of the hybrid-rocket-engine design task, for which the
/// actual physics lives in an external simulator.
///
/// Objectives are (negated maximum altitude, total mass); altitude is negated
/// so both objectives are minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct HreMetadata {
    /// (name, unit, lower, upper) per design variable.
    pub variables: [(&'static str, &'static str, f64, f64); 6],
    pub objectives: [&'static str; 2],
    pub constraints: [&'static str; 3],
    pub hv_reference: [f64; 2],
}

pub fn hre_metadata() -> HreMetadata {
    HreMetadata {
        variables: [
            ("lox_mass_flow", "kg/s", 1.0, 30.0),
            ("fuel_length", "m", 1.0, 10.0),
            ("initial_port_radius", "mm", 10.0, 200.0),
            ("combustion_time", "s", 15.0, 35.0),
            ("chamber_pressure", "MPa", 3.0, 4.0),
            ("nozzle_aperture_ratio", "-", 5.0, 7.0),
        ],
        objectives: ["negated_max_altitude", "total_mass"],
        constraints: [
            "aspect_ratio - 25 <= 0",
            "max_dynamic_pressure_kpa - 100 <= 0",
            "max_acceleration_g - 5 <= 0",
        ],
        hv_reference: [2000.0, 0.0],
    }
}

impl HreMetadata {
    pub fn lower(&self) -> Vec<f64> {
        self.variables.iter().map(|v| v.2).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.variables.iter().map(|v| v.3).collect()
    }

    /// Renders a problem-spec file wiring these bounds to a simulator command.
    pub fn problem_spec(&self, command: &str, timeout_seconds: f64) -> String {
        let join = |v: Vec<f64>| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "name = hre\nn = {}\nm = 2\np = {}\nlower = {}\nupper = {}\nhv_reference = {} {}\ncommand = {}\ntimeout_seconds = {}\n",
            self.variables.len(),
            self.constraints.len(),
            join(self.lower()),
            join(self.upper()),
            self.hv_reference[0],
            self.hv_reference[1],
            command,
            timeout_seconds,
        )
    }
}
