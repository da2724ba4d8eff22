//! Subprocess-backed problems described by a plain-text spec file.
//!
//! The spec file is `key = value` text (one pair per line, `#` starts a
//! comment) with the required keys `name`, `n`, `m`, `p`, `lower`, `upper`,
//! `hv_reference`, `command`, and `timeout_seconds`. Vector values are
//! whitespace-separated numbers.
//!
//! Evaluation protocol: the command is launched with the spec file's
//! directory as working directory, receives one line with `n`
//! whitespace-separated design values on stdin, and must print one line with
//! `m` objective values followed by one line with `p` constraint values
//! (non-positive means satisfied) on stdout, then exit with status 0. A
//! nonzero exit status, malformed output, or running past the timeout is
//! reported as an evaluation failure carrying the offending design vector.
//!
//! Results are cached on the exact design-vector bits, so repeated
//! evaluations of an identical design invoke the simulator only once.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use crate::types::Problem;
use crate::{Error, Result};

/// Parsed contents of a problem-spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSpec {
    pub name: String,
    pub dimensions: usize,
    pub objectives: usize,
    pub constraints: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub hv_reference: Vec<f64>,
    /// Command and arguments, split on whitespace.
    pub command: Vec<String>,
    pub timeout: Duration,
    /// Directory the command runs in (the spec file's parent).
    pub working_dir: PathBuf,
}

fn spec_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Spec {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn parse_number(path: &Path, key: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| spec_error(path, format!("key '{key}': '{raw}' is not a number")))
}

fn parse_vector(path: &Path, key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split_whitespace()
        .map(|tok| parse_number(path, key, tok))
        .collect()
}

fn parse_count(path: &Path, key: &str, raw: &str) -> Result<usize> {
    raw.parse::<usize>().map_err(|_| {
        spec_error(
            path,
            format!("key '{key}': '{raw}' is not a non-negative integer"),
        )
    })
}

/// Reads and validates a problem-spec file.
pub fn load_spec(path: &Path) -> Result<ExternalSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs: HashMap<&str, &str> = HashMap::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            spec_error(path, format!("line {}: expected 'key = value'", number + 1))
        })?;
        let key = key.trim();
        if pairs.insert(key, value.trim()).is_some() {
            return Err(spec_error(path, format!("duplicate key '{key}'")));
        }
    }

    let mut take = |key: &str| -> Result<&str> {
        pairs
            .remove(key)
            .ok_or_else(|| spec_error(path, format!("missing required key '{key}'")))
    };

    let name = take("name")?.to_string();
    let dimensions = parse_count(path, "n", take("n")?)?;
    let objectives = parse_count(path, "m", take("m")?)?;
    let constraints = parse_count(path, "p", take("p")?)?;
    let lower = parse_vector(path, "lower", take("lower")?)?;
    let upper = parse_vector(path, "upper", take("upper")?)?;
    let hv_reference = parse_vector(path, "hv_reference", take("hv_reference")?)?;
    let command: Vec<String> = take("command")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let timeout_seconds = parse_number(path, "timeout_seconds", take("timeout_seconds")?)?;

    if let Some(extra) = pairs.keys().next() {
        return Err(spec_error(path, format!("unknown key '{extra}'")));
    }
    if name.is_empty() {
        return Err(spec_error(path, "'name' must not be empty"));
    }
    if lower.len() != dimensions || upper.len() != dimensions {
        return Err(spec_error(
            path,
            format!(
                "'lower'/'upper' must each have n = {dimensions} entries, got {} and {}",
                lower.len(),
                upper.len()
            ),
        ));
    }
    if hv_reference.len() != objectives {
        return Err(spec_error(
            path,
            format!(
                "'hv_reference' must have m = {objectives} entries, got {}",
                hv_reference.len()
            ),
        ));
    }
    if command.is_empty() {
        return Err(spec_error(path, "'command' must not be empty"));
    }
    if !(timeout_seconds.is_finite() && timeout_seconds > 0.0) {
        return Err(spec_error(path, "'timeout_seconds' must be positive"));
    }

    let working_dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));

    Ok(ExternalSpec {
        name,
        dimensions,
        objectives,
        constraints,
        lower,
        upper,
        hv_reference,
        command,
        timeout: Duration::from_secs_f64(timeout_seconds),
        working_dir,
    })
}

fn evaluation_error(message: impl Into<String>, design: &[f64]) -> Error {
    Error::Evaluation {
        message: message.into(),
        design: design.to_vec(),
    }
}

/// Runs the simulator once for a single design vector.
fn invoke(spec: &ExternalSpec, design: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut child = Command::new(&spec.command[0])
        .args(&spec.command[1..])
        .current_dir(&spec.working_dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| {
            evaluation_error(
                format!("failed to launch '{}': {e}", spec.command[0]),
                design,
            )
        })?;

    let input = design
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
        + "\n";
    // Closing stdin signals end of input to line-reading evaluators.
    {
        let mut stdin = child.stdin.take().expect("stdin was piped");
        if let Err(e) = stdin.write_all(input.as_bytes()) {
            let _ = child.kill();
            let _ = child.wait();
            return Err(evaluation_error(
                format!("failed to send design: {e}"),
                design,
            ));
        }
    }

    let deadline = Instant::now() + spec.timeout;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(evaluation_error(
                        format!("evaluator exceeded the {:?} timeout", spec.timeout),
                        design,
                    ));
                }
                std::thread::sleep(Duration::from_millis(2));
            }
            Err(e) => {
                return Err(evaluation_error(
                    format!("failed to poll evaluator: {e}"),
                    design,
                ))
            }
        }
    };

    let mut stdout = String::new();
    if let Some(mut out) = child.stdout.take() {
        let _ = out.read_to_string(&mut stdout);
    }
    if !status.success() {
        let mut stderr = String::new();
        if let Some(mut err) = child.stderr.take() {
            let _ = err.read_to_string(&mut stderr);
        }
        let detail = stderr.trim();
        return Err(evaluation_error(
            if detail.is_empty() {
                format!("evaluator exited with {status}")
            } else {
                format!("evaluator exited with {status}: {detail}")
            },
            design,
        ));
    }

    let mut lines = stdout.lines().filter(|l| !l.trim().is_empty());
    let parse_line = |line: Option<&str>, what: &str, expected: usize| -> Result<Vec<f64>> {
        let line = line
            .ok_or_else(|| evaluation_error(format!("evaluator printed no {what} line"), design))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    evaluation_error(format!("{what} value '{tok}' is not a number"), design)
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != expected {
            return Err(evaluation_error(
                format!("expected {expected} {what} values, got {}", values.len()),
                design,
            ));
        }
        Ok(values)
    };
    let objectives = parse_line(lines.next(), "objective", spec.objectives)?;
    let constraints = if spec.constraints == 0 {
        Vec::new()
    } else {
        parse_line(lines.next(), "constraint", spec.constraints)?
    };
    Ok((objectives, constraints))
}

/// Memoized evaluator outputs keyed by the exact bit pattern of the design.
type EvalCache = Mutex<HashMap<Vec<u64>, (Vec<f64>, Vec<f64>)>>;

/// Wraps a spec file as a [`Problem`] whose evaluator shells out to the
/// configured command, caching results per exact design vector.
pub fn external_problem(path: &Path) -> Result<Problem> {
    let spec = load_spec(path)?;
    let cache: EvalCache = Mutex::new(HashMap::new());
    let inner = spec.clone();
    Problem::new(
        spec.name.clone(),
        spec.lower.clone(),
        spec.upper.clone(),
        spec.objectives,
        spec.constraints,
        spec.hv_reference.clone(),
        Arc::new(move |design: &[f64]| {
            let key: Vec<u64> = design.iter().map(|v| v.to_bits()).collect();
            if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
                return Ok(hit.clone());
            }
            let result = invoke(&inner, design)?;
            cache
                .lock()
                .expect("cache lock")
                .insert(key, result.clone());
            Ok(result)
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::DesignVector;
    use std::fs;

    fn write_spec(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("problem.spec");
        fs::write(&path, body).unwrap();
        path
    }

    fn write_script(dir: &Path, name: &str, body: &str) -> String {
        fs::write(dir.join(name), body).unwrap();
        format!("python3 {name}")
    }

    const SPEC_TEMPLATE: &str = "\
name = toy
n = 2
m = 2
p = 1
lower = 0 0
upper = 1 1
hv_reference = 2 2
command = {COMMAND}
timeout_seconds = {TIMEOUT}
";

    fn spec_text(command: &str, timeout: &str) -> String {
        SPEC_TEMPLATE
            .replace("{COMMAND}", command)
            .replace("{TIMEOUT}", timeout)
    }

    #[test]
    fn spec_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_spec(
            dir.path(),
            "# a comment\nname = toy # trailing comment\nn = 2\nm = 2\np = 1\nlower = 0 0\nupper = 1 1\nhv_reference = 2 2\ncommand = python3 eval.py --fast\ntimeout_seconds = 1.5\n",
        );
        let spec = load_spec(&path).unwrap();
        assert_eq!(spec.name, "toy");
        assert_eq!(spec.dimensions, 2);
        assert_eq!(spec.objectives, 2);
        assert_eq!(spec.constraints, 1);
        assert_eq!(spec.lower, vec![0.0, 0.0]);
        assert_eq!(spec.upper, vec![1.0, 1.0]);
        assert_eq!(spec.hv_reference, vec![2.0, 2.0]);
        assert_eq!(spec.command, vec!["python3", "eval.py", "--fast"]);
        assert_eq!(spec.timeout, Duration::from_millis(1500));
        assert_eq!(spec.working_dir, dir.path());
    }

    #[test]
    fn spec_rejects_missing_and_inconsistent_keys() {
        let dir = tempfile::tempdir().unwrap();
        let missing = write_spec(dir.path(), "name = toy\nn = 2\n");
        let err = load_spec(&missing).unwrap_err().to_string();
        assert!(err.contains("missing required key"), "{err}");

        let ragged = write_spec(
            dir.path(),
            &spec_text("true", "1").replace("lower = 0 0", "lower = 0 0 0"),
        );
        let err = load_spec(&ragged).unwrap_err().to_string();
        assert!(err.contains("n = 2"), "{err}");

        let unknown = write_spec(dir.path(), &(spec_text("true", "1") + "colour = blue\n"));
        let err = load_spec(&unknown).unwrap_err().to_string();
        assert!(err.contains("unknown key 'colour'"), "{err}");
    }

    #[test]
    fn evaluator_round_trips_full_precision_values() {
        let dir = tempfile::tempdir().unwrap();
        // Echoes the design as objectives and their sum minus one as the
        // constraint, exercising the full stdin/stdout protocol.
        let command = write_script(
            dir.path(),
            "eval.py",
            "import sys\nxs = [float(t) for t in sys.stdin.readline().split()]\nprint(*(repr(x) for x in xs))\nprint(repr(xs[0] + xs[1] - 1.0))\n",
        );
        let path = write_spec(dir.path(), &spec_text(&command, "10"));
        let problem = external_problem(&path).unwrap();

        let x = vec![std::f64::consts::FRAC_1_PI, 0.123_456_789_012_345_68];
        let e = problem.evaluate(&DesignVector::new(x.clone())).unwrap();
        assert_eq!(
            e.objectives(),
            x.as_slice(),
            "values survive the text protocol"
        );
        assert_eq!(e.constraint_values(), &[x[0] + x[1] - 1.0]);
    }

    #[test]
    fn repeated_designs_hit_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        // Counts invocations in a side file so the test can observe caching.
        let command = write_script(
            dir.path(),
            "eval.py",
            "import sys\nxs = [float(t) for t in sys.stdin.readline().split()]\nwith open('calls.log', 'a') as fh:\n    fh.write('call\\n')\nprint(xs[0], xs[1])\nprint(-1.0)\n",
        );
        let path = write_spec(dir.path(), &spec_text(&command, "10"));
        let problem = external_problem(&path).unwrap();

        let x = DesignVector::new(vec![0.25, 0.75]);
        let first = problem.evaluate(&x).unwrap();
        let second = problem.evaluate(&x).unwrap();
        assert_eq!(first, second);
        let calls = fs::read_to_string(dir.path().join("calls.log")).unwrap();
        assert_eq!(
            calls.lines().count(),
            1,
            "second evaluation came from the cache"
        );

        problem
            .evaluate(&DesignVector::new(vec![0.75, 0.25]))
            .unwrap();
        let calls = fs::read_to_string(dir.path().join("calls.log")).unwrap();
        assert_eq!(calls.lines().count(), 2, "distinct designs are evaluated");
    }

    #[test]
    fn wrong_arity_output_is_an_evaluation_error() {
        let dir = tempfile::tempdir().unwrap();
        let command = write_script(
            dir.path(),
            "eval.py",
            "import sys\nsys.stdin.readline()\nprint(1.0)\nprint(-1.0)\n",
        );
        let path = write_spec(dir.path(), &spec_text(&command, "10"));
        let problem = external_problem(&path).unwrap();
        let err = problem
            .evaluate(&DesignVector::new(vec![0.5, 0.5]))
            .unwrap_err();
        match err {
            Error::Evaluation { message, design } => {
                assert!(message.contains("expected 2 objective values"), "{message}");
                assert_eq!(design, vec![0.5, 0.5]);
            }
            other => panic!("expected an evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn nonzero_exit_is_an_evaluation_error() {
        let dir = tempfile::tempdir().unwrap();
        let command = write_script(
            dir.path(),
            "eval.py",
            "import sys\nsys.stdin.readline()\nprint('boom', file=sys.stderr)\nsys.exit(3)\n",
        );
        let path = write_spec(dir.path(), &spec_text(&command, "10"));
        let problem = external_problem(&path).unwrap();
        let err = problem
            .evaluate(&DesignVector::new(vec![0.5, 0.5]))
            .unwrap_err()
            .to_string();
        assert!(err.contains("boom"), "stderr is surfaced: {err}");
    }

    #[test]
    fn overrunning_evaluator_is_killed_at_the_deadline() {
        let dir = tempfile::tempdir().unwrap();
        let command = write_script(dir.path(), "eval.py", "import time\ntime.sleep(30)\n");
        let path = write_spec(dir.path(), &spec_text(&command, "0.3"));
        let problem = external_problem(&path).unwrap();
        let started = Instant::now();
        let err = problem
            .evaluate(&DesignVector::new(vec![0.5, 0.5]))
            .unwrap_err()
            .to_string();
        assert!(err.contains("timeout"), "{err}");
        assert!(
            started.elapsed() < Duration::from_secs(5),
            "the child was killed promptly"
        );
    }
}
