//! Independent brute-force verification of the closed-form solvers.
//!
//! Everything here evaluates constraints and objectives in conventional
//! arithmetic over raw `f64` grids, deliberately avoiding the algebraic
//! machinery it is meant to check. [`brute_force_minimum`] exhaustively
//! enumerates start vectors on a bounded grid;
//! [`constrained_spectral_radius_by_enumeration`] spells out the mixed-product
//! trace formula word by word instead of using the polynomial recurrence.

use thiserror::Error;

use crate::matrix::{TropicalMatrix, TropicalVector};
use crate::scheduling::{Problem, ProjectModel, Schedule};
use crate::semifield::TropicalScalar;
use crate::FLOAT_TOLERANCE;

/// Hard cap on grid enumeration size.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid has {points} points, exceeding the limit of {max}")]
    GridTooLarge { points: u128, max: u128 },
    #[error("grid bounds are invalid: {reason}")]
    InvalidGrid { reason: String },
    #[error("problem requires vector `{name}` which the model does not provide")]
    MissingVector { name: &'static str },
    #[error("schedule has {found} activities, model has {expected}")]
    ShapeMismatch { expected: usize, found: usize },
}

/// A finite search grid: per-coordinate bounds and a common step.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    step: f64,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, step: f64) -> Result<Self, OracleError> {
        if lower.len() != upper.len() {
            return Err(OracleError::InvalidGrid {
                reason: format!("lower has {} entries, upper has {}", lower.len(), upper.len()),
            });
        }
        if !step.is_finite() || step <= 0.0 {
            return Err(OracleError::InvalidGrid { reason: format!("step {step} must be positive") });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(OracleError::InvalidGrid {
                    reason: format!("bounds at index {i} must be finite"),
                });
            }
            if lo > hi {
                return Err(OracleError::InvalidGrid {
                    reason: format!("lower {lo} exceeds upper {hi} at index {i}"),
                });
            }
        }
        let spec = Self { lower, upper, step };
        let points = spec.points();
        if points > MAX_GRID_POINTS {
            return Err(OracleError::GridTooLarge { points, max: MAX_GRID_POINTS });
        }
        Ok(spec)
    }

    /// Uniform bounds across all coordinates.
    pub fn uniform(n: usize, lower: f64, upper: f64, step: f64) -> Result<Self, OracleError> {
        Self::new(vec![lower; n], vec![upper; n], step)
    }

    /// Heuristic default: bounds run from the smallest to the largest entry of
    /// the model's time vectors, widened by `n * max |finite entry|` on each
    /// side. The step is `1/2` for objectives involving k-th roots (due-date
    /// deviation and flow-time), `1` otherwise.
    pub fn default_for(model: &ProjectModel, problem: Problem) -> Result<Self, OracleError> {
        let n = model.len();
        let vectors = [
            model.due_dates(),
            model.deadlines(),
            model.release_times(),
            model.release_deadlines(),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut max_abs: f64 = 0.0;
        for v in vectors.into_iter().flatten() {
            for s in v.iter().filter(|s| s.is_finite()) {
                lo = lo.min(s.value());
                hi = hi.max(s.value());
                max_abs = max_abs.max(s.value().abs());
            }
        }
        if !lo.is_finite() {
            return Err(OracleError::InvalidGrid {
                reason: "model has no finite time vector entries to derive bounds from".into(),
            });
        }
        for m in [model.start_finish(), model.start_start(), model.finish_start()] {
            max_abs = max_abs.max(m.max_abs_finite());
        }
        let span = n as f64 * max_abs;
        let step = match problem {
            Problem::DueDateDeviation | Problem::FlowTime => 0.5,
            Problem::FinishSpread | Problem::Makespan => 1.0,
        };
        Self::uniform(n, lo - span, hi + span, step)
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    /// Number of points per coordinate.
    fn counts(&self) -> Vec<usize> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| ((hi - lo) / self.step + FLOAT_TOLERANCE).floor() as usize + 1)
            .collect()
    }

    /// Total number of grid points.
    pub fn points(&self) -> u128 {
        self.counts().iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
    }
}

/// One violated constraint, with its location and the amount of violation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstraintViolation {
    #[error("finish time of activity {activity} is {found}, but the start-finish lags give {expected}")]
    FinishMismatch { activity: usize, expected: f64, found: f64 },
    #[error("start-start lag {i}<-{j} violated by {amount}")]
    StartStart { i: usize, j: usize, amount: f64 },
    #[error("finish-start lag {i}<-{j} violated by {amount}")]
    FinishStart { i: usize, j: usize, amount: f64 },
    #[error("activity {activity} starts {amount} before its release time")]
    ReleaseTime { activity: usize, amount: f64 },
    #[error("activity {activity} starts {amount} after its release deadline")]
    ReleaseDeadline { activity: usize, amount: f64 },
    #[error("activity {activity} finishes {amount} after its deadline")]
    Deadline { activity: usize, amount: f64 },
}

/// Outcome of checking a schedule against the constraints of its problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub violations: Vec<ConstraintViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Raw `f64` view of a matrix with `-inf` for absent lags.
fn rows_of(m: &TropicalMatrix) -> Vec<Vec<f64>> {
    m.to_f64_rows()
}

fn apply_lags(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(c, _)| c.is_finite())
                .map(|(&c, &xj)| c + xj)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn required_vector(v: Option<&TropicalVector>, name: &'static str) -> Result<Vec<f64>, OracleError> {
    v.map(|v| v.to_f64()).ok_or(OracleError::MissingVector { name })
}

/// Conventional-arithmetic value of the schedule's objective.
pub fn objective_value(model: &ProjectModel, schedule: &Schedule) -> Result<f64, OracleError> {
    let n = model.len();
    if schedule.start.len() != n || schedule.finish.len() != n {
        return Err(OracleError::ShapeMismatch {
            expected: n,
            found: schedule.start.len().max(schedule.finish.len()),
        });
    }
    let x = schedule.start.to_f64();
    let y = schedule.finish.to_f64();
    let value = match schedule.problem {
        Problem::DueDateDeviation => {
            let d = required_vector(model.due_dates(), "due_dates")?;
            y.iter().zip(&d).map(|(&yi, &di)| (yi - di).abs()).fold(f64::NEG_INFINITY, f64::max)
        }
        Problem::FinishSpread => {
            let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = y.iter().cloned().fold(f64::INFINITY, f64::min);
            max - min
        }
        Problem::FlowTime => {
            y.iter().zip(&x).map(|(&yi, &xi)| yi - xi).fold(f64::NEG_INFINITY, f64::max)
        }
        Problem::Makespan => {
            let max_y = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min_x = x.iter().cloned().fold(f64::INFINITY, f64::min);
            max_y - min_x
        }
    };
    Ok(value)
}

/// Checks every constraint of the schedule's problem, reporting each
/// violation with its index and magnitude. The start-finish equality
/// `y = A ⊗ x` is checked to within `1e-9`; inequalities get the same slack.
pub fn check_feasibility(model: &ProjectModel, schedule: &Schedule) -> Result<FeasibilityReport, OracleError> {
    let n = model.len();
    if schedule.start.len() != n || schedule.finish.len() != n {
        return Err(OracleError::ShapeMismatch {
            expected: n,
            found: schedule.start.len().max(schedule.finish.len()),
        });
    }
    let x = schedule.start.to_f64();
    let y = schedule.finish.to_f64();
    let a = rows_of(model.start_finish());
    let mut violations = Vec::new();

    let expected_finish = apply_lags(&a, &x);
    for i in 0..n {
        if (expected_finish[i] - y[i]).abs() > FLOAT_TOLERANCE {
            violations.push(ConstraintViolation::FinishMismatch {
                activity: i,
                expected: expected_finish[i],
                found: y[i],
            });
        }
    }

    let precedence_applies = matches!(
        schedule.problem,
        Problem::DueDateDeviation | Problem::FinishSpread | Problem::FlowTime
    );
    if precedence_applies {
        let b = rows_of(model.start_start());
        let c = rows_of(model.finish_start());
        for i in 0..n {
            for j in 0..n {
                if b[i][j].is_finite() {
                    let amount = b[i][j] + x[j] - x[i];
                    if amount > FLOAT_TOLERANCE {
                        violations.push(ConstraintViolation::StartStart { i, j, amount });
                    }
                }
                if c[i][j].is_finite() {
                    let amount = c[i][j] + y[j] - x[i];
                    if amount > FLOAT_TOLERANCE {
                        violations.push(ConstraintViolation::FinishStart { i, j, amount });
                    }
                }
            }
        }
    }

    match schedule.problem {
        Problem::DueDateDeviation => {}
        Problem::FinishSpread => {
            let f = required_vector(model.deadlines(), "deadlines")?;
            push_deadline_violations(&mut violations, &y, &f);
        }
        Problem::FlowTime => {
            let g = required_vector(model.release_times(), "release_times")?;
            push_release_violations(&mut violations, &x, &g);
        }
        Problem::Makespan => {
            let g = required_vector(model.release_times(), "release_times")?;
            let h = required_vector(model.release_deadlines(), "release_deadlines")?;
            let f = required_vector(model.deadlines(), "deadlines")?;
            push_release_violations(&mut violations, &x, &g);
            for i in 0..n {
                let amount = x[i] - h[i];
                if amount > FLOAT_TOLERANCE {
                    violations.push(ConstraintViolation::ReleaseDeadline { activity: i, amount });
                }
            }
            push_deadline_violations(&mut violations, &y, &f);
        }
    }
    Ok(FeasibilityReport { violations })
}

fn push_release_violations(out: &mut Vec<ConstraintViolation>, x: &[f64], g: &[f64]) {
    for i in 0..x.len() {
        let amount = g[i] - x[i];
        if amount > FLOAT_TOLERANCE {
            out.push(ConstraintViolation::ReleaseTime { activity: i, amount });
        }
    }
}

fn push_deadline_violations(out: &mut Vec<ConstraintViolation>, y: &[f64], f: &[f64]) {
    for i in 0..y.len() {
        let amount = y[i] - f[i];
        if amount > FLOAT_TOLERANCE {
            out.push(ConstraintViolation::Deadline { activity: i, amount });
        }
    }
}

/// Exhaustive grid search: enumerates start vectors on the grid, derives
/// finish times as `y = A ⊗ x`, filters by the problem's constraints and
/// returns the minimal objective with the first (lexicographically smallest)
/// witness, or `None` when no grid point is feasible.
pub fn brute_force_minimum(
    model: &ProjectModel,
    problem: Problem,
    grid: &GridSpec,
) -> Result<Option<(f64, Schedule)>, OracleError> {
    let n = model.len();
    if grid.dims() != n {
        return Err(OracleError::InvalidGrid {
            reason: format!("grid has {} dimensions, model has {n}", grid.dims()),
        });
    }
    let points = grid.points();
    if points > MAX_GRID_POINTS {
        return Err(OracleError::GridTooLarge { points, max: MAX_GRID_POINTS });
    }

    let a = rows_of(model.start_finish());
    let b = rows_of(model.start_start());
    let c = rows_of(model.finish_start());
    let d = match problem {
        Problem::DueDateDeviation => Some(required_vector(model.due_dates(), "due_dates")?),
        _ => None,
    };
    let f = match problem {
        Problem::FinishSpread | Problem::Makespan => {
            Some(required_vector(model.deadlines(), "deadlines")?)
        }
        _ => None,
    };
    let g = match problem {
        Problem::FlowTime | Problem::Makespan => {
            Some(required_vector(model.release_times(), "release_times")?)
        }
        _ => None,
    };
    let h = match problem {
        Problem::Makespan => Some(required_vector(model.release_deadlines(), "release_deadlines")?),
        _ => None,
    };
    let precedence_applies = !matches!(problem, Problem::Makespan);

    let counts = grid.counts();
    let mut idx = vec![0usize; n];
    let mut x = grid.lower.clone();
    let mut y = vec![0.0f64; n];
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;

    'outer: loop {
        'reject: {
            if let Some(g) = &g {
                for i in 0..n {
                    if g[i] - x[i] > FLOAT_TOLERANCE {
                        break 'reject;
                    }
                }
            }
            if let Some(h) = &h {
                for i in 0..n {
                    if x[i] - h[i] > FLOAT_TOLERANCE {
                        break 'reject;
                    }
                }
            }
            if precedence_applies {
                for i in 0..n {
                    let xi = x[i] + FLOAT_TOLERANCE;
                    for j in 0..n {
                        if b[i][j].is_finite() && b[i][j] + x[j] > xi {
                            break 'reject;
                        }
                    }
                }
            }
            for i in 0..n {
                let mut acc = f64::NEG_INFINITY;
                for j in 0..n {
                    if a[i][j].is_finite() {
                        acc = acc.max(a[i][j] + x[j]);
                    }
                }
                y[i] = acc;
            }
            if precedence_applies {
                for i in 0..n {
                    let xi = x[i] + FLOAT_TOLERANCE;
                    for j in 0..n {
                        if c[i][j].is_finite() && c[i][j] + y[j] > xi {
                            break 'reject;
                        }
                    }
                }
            }
            if let Some(f) = &f {
                for i in 0..n {
                    if y[i] - f[i] > FLOAT_TOLERANCE {
                        break 'reject;
                    }
                }
            }

            let value = match problem {
                Problem::DueDateDeviation => {
                    let d = d.as_ref().expect("due dates resolved above");
                    y.iter()
                        .zip(d)
                        .map(|(&yi, &di)| (yi - di).abs())
                        .fold(f64::NEG_INFINITY, f64::max)
                }
                Problem::FinishSpread => {
                    let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let min = y.iter().cloned().fold(f64::INFINITY, f64::min);
                    max - min
                }
                Problem::FlowTime => y
                    .iter()
                    .zip(&x)
                    .map(|(&yi, &xi)| yi - xi)
                    .fold(f64::NEG_INFINITY, f64::max),
                Problem::Makespan => {
                    let max_y = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let min_x = x.iter().cloned().fold(f64::INFINITY, f64::min);
                    max_y - min_x
                }
            };
            if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
                best = Some((value, x.clone(), y.clone()));
            }
        }

        // Advance the odometer; enumeration order is lexicographic, so the
        // first witness of the minimal value is the lexicographically
        // smallest one.
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < counts[k] {
                x[k] = grid.lower[k] + idx[k] as f64 * grid.step;
                break;
            }
            idx[k] = 0;
            x[k] = grid.lower[k];
        }
    }

    Ok(best.map(|(value, x, y)| {
        let schedule = Schedule {
            problem,
            start: TropicalVector::from_f64(&x),
            finish: TropicalVector::from_f64(&y),
            objective: TropicalScalar::new(value),
        };
        (value, schedule)
    }))
}

/// Literal evaluation of the constrained spectral radius: enumerates every
/// mixed product `A B^(i₁) ⋯ A B^(i_k)` with `1 <= i₁+…+i_k <= n-k` and joins
/// the k-th roots of their traces with the spectral radius of `A`.
///
/// Exponential in `n`; exists purely to cross-check the polynomial
/// recurrence.
pub fn constrained_spectral_radius_by_enumeration(
    a: &TropicalMatrix,
    b: &TropicalMatrix,
) -> TropicalScalar {
    assert!(a.is_square() && b.is_square(), "matrices must be square");
    assert_eq!(a.rows(), b.rows(), "matrices must have the same order");
    let n = a.rows();
    let mut best = a.spectral_radius();
    if n <= 1 {
        return best;
    }
    let mut b_powers = vec![TropicalMatrix::identity(n)];
    for l in 1..n {
        let next = b_powers[l - 1].otimes(b);
        b_powers.push(next);
    }

    struct WordEnumerator<'m> {
        a: &'m TropicalMatrix,
        b_powers: &'m [TropicalMatrix],
        k: u32,
        best: TropicalScalar,
    }

    impl WordEnumerator<'_> {
        /// Appends `slots_left` more `A B^i` blocks, distributing at most
        /// `budget` additional B-factors; at least one B-factor must have
        /// been spent over the whole word.
        fn visit(&mut self, prefix: &TropicalMatrix, slots_left: usize, budget: usize, spent: usize) {
            if slots_left == 0 {
                if spent >= 1 {
                    self.best = self.best.oplus(prefix.trace().root(self.k));
                }
                return;
            }
            for i in 0..=budget {
                let word = prefix.otimes(self.a).otimes(&self.b_powers[i]);
                self.visit(&word, slots_left - 1, budget - i, spent + i);
            }
        }
    }

    for k in 1..n {
        let mut enumerator = WordEnumerator { a, b_powers: &b_powers, k: k as u32, best };
        enumerator.visit(&TropicalMatrix::identity(n), k, n - k, 0);
        best = enumerator.best;
    }
    best
}
