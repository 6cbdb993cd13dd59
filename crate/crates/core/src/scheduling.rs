//! Project models and the four time-constrained scheduling solvers.
//!
//! A project is `n` activities linked by start-finish lags (`a_ij`: minimum
//! time between the start of activity `j` and the finish of `i`; the diagonal
//! holds minimum durations), start-start lags (`b_ij`) and finish-start lags
//! (`c_ij`), plus optional per-activity due dates, deadlines, release times
//! and release deadlines. Finish times satisfy `y = A ⊗ x`: an activity
//! finishes as soon as every start-finish lag allows.
//!
//! Each solver reduces its problem to one of the generic minimax problems in
//! [`crate::tropopt`]: the two precedence constraints collapse into a single
//! inequality `D x <= x` with `D = B ⊕ C⊗A`, whose solutions form the cone
//! generated by `D*`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::{TropicalMatrix, TropicalVector};
use crate::semifield::TropicalScalar;
use crate::tropopt::{
    self, FamilyKind, OptError, SolutionFamily,
};
use crate::FLOAT_TOLERANCE;

/// The four scheduling objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Minimize the maximum absolute deviation of finish times from due dates.
    DueDateDeviation,
    /// Minimize the spread between the latest and earliest finish times.
    FinishSpread,
    /// Minimize the maximum flow-time (finish minus start) over activities.
    FlowTime,
    /// Minimize the makespan: latest finish minus earliest start.
    Makespan,
}

impl Problem {
    pub const ALL: [Problem; 4] = [
        Problem::DueDateDeviation,
        Problem::FinishSpread,
        Problem::FlowTime,
        Problem::Makespan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::DueDateDeviation => "due-date",
            Problem::FinishSpread => "finish-spread",
            Problem::FlowTime => "flow-time",
            Problem::Makespan => "makespan",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "due-date" => Ok(Problem::DueDateDeviation),
            "finish-spread" => Ok(Problem::FinishSpread),
            "flow-time" => Ok(Problem::FlowTime),
            "makespan" => Ok(Problem::Makespan),
            other => Err(format!(
                "unknown problem `{other}` (expected due-date, finish-spread, flow-time or makespan)"
            )),
        }
    }
}

/// Errors raised while assembling a [`ProjectModel`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("start-finish matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what} must have {expected} entries, got {found}")]
    SizeMismatch { what: &'static str, expected: usize, found: usize },
    #[error("activity {activity} has no finite minimum duration (start-finish diagonal is -inf)")]
    NonFiniteDuration { activity: usize },
}

/// A validated project: constraint matrices plus optional time vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectModel {
    start_finish: TropicalMatrix,
    start_start: TropicalMatrix,
    finish_start: TropicalMatrix,
    due_dates: Option<TropicalVector>,
    deadlines: Option<TropicalVector>,
    release_times: Option<TropicalVector>,
    release_deadlines: Option<TropicalVector>,
    names: Option<Vec<String>>,
}

impl ProjectModel {
    /// Builds a model from its start-finish matrix. Absent lag matrices
    /// default to all `-inf` (no constraint).
    pub fn new(start_finish: TropicalMatrix) -> Result<Self, ModelError> {
        if !start_finish.is_square() {
            return Err(ModelError::NotSquare {
                rows: start_finish.rows(),
                cols: start_finish.cols(),
            });
        }
        let n = start_finish.rows();
        for i in 0..n {
            if start_finish.get(i, i).is_zero() {
                return Err(ModelError::NonFiniteDuration { activity: i });
            }
        }
        Ok(Self {
            start_finish,
            start_start: TropicalMatrix::zero(n, n),
            finish_start: TropicalMatrix::zero(n, n),
            due_dates: None,
            deadlines: None,
            release_times: None,
            release_deadlines: None,
            names: None,
        })
    }

    pub fn with_start_start(mut self, b: TropicalMatrix) -> Result<Self, ModelError> {
        self.check_matrix("start_start", &b)?;
        self.start_start = b;
        Ok(self)
    }

    pub fn with_finish_start(mut self, c: TropicalMatrix) -> Result<Self, ModelError> {
        self.check_matrix("finish_start", &c)?;
        self.finish_start = c;
        Ok(self)
    }

    pub fn with_due_dates(mut self, d: TropicalVector) -> Result<Self, ModelError> {
        self.check_vector("due_dates", &d)?;
        self.due_dates = Some(d);
        Ok(self)
    }

    pub fn with_deadlines(mut self, f: TropicalVector) -> Result<Self, ModelError> {
        self.check_vector("deadlines", &f)?;
        self.deadlines = Some(f);
        Ok(self)
    }

    pub fn with_release_times(mut self, g: TropicalVector) -> Result<Self, ModelError> {
        self.check_vector("release_times", &g)?;
        self.release_times = Some(g);
        Ok(self)
    }

    pub fn with_release_deadlines(mut self, h: TropicalVector) -> Result<Self, ModelError> {
        self.check_vector("release_deadlines", &h)?;
        self.release_deadlines = Some(h);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, ModelError> {
        if names.len() != self.len() {
            return Err(ModelError::SizeMismatch {
                what: "activity names",
                expected: self.len(),
                found: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    fn check_matrix(&self, what: &'static str, m: &TropicalMatrix) -> Result<(), ModelError> {
        let n = self.len();
        if m.rows() != n || m.cols() != n {
            return Err(ModelError::SizeMismatch {
                what,
                expected: n * n,
                found: m.rows() * m.cols(),
            });
        }
        Ok(())
    }

    fn check_vector(&self, what: &'static str, v: &TropicalVector) -> Result<(), ModelError> {
        if v.len() != self.len() {
            return Err(ModelError::SizeMismatch {
                what,
                expected: self.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Number of activities.
    pub fn len(&self) -> usize {
        self.start_finish.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start_finish(&self) -> &TropicalMatrix {
        &self.start_finish
    }

    pub fn start_start(&self) -> &TropicalMatrix {
        &self.start_start
    }

    pub fn finish_start(&self) -> &TropicalMatrix {
        &self.finish_start
    }

    pub fn due_dates(&self) -> Option<&TropicalVector> {
        self.due_dates.as_ref()
    }

    pub fn deadlines(&self) -> Option<&TropicalVector> {
        self.deadlines.as_ref()
    }

    pub fn release_times(&self) -> Option<&TropicalVector> {
        self.release_times.as_ref()
    }

    pub fn release_deadlines(&self) -> Option<&TropicalVector> {
        self.release_deadlines.as_ref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// The aggregated precedence matrix `D = B ⊕ C⊗A`: both inequality
    /// constraint families collapse into `D x <= x`.
    pub fn combined_precedence(&self) -> TropicalMatrix {
        self.start_start.oplus(&self.finish_start.otimes(&self.start_finish))
    }

    /// Finish times implied by a start vector: `y = A ⊗ x`.
    pub fn finish_times(&self, start: &TropicalVector) -> TropicalVector {
        self.start_finish.mul_vec(start)
    }

    /// Checks the preconditions of one problem without solving it. The
    /// report lists violated preconditions (empty means solvable) plus
    /// informational notes such as the aggregated cycle weight.
    pub fn validate(&self, problem: Problem) -> ValidationReport {
        let mut report = ValidationReport { problem, violations: Vec::new(), notes: Vec::new() };
        let a = &self.start_finish;

        match problem {
            Problem::DueDateDeviation => {
                self.check_row_regular(&mut report);
                self.check_precedence_cycles(&mut report);
                self.require_vector(&mut report, "due_dates", self.due_dates.as_ref());
            }
            Problem::FinishSpread => {
                self.check_row_regular(&mut report);
                if let Some(j) = a.first_zero_column() {
                    report.violations.push(ValidationIssue::NotColumnRegular { column: j });
                }
                self.check_precedence_cycles(&mut report);
                self.require_vector(&mut report, "deadlines", self.deadlines.as_ref());
            }
            Problem::FlowTime => {
                self.check_precedence_cycles(&mut report);
                self.require_vector(&mut report, "release_times", self.release_times.as_ref());
                let lambda = a.spectral_radius();
                if lambda.is_zero() {
                    report.violations.push(ValidationIssue::DegenerateObjective);
                } else {
                    report.notes.push(format!("spectral radius of start-finish matrix = {lambda}"));
                }
            }
            Problem::Makespan => {
                if let Some(j) = a.first_zero_column() {
                    report.violations.push(ValidationIssue::NotColumnRegular { column: j });
                }
                let g = self.require_vector(&mut report, "release_times", self.release_times.as_ref());
                let h = self.require_vector(
                    &mut report,
                    "release_deadlines",
                    self.release_deadlines.as_ref(),
                );
                let f = self.require_vector(&mut report, "deadlines", self.deadlines.as_ref());
                if let (Some(g), Some(h), Some(f)) = (g, h, f) {
                    let value = h
                        .conjugate()
                        .oplus(&f.conjugate().mul_mat(a))
                        .dot(g);
                    if value.value() > FLOAT_TOLERANCE {
                        report.violations.push(ValidationIssue::BoxIncompatible { value: value.value() });
                    } else {
                        report.notes.push(format!("release/deadline compatibility margin = {value}"));
                    }
                }
                if self.start_start.is_nonzero() || self.finish_start.is_nonzero() {
                    report.notes.push(
                        "start-start and finish-start lags are not part of the makespan problem and are ignored"
                            .to_string(),
                    );
                }
            }
        }
        report
    }

    fn check_row_regular(&self, report: &mut ValidationReport) {
        if let Some(i) = self.start_finish.first_zero_row() {
            report.violations.push(ValidationIssue::NotRowRegular { row: i });
        }
    }

    fn check_precedence_cycles(&self, report: &mut ValidationReport) {
        let d = self.combined_precedence();
        let weight = d.trace_sum();
        if weight.value() > FLOAT_TOLERANCE {
            report.violations.push(ValidationIssue::PositiveCycle { cycle_weight: weight.value() });
        } else {
            report.notes.push(format!("aggregated precedence cycle weight Tr(D) = {weight}"));
        }
    }

    fn require_vector<'a>(
        &self,
        report: &mut ValidationReport,
        name: &'static str,
        v: Option<&'a TropicalVector>,
    ) -> Option<&'a TropicalVector> {
        match v {
            None => {
                report.violations.push(ValidationIssue::MissingVector { name });
                None
            }
            Some(vec) => {
                if let Some(i) = vec.first_zero() {
                    report.violations.push(ValidationIssue::NonRegularVector { name, index: i });
                    None
                } else {
                    Some(vec)
                }
            }
        }
    }
}

/// One violated precondition discovered by [`ProjectModel::validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationIssue {
    #[error("required vector `{name}` is missing")]
    MissingVector { name: &'static str },
    #[error("vector `{name}` has -inf entry at index {index}; all entries must be finite")]
    NonRegularVector { name: &'static str, index: usize },
    #[error("start-finish matrix row {row} is entirely -inf")]
    NotRowRegular { row: usize },
    #[error("start-finish matrix column {column} is entirely -inf")]
    NotColumnRegular { column: usize },
    #[error("constraints are incompatible: aggregated precedence cycle weight Tr(D) = {cycle_weight} > 0")]
    PositiveCycle { cycle_weight: f64 },
    #[error("release/deadline box is incompatible: (h⁻ ⊕ f⁻A)g = {value} > 0")]
    BoxIncompatible { value: f64 },
    #[error("objective is degenerate: spectral radius is -inf")]
    DegenerateObjective,
}

/// Outcome of validating one problem against a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub problem: Problem,
    pub violations: Vec<ValidationIssue>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "{}: valid", self.problem)?;
        } else {
            write!(f, "{}: invalid", self.problem)?;
            for v in &self.violations {
                write!(f, "\n  violation: {v}")?;
            }
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("model fails validation\n{0}")]
    Invalid(ValidationReport),
    #[error("free vector is out of bounds at index {index}")]
    OutOfBounds { index: usize },
    #[error("free vector has -inf entry at index {index}")]
    NotRegularChoice { index: usize },
    #[error("internal consistency failure: objective at instantiated schedule is {actual}, expected {expected}")]
    ObjectiveMismatch { expected: f64, actual: f64 },
    #[error("internal solver failure: {0}")]
    Internal(OptError),
}

impl From<OptError> for SolveError {
    fn from(e: OptError) -> Self {
        match e {
            OptError::OutOfBounds { index } => SolveError::OutOfBounds { index },
            OptError::NotRegularChoice { index } => SolveError::NotRegularChoice { index },
            other => SolveError::Internal(other),
        }
    }
}

/// A concrete schedule: start and finish vectors with the achieved objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub problem: Problem,
    pub start: TropicalVector,
    pub finish: TropicalVector,
    pub objective: TropicalScalar,
}

/// The full parametric solution of one scheduling problem: an optimal
/// objective value, a family `x = G u` over the free vector, and a canonical
/// default member.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleFamily {
    problem: Problem,
    objective: TropicalScalar,
    family: SolutionFamily,
    model: ProjectModel,
    default_choice: TropicalVector,
}

impl ScheduleFamily {
    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn objective(&self) -> TropicalScalar {
        self.objective
    }

    pub fn family(&self) -> &SolutionFamily {
        &self.family
    }

    pub fn model(&self) -> &ProjectModel {
        &self.model
    }

    /// The canonical choice of the free vector: the maximum solution where
    /// the problem has one, the maximal scale for the finish-spread ray, and
    /// the lower bound for cone and box families.
    pub fn default_choice(&self) -> &TropicalVector {
        &self.default_choice
    }

    pub fn default_schedule(&self) -> Result<Schedule, SolveError> {
        self.instantiate(&self.default_choice.clone())
    }

    /// Builds the schedule `x = G u`, `y = A x` for a choice of the free
    /// vector, re-evaluating the objective as an internal consistency check.
    pub fn instantiate(&self, u: &TropicalVector) -> Result<Schedule, SolveError> {
        let start = self.family.instantiate(u)?;
        let finish = self.model.finish_times(&start);
        let achieved = tropical_objective(self.problem, &self.model, &start, &finish);
        if (achieved.value() - self.objective.value()).abs() > FLOAT_TOLERANCE {
            return Err(SolveError::ObjectiveMismatch {
                expected: self.objective.value(),
                actual: achieved.value(),
            });
        }
        Ok(Schedule { problem: self.problem, start, finish, objective: self.objective })
    }
}

/// Objective value of a schedule in max-plus terms.
fn tropical_objective(
    problem: Problem,
    model: &ProjectModel,
    x: &TropicalVector,
    y: &TropicalVector,
) -> TropicalScalar {
    match problem {
        Problem::DueDateDeviation => {
            let d = model.due_dates().expect("validated: due dates present");
            d.conjugate().dot(y).oplus(y.conjugate().dot(d))
        }
        Problem::FinishSpread => y.max_entry().otimes(y.conjugate().max_entry()),
        Problem::FlowTime => x.conjugate().dot(y),
        Problem::Makespan => y.max_entry().otimes(x.conjugate().max_entry()),
    }
}

fn validated(model: &ProjectModel, problem: Problem) -> Result<(), SolveError> {
    let report = model.validate(problem);
    if report.is_valid() {
        Ok(())
    } else {
        Err(SolveError::Invalid(report))
    }
}

/// Minimizes the maximum deviation of finish times from due dates, subject to
/// all precedence constraints. Returns the entrywise-latest optimal schedule
/// as a point family.
pub fn solve_due_date_deviation(model: &ProjectModel) -> Result<ScheduleFamily, SolveError> {
    validated(model, Problem::DueDateDeviation)?;
    let d = model.due_dates().expect("validated").clone();
    // Validation has ruled out positive cycles, so the closure exists.
    let star = model
        .combined_precedence()
        .star()
        .map_err(|e| SolveError::Internal(OptError::Infeasible(e)))?;
    let reduced = model.start_finish().otimes(&star);
    let opt = tropopt::min_span_deviation(&reduced, &d)?;
    // The generic solver yields the maximum free vector; map it through D*
    // to obtain the latest feasible start times.
    let u_max = opt.family.generator().column(0);
    let x_max = star.mul_vec(&u_max);
    let one = TropicalVector::ones(1);
    let family = SolutionFamily::new(
        FamilyKind::PointMax,
        x_max.as_column_matrix(),
        Some(one.clone()),
        Some(one.clone()),
    )?;
    finish_family(model, Problem::DueDateDeviation, opt.minimum, family, one)
}

/// Minimizes the spread between latest and earliest finish times under
/// precedence and deadline constraints. The family is a ray in one scalar
/// parameter, bounded above by the deadline-derived scale.
pub fn solve_finish_spread(model: &ProjectModel) -> Result<ScheduleFamily, SolveError> {
    validated(model, Problem::FinishSpread)?;
    let f = model.deadlines().expect("validated").clone();
    let star = model
        .combined_precedence()
        .star()
        .map_err(|e| SolveError::Internal(OptError::Infeasible(e)))?;
    let reduced = model.start_finish().otimes(&star);
    let ones = TropicalVector::ones(model.len());
    let opt = tropopt::min_range_ratio(&reduced, &reduced, &ones, &ones)?;
    let direction = star.mul_vec(&opt.family.generator().column(0));
    let alpha_max = f
        .conjugate()
        .mul_mat(&reduced)
        .dot(&opt.family.generator().column(0))
        .inverse()
        .map_err(|_| SolveError::Internal(OptError::InternalInversion))?;
    let family = SolutionFamily::new(
        FamilyKind::RayScaled,
        direction.as_column_matrix(),
        None,
        Some(TropicalVector::from_scalars(vec![alpha_max])),
    )?;
    let default_choice = TropicalVector::from_scalars(vec![alpha_max]);
    finish_family(model, Problem::FinishSpread, opt.minimum, family, default_choice)
}

/// Minimizes the maximum flow-time under precedence and release-time
/// constraints. All optimal schedules form the cone `x = (θ⁻¹A ⊕ D)* u`
/// with `u` at least the release times.
pub fn solve_flow_time(model: &ProjectModel) -> Result<ScheduleFamily, SolveError> {
    validated(model, Problem::FlowTime)?;
    let g = model.release_times().expect("validated").clone();
    let d = model.combined_precedence();
    let opt = tropopt::min_rayleigh_constrained(model.start_finish(), &d, &g)?;
    finish_family(model, Problem::FlowTime, opt.minimum, opt.family, g)
}

/// Minimizes the makespan under start-finish, release-time, release-deadline
/// and deadline constraints. All optimal schedules form a box family over the
/// free vector.
pub fn solve_makespan(model: &ProjectModel) -> Result<ScheduleFamily, SolveError> {
    validated(model, Problem::Makespan)?;
    let a = model.start_finish();
    let n = model.len();
    let g = model.release_times().expect("validated").clone();
    let h = model.release_deadlines().expect("validated");
    let f = model.deadlines().expect("validated");
    let ones = TropicalVector::ones(n);

    let row = ones.mul_mat(a); // 1ᵀA
    // The release-deadline and deadline constraints combine into one upper
    // bound x <= (h⁻ ⊕ f⁻A)⁻, and that combined bound is what enters the
    // minimum: θ = 1ᵀA(I ⊕ g(h⁻ ⊕ f⁻A))1. Using h alone undershoots
    // whenever deadlines bind.
    let combined_upper_conj = h.conjugate().oplus(&f.conjugate().mul_mat(a)); // h⁻ ⊕ f⁻A
    let reach = TropicalMatrix::identity(n).oplus(&g.outer(&combined_upper_conj));
    let theta = row.mul_mat(&reach).dot(&ones);
    let theta_inv = theta.inverse().map_err(|_| SolveError::Internal(OptError::InternalInversion))?;
    let generator = TropicalMatrix::identity(n).oplus(&ones.outer(&row).scale(theta_inv)); // I ⊕ θ⁻¹11ᵀA
    let upper = combined_upper_conj.mul_mat(&generator).conjugate(); // ((h⁻ ⊕ f⁻A)(I ⊕ θ⁻¹11ᵀA))⁻
    let family = SolutionFamily::new(FamilyKind::Box, generator, Some(g.clone()), Some(upper))?;
    finish_family(model, Problem::Makespan, theta, family, g)
}

fn finish_family(
    model: &ProjectModel,
    problem: Problem,
    objective: TropicalScalar,
    family: SolutionFamily,
    default_choice: TropicalVector,
) -> Result<ScheduleFamily, SolveError> {
    let out = ScheduleFamily {
        problem,
        objective,
        family,
        model: model.clone(),
        default_choice,
    };
    // Instantiating the default member re-checks the objective.
    out.default_schedule()?;
    Ok(out)
}

/// Solves any of the four problems, dispatching on `problem`.
pub fn solve(model: &ProjectModel, problem: Problem) -> Result<ScheduleFamily, SolveError> {
    match problem {
        Problem::DueDateDeviation => solve_due_date_deviation(model),
        Problem::FinishSpread => solve_finish_spread(model),
        Problem::FlowTime => solve_flow_time(model),
        Problem::Makespan => solve_makespan(model),
    }
}
