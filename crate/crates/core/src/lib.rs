//! Max-plus (tropical) linear algebra with closed-form minimax solvers, applied
//! to time-constrained project scheduling.
//!
//! The crate is organized bottom-up:
//!
//! * [`semifield`] — scalar arithmetic of the idempotent semifield
//!   `(R ∪ {-inf}, max, +)`.
//! * [`matrix`] — dense matrices and vectors over that semifield: addition,
//!   multiplication, conjugate transposition, traces, Kleene star, spectral
//!   radius.
//! * [`linsys`] — closed-form solutions of the vector inequalities
//!   `A x <= d` and `A x <= x`.
//! * [`tropopt`] — four generic minimax optimization solvers returning the
//!   minimum together with a parametric family of optimal solutions.
//! * [`scheduling`] — project models (start-finish / start-start /
//!   finish-start lags, release times, deadlines, due dates) and the four
//!   scheduling solvers built on top of `tropopt`.
//! * [`oracle`] — independent brute-force verification by exhaustive grid
//!   search and direct constraint/objective evaluation in conventional
//!   arithmetic.

pub mod linsys;
pub mod matrix;
pub mod oracle;
pub mod scheduling;
pub mod semifield;
pub mod tropopt;

pub use matrix::{TropicalMatrix, TropicalVector};
pub use scheduling::{Problem, ProjectModel, Schedule, ScheduleFamily};
pub use semifield::TropicalScalar;
pub use tropopt::{FamilyKind, OptResult, SolutionFamily};

/// Comparison slack used wherever k-th roots (float division) can introduce
/// rounding noise. Pure `max`/`+` arithmetic is exact and is compared exactly.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
