//! Closed-form solutions of the vector inequalities `A x <= d` and `A x <= x`.
//!
//! The first has a greatest solution obtained by conjugate transposition; the
//! second is solved completely by the Kleene star: every regular solution is
//! `A* u` for a regular `u`, and none exists when the matrix has a positive
//! cycle.

use thiserror::Error;

use crate::matrix::{ClosureError, TropicalMatrix, TropicalVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinSysError {
    #[error("matrix column {0} is entirely -inf; the solution set is unbounded")]
    NotColumnRegular(usize),
    #[error("right-hand side entry {0} is -inf; a regular bound is required")]
    NotRegularBound(usize),
    #[error(transparent)]
    Infeasible(#[from] ClosureError),
}

/// All regular solutions of `A x <= x`, described as `x = G u` over regular
/// `u`, where the generator `G` is a Kleene star.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSolution {
    generator: TropicalMatrix,
}

impl ConeSolution {
    /// The star matrix `G`; `G >= I` entrywise.
    pub fn generator(&self) -> &TropicalMatrix {
        &self.generator
    }

    /// The solution `G ⊗ u` for a choice of the free vector.
    pub fn instantiate(&self, u: &TropicalVector) -> TropicalVector {
        self.generator.mul_vec(u)
    }
}

/// Greatest solution of `A x <= d`: the vector `(d⁻ A)⁻`. Every `x` below it
/// satisfies the inequality, and no larger vector does.
///
/// Requires a column-regular `A` (otherwise some coordinate is unbounded) and
/// a regular `d`.
pub fn greatest_solution(a: &TropicalMatrix, d: &TropicalVector) -> Result<TropicalVector, LinSysError> {
    if let Some(j) = a.first_zero_column() {
        return Err(LinSysError::NotColumnRegular(j));
    }
    if let Some(i) = d.first_zero() {
        return Err(LinSysError::NotRegularBound(i));
    }
    Ok(d.conjugate().mul_mat(a).conjugate())
}

/// Complete solution of `A x <= x` for square `A`: the cone generated by
/// `A*` when the trace sum is at most `0`, otherwise an infeasibility error
/// carrying the positive cycle weight.
pub fn solution_cone(a: &TropicalMatrix) -> Result<ConeSolution, LinSysError> {
    let generator = a.star()?;
    Ok(ConeSolution { generator })
}
