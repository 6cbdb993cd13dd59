//! Dense matrices and vectors over the max-plus semifield.
//!
//! Storage is row-major `Vec<TropicalScalar>`; the problem sizes in scope do
//! not justify sparsity. Shape mismatches are programmer errors and panic;
//! data-level conditions (regularity, closure existence) are reported as
//! typed errors.

use std::fmt;

use thiserror::Error;

use crate::semifield::TropicalScalar;
use crate::FLOAT_TOLERANCE;

/// The Kleene star does not exist: the matrix has a cycle of positive weight.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("no regular solution exists: positive cycle weight {cycle_weight}")]
pub struct ClosureError {
    /// The offending value of the trace sum `tr A ⊕ … ⊕ tr Aⁿ`.
    pub cycle_weight: f64,
}

/// Dense matrix over the max-plus semifield.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TropicalScalar>,
}

impl TropicalMatrix {
    /// Matrix with every entry `-inf` (the additive zero matrix).
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![TropicalScalar::zero(); rows * cols] }
    }

    /// Identity: `0` on the diagonal, `-inf` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, TropicalScalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TropicalScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows of raw values; `f64::NEG_INFINITY` stands for
    /// the scalar zero. Panics on ragged input or NaN/+inf entries.
    pub fn from_rows_f64(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged rows in matrix literal");
            data.extend(row.iter().map(|&v| TropicalScalar::new(v)));
        }
        Self { rows: n_rows, cols: n_cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> TropicalScalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropicalScalar) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j] = v;
    }

    /// Entrywise maximum. Panics on shape mismatch.
    pub fn oplus(&self, rhs: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix addition requires equal shapes"
        );
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a.oplus(b))
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Max-plus matrix product. Panics when inner dimensions disagree.
    pub fn otimes(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product requires matching inner dimensions");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = k * rhs.cols;
                for j in 0..rhs.cols {
                    let v = a.otimes(rhs.data[row + j]);
                    let e = &mut out.data[i * rhs.cols + j];
                    *e = e.oplus(v);
                }
            }
        }
        out
    }

    /// Scalar multiple `c ⊗ A` (adds `c` to every finite entry).
    pub fn scale(&self, c: TropicalScalar) -> Self {
        let data = self.data.iter().map(|&a| a.otimes(c)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Multiplicative conjugate transpose: entry `(i, j)` is the inverse of
    /// entry `(j, i)`, with `-inf` left fixed.
    pub fn conjugate_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| {
            let a = self.get(j, i);
            if a.is_zero() {
                a
            } else {
                a.inverse().expect("finite scalar always has an inverse")
            }
        })
    }

    /// `A ⊗ x` for a column vector. Panics on length mismatch.
    pub fn mul_vec(&self, x: &TropicalVector) -> TropicalVector {
        assert_eq!(self.cols, x.len(), "matrix-vector product requires matching dimensions");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = TropicalScalar::zero();
            for j in 0..self.cols {
                acc = acc.oplus(self.data[i * self.cols + j].otimes(x.get(j)));
            }
            out.push(acc);
        }
        TropicalVector::from_scalars(out)
    }

    pub fn column(&self, j: usize) -> TropicalVector {
        assert!(j < self.cols, "column index out of range");
        TropicalVector::from_scalars((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// `⊕` of the diagonal. Panics on non-square input.
    pub fn trace(&self) -> TropicalScalar {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).fold(TropicalScalar::zero(), |acc, i| acc.oplus(self.get(i, i)))
    }

    /// Iterated product `A^k`, with `A^0 = I`. Panics on non-square input.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "matrix power requires a square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.otimes(self);
        }
        acc
    }

    /// `tr A ⊕ tr A² ⊕ … ⊕ tr Aⁿ`: the maximum weight over closed walks of
    /// length at most `n`. Non-positive exactly when no cycle has positive
    /// weight. Panics on non-square input.
    pub fn trace_sum(&self) -> TropicalScalar {
        assert!(self.is_square(), "trace sum requires a square matrix");
        let mut acc = TropicalScalar::zero();
        let mut p = self.clone();
        for _ in 0..self.rows {
            acc = acc.oplus(p.trace());
            p = p.otimes(self);
        }
        acc
    }

    /// Maximum cycle mean `λ = ⊕_{k=1..n} tr^(1/k)(A^k)`, the largest
    /// eigenvalue. Panics on non-square input.
    pub fn spectral_radius(&self) -> TropicalScalar {
        assert!(self.is_square(), "spectral radius requires a square matrix");
        let mut acc = TropicalScalar::zero();
        let mut p = self.clone();
        for k in 1..=self.rows {
            acc = acc.oplus(p.trace().root(k as u32));
            if k < self.rows {
                p = p.otimes(self);
            }
        }
        acc
    }

    /// Kleene star `A* = I ⊕ A ⊕ … ⊕ A^(n-1)`, the closure generating all
    /// solutions of `A x <= x`. Exists only when the trace sum is at most `0`
    /// (a small positive tolerance admits the boundary case); otherwise the
    /// positive cycle weight is reported.
    ///
    /// Computed by repeated squaring of `I ⊕ A`, which agrees with the power
    /// sum by idempotency.
    pub fn star(&self) -> Result<Self, ClosureError> {
        assert!(self.is_square(), "star requires a square matrix");
        let tr = self.trace_sum();
        if tr.value() > FLOAT_TOLERANCE {
            return Err(ClosureError { cycle_weight: tr.value() });
        }
        let n = self.rows;
        let mut acc = Self::identity(n).oplus(self);
        let mut exponent = 1usize;
        while exponent < n.saturating_sub(1) {
            acc = acc.otimes(&acc);
            exponent *= 2;
        }
        Ok(acc)
    }

    /// Index of the first all-`-inf` row, if any.
    pub fn first_zero_row(&self) -> Option<usize> {
        (0..self.rows).find(|&i| (0..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// Index of the first all-`-inf` column, if any.
    pub fn first_zero_column(&self) -> Option<usize> {
        (0..self.cols).find(|&j| (0..self.rows).all(|i| self.get(i, j).is_zero()))
    }

    pub fn is_row_regular(&self) -> bool {
        self.first_zero_row().is_none()
    }

    pub fn is_column_regular(&self) -> bool {
        self.first_zero_column().is_none()
    }

    /// Both row- and column-regular.
    pub fn is_regular(&self) -> bool {
        self.is_row_regular() && self.is_column_regular()
    }

    /// Some entry is finite.
    pub fn is_nonzero(&self) -> bool {
        self.data.iter().any(|s| s.is_finite())
    }

    /// Entrywise `<=`.
    pub fn le(&self, rhs: &Self) -> bool {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "comparison requires equal shapes");
        self.data.iter().zip(&rhs.data).all(|(a, b)| a <= b)
    }

    /// Raw row-major entries as `f64` (`-inf` for the scalar zero).
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).value()).collect())
            .collect()
    }

    /// Largest absolute value among finite entries, or `0` if none.
    pub fn max_abs_finite(&self) -> f64 {
        self.data
            .iter()
            .filter(|s| s.is_finite())
            .map(|s| s.value().abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Dense column vector over the max-plus semifield.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalVector {
    data: Vec<TropicalScalar>,
}

impl TropicalVector {
    pub fn from_scalars(data: Vec<TropicalScalar>) -> Self {
        Self { data }
    }

    /// Builds a vector from raw values; `f64::NEG_INFINITY` stands for the
    /// scalar zero.
    pub fn from_f64(values: &[f64]) -> Self {
        Self { data: values.iter().map(|&v| TropicalScalar::new(v)).collect() }
    }

    /// All entries `-inf`.
    pub fn zero(n: usize) -> Self {
        Self { data: vec![TropicalScalar::zero(); n] }
    }

    /// The all-ones vector (every entry the multiplicative identity `0`).
    pub fn ones(n: usize) -> Self {
        Self { data: vec![TropicalScalar::one(); n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> TropicalScalar {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, v: TropicalScalar) {
        self.data[i] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = TropicalScalar> + '_ {
        self.data.iter().copied()
    }

    /// No entry is `-inf`.
    pub fn is_regular(&self) -> bool {
        self.first_zero().is_none()
    }

    /// Some entry is finite.
    pub fn is_nonzero(&self) -> bool {
        self.data.iter().any(|s| s.is_finite())
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.data.iter().position(|s| s.is_zero())
    }

    /// Entrywise maximum.
    pub fn oplus(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len(), "vector addition requires equal lengths");
        Self {
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a.oplus(b)).collect(),
        }
    }

    /// Scalar multiple `c ⊗ x`.
    pub fn scale(&self, c: TropicalScalar) -> Self {
        Self { data: self.data.iter().map(|&a| a.otimes(c)).collect() }
    }

    /// Multiplicative conjugate: entrywise inverse with `-inf` left fixed.
    /// The result is read as a row vector wherever it is multiplied from the
    /// left.
    pub fn conjugate(&self) -> Self {
        Self {
            data: self
                .data
                .iter()
                .map(|&a| if a.is_zero() { a } else { a.inverse().expect("finite") })
                .collect(),
        }
    }

    /// Row-vector times matrix: `xᵀ ⊗ A`. Panics on length mismatch.
    pub fn mul_mat(&self, a: &TropicalMatrix) -> Self {
        assert_eq!(self.len(), a.rows(), "vector-matrix product requires matching dimensions");
        let mut out = vec![TropicalScalar::zero(); a.cols()];
        for i in 0..self.len() {
            let x = self.data[i];
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.oplus(x.otimes(a.get(i, j)));
            }
        }
        Self { data: out }
    }

    /// Inner product `⊕_i x_i ⊗ y_i` (row times column).
    pub fn dot(&self, rhs: &Self) -> TropicalScalar {
        assert_eq!(self.len(), rhs.len(), "inner product requires equal lengths");
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(TropicalScalar::zero(), |acc, (&a, &b)| acc.oplus(a.otimes(b)))
    }

    /// Outer product `x ⊗ yᵀ`.
    pub fn outer(&self, rhs: &Self) -> TropicalMatrix {
        TropicalMatrix::from_fn(self.len(), rhs.len(), |i, j| self.data[i].otimes(rhs.data[j]))
    }

    /// Entrywise `<=`.
    pub fn le(&self, rhs: &Self) -> bool {
        assert_eq!(self.len(), rhs.len(), "comparison requires equal lengths");
        self.data.iter().zip(&rhs.data).all(|(a, b)| a <= b)
    }

    /// Entrywise `<=` up to an additive slack on the right.
    pub fn le_with_slack(&self, rhs: &Self, slack: f64) -> bool {
        assert_eq!(self.len(), rhs.len(), "comparison requires equal lengths");
        self.data
            .iter()
            .zip(&rhs.data)
            .all(|(a, b)| a.value() <= b.value() + slack)
    }

    pub fn max_entry(&self) -> TropicalScalar {
        self.data.iter().copied().fold(TropicalScalar::zero(), TropicalScalar::oplus)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|s| s.value()).collect()
    }

    /// Reads the vector as an `n×1` matrix.
    pub fn as_column_matrix(&self) -> TropicalMatrix {
        TropicalMatrix::from_fn(self.len(), 1, |i, _| self.data[i])
    }
}

impl fmt::Display for TropicalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}
