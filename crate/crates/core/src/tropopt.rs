//! Generic minimax optimization over the max-plus semifield.
//!
//! Four closed-form solvers, each returning the minimum objective value
//! together with a parametric family describing optimal solutions:
//!
//! * [`min_span_deviation`] — minimize `d⁻Ax ⊕ (Ax)⁻d`, the two-sided
//!   deviation of `Ax` from a target `d`.
//! * [`min_range_ratio`] — minimize `q⁻Bx (Ax)⁻p`.
//! * [`min_rayleigh_constrained`] — minimize `x⁻Ax` subject to
//!   `Bx ⊕ g <= x`.
//! * [`min_rayleigh_box`] — minimize `x⁻Ax` subject to `g <= x <= h`.
//!
//! The constrained minimum of `x⁻Ax` is computed by
//! [`constrained_spectral_radius`], an `O(n^5)` two-index recurrence over
//! sums of mixed matrix products; the exponential word enumeration survives
//! only in the verification oracle.

use thiserror::Error;

use crate::matrix::{ClosureError, TropicalMatrix, TropicalVector};
use crate::semifield::TropicalScalar;
use crate::FLOAT_TOLERANCE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error("matrix row {0} is entirely -inf")]
    NotRowRegular(usize),
    #[error("matrix column {0} is entirely -inf")]
    NotColumnRegular(usize),
    #[error("vector `{name}` has -inf entry at index {index}; a regular vector is required")]
    NotRegularVector { name: &'static str, index: usize },
    #[error("vector `{name}` is entirely -inf; a nonzero vector is required")]
    ZeroVector { name: &'static str },
    #[error("constraints are incompatible: {0}")]
    Infeasible(#[from] ClosureError),
    #[error("objective is degenerate: the matrix has spectral radius -inf")]
    DegenerateObjective,
    #[error("solution family is empty: lower bound exceeds upper bound at index {index}")]
    EmptyFamily { index: usize },
    #[error("box is empty: h⁻g = {margin} > 0, so g does not fit below h")]
    EmptyBox { margin: f64 },
    #[error("free vector is out of bounds at index {index}")]
    OutOfBounds { index: usize },
    #[error("free vector has -inf entry at index {index}; a regular choice is required")]
    NotRegularChoice { index: usize },
    #[error("internal error: attempted to invert -inf while forming a generator")]
    InternalInversion,
}

/// Shape of a solution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// A single distinguished point, the entrywise-maximum solution.
    PointMax,
    /// A ray scaled by one free scalar.
    RayScaled,
    /// A cone `G u` with the free vector bounded from below only.
    Cone,
    /// A box: the free vector is bounded on both sides.
    Box,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::PointMax => "point-max",
            FamilyKind::RayScaled => "ray-scaled",
            FamilyKind::Cone => "cone",
            FamilyKind::Box => "box",
        }
    }
}

/// Parametric family of optimal solutions `x = G u`, with optional bounds on
/// the free vector `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    kind: FamilyKind,
    generator: TropicalMatrix,
    lower: Option<TropicalVector>,
    upper: Option<TropicalVector>,
}

impl SolutionFamily {
    pub fn new(
        kind: FamilyKind,
        generator: TropicalMatrix,
        lower: Option<TropicalVector>,
        upper: Option<TropicalVector>,
    ) -> Result<Self, OptError> {
        let free_dim = generator.cols();
        if let Some(b) = &lower {
            assert_eq!(b.len(), free_dim, "lower bound length must match generator columns");
        }
        if let Some(b) = &upper {
            assert_eq!(b.len(), free_dim, "upper bound length must match generator columns");
        }
        if let (Some(lo), Some(hi)) = (&lower, &upper) {
            for i in 0..free_dim {
                if lo.get(i).value() > hi.get(i).value() + FLOAT_TOLERANCE {
                    return Err(OptError::EmptyFamily { index: i });
                }
            }
        }
        Ok(Self { kind, generator, lower, upper })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn generator(&self) -> &TropicalMatrix {
        &self.generator
    }

    pub fn lower(&self) -> Option<&TropicalVector> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&TropicalVector> {
        self.upper.as_ref()
    }

    /// Dimension of the free vector `u`.
    pub fn free_dim(&self) -> usize {
        self.generator.cols()
    }

    /// Checks that `u` is regular and within the family bounds (with a small
    /// slack where roots may have introduced rounding), then returns `G u`.
    pub fn instantiate(&self, u: &TropicalVector) -> Result<TropicalVector, OptError> {
        assert_eq!(u.len(), self.free_dim(), "free vector length must match generator columns");
        if let Some(i) = u.first_zero() {
            return Err(OptError::NotRegularChoice { index: i });
        }
        if let Some(lo) = &self.lower {
            for i in 0..u.len() {
                if u.get(i).value() < lo.get(i).value() - FLOAT_TOLERANCE {
                    return Err(OptError::OutOfBounds { index: i });
                }
            }
        }
        if let Some(hi) = &self.upper {
            for i in 0..u.len() {
                if u.get(i).value() > hi.get(i).value() + FLOAT_TOLERANCE {
                    return Err(OptError::OutOfBounds { index: i });
                }
            }
        }
        Ok(self.generator.mul_vec(u))
    }
}

/// Minimum value plus the family of solutions attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub minimum: TropicalScalar,
    pub family: SolutionFamily,
}

fn require_row_regular(a: &TropicalMatrix) -> Result<(), OptError> {
    match a.first_zero_row() {
        Some(i) => Err(OptError::NotRowRegular(i)),
        None => Ok(()),
    }
}

fn require_column_regular(a: &TropicalMatrix) -> Result<(), OptError> {
    match a.first_zero_column() {
        Some(j) => Err(OptError::NotColumnRegular(j)),
        None => Ok(()),
    }
}

fn require_regular(v: &TropicalVector, name: &'static str) -> Result<(), OptError> {
    match v.first_zero() {
        Some(i) => Err(OptError::NotRegularVector { name, index: i }),
        None => Ok(()),
    }
}

/// Minimizes `d⁻Ax ⊕ (Ax)⁻d` over regular `x`.
///
/// The minimum is `Δ = ((A(d⁻A)⁻)⁻ d)^(1/2)` and the entrywise-maximum
/// solution is `Δ (d⁻A)⁻`, returned as a degenerate point family.
pub fn min_span_deviation(a: &TropicalMatrix, d: &TropicalVector) -> Result<OptResult, OptError> {
    assert_eq!(a.rows(), d.len(), "target vector length must match matrix rows");
    require_row_regular(a)?;
    // A column of -inf would leave that coordinate of the maximum solution
    // unbounded, so no regular maximum exists.
    require_column_regular(a)?;
    require_regular(d, "d")?;

    let bound = d.conjugate().mul_mat(a).conjugate(); // (d⁻A)⁻
    let delta_sq = a.mul_vec(&bound).conjugate().dot(d); // (A(d⁻A)⁻)⁻ d
    let minimum = delta_sq.root(2);
    let x_max = bound.scale(minimum);
    let one = TropicalVector::ones(1);
    let family = SolutionFamily::new(
        FamilyKind::PointMax,
        x_max.as_column_matrix(),
        Some(one.clone()),
        Some(one),
    )?;
    Ok(OptResult { minimum, family })
}

/// Minimizes `q⁻Bx (Ax)⁻p` over regular `x`.
///
/// The minimum is `Δ = (A(q⁻B)⁻)⁻ p`, attained along the ray
/// `x = α (q⁻B)⁻` for any finite `α`. The family describes the attaining
/// ray; the theorem does not claim it exhausts all minimizers.
pub fn min_range_ratio(
    a: &TropicalMatrix,
    b: &TropicalMatrix,
    p: &TropicalVector,
    q: &TropicalVector,
) -> Result<OptResult, OptError> {
    assert_eq!(a.rows(), b.rows(), "matrices must have the same shape");
    assert_eq!(a.cols(), b.cols(), "matrices must have the same shape");
    assert_eq!(p.len(), a.rows(), "vector p length must match matrix rows");
    assert_eq!(q.len(), a.rows(), "vector q length must match matrix rows");
    require_row_regular(a)?;
    require_column_regular(b)?;
    if !p.is_nonzero() {
        return Err(OptError::ZeroVector { name: "p" });
    }
    require_regular(q, "q")?;

    let ray = q.conjugate().mul_mat(b).conjugate(); // (q⁻B)⁻
    let minimum = a.mul_vec(&ray).conjugate().dot(p);
    let family = SolutionFamily::new(FamilyKind::RayScaled, ray.as_column_matrix(), None, None)?;
    Ok(OptResult { minimum, family })
}

/// Minimum of `x⁻Ax` over regular `x` with `Bx <= x`: the spectral radius of
/// `A` joined with k-th roots of traces of all mixed products
/// `A B^(i₁) ⋯ A B^(i_k)` with `1 <= i₁+…+i_k <= n-k`.
///
/// Computed via the recurrence `T(k,l) = T(k-1,l)A ⊕ T(k,l-1)B` with
/// `T(k,0) = A^k` and `T(0,l) = B^l`, which costs `O(n^5)` scalar operations
/// instead of enumerating exponentially many words.
pub fn constrained_spectral_radius(a: &TropicalMatrix, b: &TropicalMatrix) -> TropicalScalar {
    assert!(a.is_square() && b.is_square(), "matrices must be square");
    assert_eq!(a.rows(), b.rows(), "matrices must have the same order");
    let n = a.rows();
    let mut theta = a.spectral_radius();
    if n <= 1 {
        return theta;
    }
    // prev[l] holds T(k-1, l); initialize row k-1 = 0 with powers of B.
    let mut prev: Vec<TropicalMatrix> = Vec::with_capacity(n);
    prev.push(TropicalMatrix::identity(n));
    for l in 1..n {
        let next = prev[l - 1].otimes(b);
        prev.push(next);
    }
    for k in 1..n {
        let width = n - k;
        let mut curr: Vec<TropicalMatrix> = Vec::with_capacity(width + 1);
        curr.push(prev[0].otimes(a)); // T(k, 0) = A^k
        for l in 1..=width {
            let t = prev[l].otimes(a).oplus(&curr[l - 1].otimes(b));
            theta = theta.oplus(t.trace().root(k as u32));
            curr.push(t);
        }
        prev = curr;
    }
    theta
}

/// Minimizes `x⁻Ax` subject to `Bx ⊕ g <= x`, over regular `x`.
///
/// All solutions form the cone `x = (θ⁻¹A ⊕ B)* u` with `u >= g`, where
/// `θ` is the constrained spectral radius.
pub fn min_rayleigh_constrained(
    a: &TropicalMatrix,
    b: &TropicalMatrix,
    g: &TropicalVector,
) -> Result<OptResult, OptError> {
    assert!(a.is_square() && b.is_square(), "matrices must be square");
    assert_eq!(a.rows(), b.rows(), "matrices must have the same order");
    assert_eq!(g.len(), a.rows(), "lower bound length must match matrix order");
    if a.spectral_radius().is_zero() {
        return Err(OptError::DegenerateObjective);
    }
    let tr_b = b.trace_sum();
    if tr_b.value() > FLOAT_TOLERANCE {
        return Err(OptError::Infeasible(ClosureError { cycle_weight: tr_b.value() }));
    }

    let theta = constrained_spectral_radius(a, b);
    let theta_inv = theta.inverse().map_err(|_| OptError::InternalInversion)?;
    let generator = a.scale(theta_inv).oplus(b).star().map_err(OptError::Infeasible)?;
    let family = SolutionFamily::new(FamilyKind::Cone, generator, Some(g.clone()), None)?;
    Ok(OptResult { minimum: theta, family })
}

/// Minimizes `x⁻Ax` subject to `g <= x <= h`, over regular `x`.
///
/// The minimum is `θ = λ ⊕ ⊕_{k=1..n-1} (h⁻A^k g)^(1/k)` and all solutions
/// form the box family `x = (θ⁻¹A)* u` with `g <= u <= (h⁻(θ⁻¹A)*)⁻`.
pub fn min_rayleigh_box(
    a: &TropicalMatrix,
    g: &TropicalVector,
    h: &TropicalVector,
) -> Result<OptResult, OptError> {
    assert!(a.is_square(), "matrix must be square");
    assert_eq!(g.len(), a.rows(), "lower bound length must match matrix order");
    assert_eq!(h.len(), a.rows(), "upper bound length must match matrix order");
    if a.spectral_radius().is_zero() {
        return Err(OptError::DegenerateObjective);
    }
    require_regular(h, "h")?;
    let margin = h.conjugate().dot(g);
    if margin.value() > FLOAT_TOLERANCE {
        return Err(OptError::EmptyBox { margin: margin.value() });
    }

    let n = a.rows();
    let h_conj = h.conjugate();
    let mut theta = a.spectral_radius();
    let mut p = a.clone();
    for k in 1..n {
        theta = theta.oplus(h_conj.mul_mat(&p).dot(g).root(k as u32));
        p = p.otimes(a);
    }

    let theta_inv = theta.inverse().map_err(|_| OptError::InternalInversion)?;
    let generator = a.scale(theta_inv).star().map_err(OptError::Infeasible)?;
    let upper = h_conj.mul_mat(&generator).conjugate();
    let family = SolutionFamily::new(FamilyKind::Box, generator, Some(g.clone()), Some(upper))?;
    Ok(OptResult { minimum: theta, family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::constrained_spectral_radius_by_enumeration;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const NI: f64 = f64::NEG_INFINITY;
    const TOL: f64 = 1e-9;

    fn example_a() -> TropicalMatrix {
        TropicalMatrix::from_rows_f64(&[&[4.0, 0.0, NI], &[1.0, 3.0, -1.0], &[0.0, -2.0, 2.0]])
    }

    fn example_d() -> TropicalMatrix {
        TropicalMatrix::from_rows_f64(&[&[-1.0, -2.0, 1.0], &[1.0, -1.0, 3.0], &[-1.0, NI, NI]])
    }

    fn example_ad_star() -> TropicalMatrix {
        example_a().otimes(&example_d().star().unwrap())
    }

    /// Conventional-arithmetic value of `(Ax)_i` for grid points.
    fn apply(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&c, &xi)| c + xi)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    /// Exhaustive minimum of `f` over the integer-step grid `[lo, hi]^n`.
    fn grid_min(lo: f64, hi: f64, step: f64, n: usize, f: impl Fn(&[f64]) -> Option<f64>) -> Option<f64> {
        let per_dim = ((hi - lo) / step).round() as usize + 1;
        let mut idx = vec![0usize; n];
        let mut best: Option<f64> = None;
        loop {
            let x: Vec<f64> = idx.iter().map(|&i| lo + i as f64 * step).collect();
            if let Some(v) = f(&x) {
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < per_dim {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn random_matrix(rng: &mut StdRng, n: usize, zero_prob: f64) -> TropicalMatrix {
        TropicalMatrix::from_fn(n, n, |_, _| {
            if rng.random_bool(zero_prob) {
                TropicalScalar::zero()
            } else {
                TropicalScalar::new(rng.random_range(-5..=5) as f64)
            }
        })
    }

    fn random_regular_vector(rng: &mut StdRng, n: usize, lo: i64, hi: i64) -> TropicalVector {
        TropicalVector::from_scalars(
            (0..n).map(|_| TropicalScalar::new(rng.random_range(lo..=hi) as f64)).collect(),
        )
    }

    #[test]
    fn span_deviation_of_worked_example() {
        // The reduced due-date problem: matrix A⊗D*, target d = (5,5,5).
        let d = TropicalVector::from_f64(&[5.0, 5.0, 5.0]);
        let res = min_span_deviation(&example_ad_star(), &d).unwrap();
        assert_eq!(res.minimum, TropicalScalar::new(2.0));
        assert_eq!(res.family.kind(), FamilyKind::PointMax);
        let x = res.family.instantiate(&TropicalVector::ones(1)).unwrap();
        assert_eq!(x, TropicalVector::from_f64(&[2.0, 4.0, 1.0]));
    }

    #[test]
    fn span_deviation_with_identity_is_zero() {
        let d = TropicalVector::from_f64(&[3.0, -1.0, 0.5]);
        let res = min_span_deviation(&TropicalMatrix::identity(3), &d).unwrap();
        assert_eq!(res.minimum, TropicalScalar::one());
        let x = res.family.instantiate(&TropicalVector::ones(1)).unwrap();
        assert_eq!(x, d);
    }

    #[test]
    fn span_deviation_matches_grid_search() {
        let mut rng = StdRng::seed_from_u64(11);
        for case in 0..20 {
            let n = 2 + case % 2;
            let mut a = random_matrix(&mut rng, n, 0.3);
            for i in 0..n {
                a.set(i, i, TropicalScalar::new(rng.random_range(0..=5) as f64));
            }
            let d = random_regular_vector(&mut rng, n, 0, 8);
            let res = min_span_deviation(&a, &d).unwrap();
            let rows = a.to_f64_rows();
            let dv = d.to_f64();
            let oracle = grid_min(-12.0, 20.0, 0.5, n, |x| {
                let y = apply(&rows, x);
                Some(
                    y.iter()
                        .zip(&dv)
                        .map(|(&yi, &di)| (yi - di).abs())
                        .fold(f64::NEG_INFINITY, f64::max),
                )
            })
            .unwrap();
            assert!(
                (res.minimum.value() - oracle).abs() <= TOL,
                "closed form {} vs grid {}",
                res.minimum,
                oracle
            );
        }
    }

    #[test]
    fn range_ratio_of_worked_example() {
        // Reduced finish-spread problem: both matrices A⊗D*, p = q = 1.
        let m = example_ad_star();
        let ones = TropicalVector::ones(3);
        let res = min_range_ratio(&m, &m, &ones, &ones).unwrap();
        assert_eq!(res.minimum, TropicalScalar::new(4.0));
        assert_eq!(res.family.kind(), FamilyKind::RayScaled);
        assert_eq!(res.family.generator().column(0), TropicalVector::from_f64(&[-5.0, -3.0, -6.0]));
    }

    #[test]
    fn range_ratio_identity_is_zero() {
        let q = TropicalVector::from_f64(&[1.0, 2.0, 0.0]);
        let id = TropicalMatrix::identity(3);
        let res = min_range_ratio(&id, &id, &q, &q).unwrap();
        assert_eq!(res.minimum, TropicalScalar::one());
    }

    #[test]
    fn range_ratio_matches_grid_search() {
        let mut rng = StdRng::seed_from_u64(23);
        for case in 0..20 {
            let n = 2 + case % 3;
            let mut a = random_matrix(&mut rng, n, 0.3);
            let mut b = random_matrix(&mut rng, n, 0.3);
            for i in 0..n {
                a.set(i, i, TropicalScalar::new(rng.random_range(0..=5) as f64));
                b.set(i, i, TropicalScalar::new(rng.random_range(-5..=5) as f64));
            }
            let p = random_regular_vector(&mut rng, n, -3, 3);
            let q = random_regular_vector(&mut rng, n, -3, 3);
            let res = min_range_ratio(&a, &b, &p, &q).unwrap();
            let (ar, br) = (a.to_f64_rows(), b.to_f64_rows());
            let (pv, qv) = (p.to_f64(), q.to_f64());
            // The objective is invariant under shifting x, so a box around the
            // origin contains an optimal representative.
            let oracle = grid_min(-15.0, 15.0, 1.0, n, |x| {
                let bx = apply(&br, x);
                let ax = apply(&ar, x);
                let first = bx.iter().zip(&qv).map(|(&v, &qi)| v - qi).fold(f64::NEG_INFINITY, f64::max);
                let second = ax.iter().zip(&pv).map(|(&v, &pi)| pi - v).fold(f64::NEG_INFINITY, f64::max);
                Some(first + second)
            })
            .unwrap();
            assert!(
                (res.minimum.value() - oracle).abs() <= TOL,
                "closed form {} vs grid {}",
                res.minimum,
                oracle
            );
        }
    }

    #[test]
    fn constrained_radius_of_worked_example() {
        assert_eq!(
            constrained_spectral_radius(&example_a(), &example_d()),
            TropicalScalar::new(4.0)
        );
    }

    #[test]
    fn constrained_radius_reduces_to_spectral_radius() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 0.4);
            let zero = TropicalMatrix::zero(4, 4);
            assert_eq!(constrained_spectral_radius(&a, &zero), a.spectral_radius());
        }
    }

    #[test]
    fn constrained_radius_matches_word_enumeration() {
        let mut rng = StdRng::seed_from_u64(31);
        for n in [2usize, 3, 4] {
            for _ in 0..25 {
                let a = random_matrix(&mut rng, n, 0.3);
                let b = random_matrix(&mut rng, n, 0.4);
                let by_recurrence = constrained_spectral_radius(&a, &b);
                let by_words = constrained_spectral_radius_by_enumeration(&a, &b);
                assert!(
                    (by_recurrence.value() - by_words.value()).abs() <= TOL
                        || (by_recurrence.is_zero() && by_words.is_zero()),
                    "recurrence {by_recurrence} vs enumeration {by_words} at n={n}"
                );
            }
        }
    }

    #[test]
    fn rayleigh_constrained_of_worked_example() {
        let g = TropicalVector::from_f64(&[2.0, 2.0, 1.0]);
        let res = min_rayleigh_constrained(&example_a(), &example_d(), &g).unwrap();
        assert_eq!(res.minimum, TropicalScalar::new(4.0));
        assert_eq!(res.family.kind(), FamilyKind::Cone);
        let expected =
            TropicalMatrix::from_rows_f64(&[&[0.0, -2.0, 1.0], &[2.0, 0.0, 3.0], &[-1.0, -3.0, 0.0]]);
        assert_eq!(res.family.generator(), &expected);
        // Default member u = g.
        let x = res.family.instantiate(&g).unwrap();
        assert_eq!(x, TropicalVector::from_f64(&[2.0, 4.0, 1.0]));
    }

    #[test]
    fn rayleigh_constrained_with_zero_constraint_matrix() {
        let g = TropicalVector::from_f64(&[1.0, 1.0, 1.0]);
        let a = example_a();
        let res = min_rayleigh_constrained(&a, &TropicalMatrix::zero(3, 3), &g).unwrap();
        assert_eq!(res.minimum, a.spectral_radius());
    }

    #[test]
    fn rayleigh_constrained_allows_partially_unconstrained_lower_bounds() {
        // A -inf entry in g leaves that coordinate of u unconstrained below.
        let a = example_a();
        let g = TropicalVector::from_f64(&[NI, 0.0, NI]);
        let res = min_rayleigh_constrained(&a, &TropicalMatrix::zero(3, 3), &g).unwrap();
        assert_eq!(res.minimum, a.spectral_radius());
        let u = TropicalVector::from_f64(&[-20.0, 3.0, -7.0]);
        let x = res.family.instantiate(&u).unwrap();
        let objective = x.conjugate().dot(&a.mul_vec(&x));
        assert!((objective.value() - res.minimum.value()).abs() <= TOL);
    }

    #[test]
    fn rayleigh_constrained_rejects_positive_cycle() {
        let mut b = TropicalMatrix::zero(3, 3);
        b.set(0, 1, TropicalScalar::new(2.0));
        b.set(1, 0, TropicalScalar::new(1.0));
        let g = TropicalVector::ones(3);
        match min_rayleigh_constrained(&example_a(), &b, &g) {
            Err(OptError::Infeasible(e)) => assert!(e.cycle_weight > 0.0),
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn rayleigh_constrained_matches_grid_search() {
        let mut rng = StdRng::seed_from_u64(47);
        let mut tested = 0;
        while tested < 15 {
            let n = 2 + tested % 2;
            let mut a = random_matrix(&mut rng, n, 0.3);
            for i in 0..n {
                a.set(i, i, TropicalScalar::new(rng.random_range(0..=4) as f64));
            }
            let b = random_matrix(&mut rng, n, 0.6);
            if b.trace_sum().value() > 0.0 {
                continue;
            }
            let g = random_regular_vector(&mut rng, n, 0, 4);
            let res = min_rayleigh_constrained(&a, &b, &g).unwrap();
            let (ar, br) = (a.to_f64_rows(), b.to_f64_rows());
            let gv = g.to_f64();
            let oracle = grid_min(0.0, 26.0, 0.5, n, |x| {
                let bx = apply(&br, x);
                for i in 0..n {
                    if bx[i].max(gv[i]) > x[i] + TOL {
                        return None;
                    }
                }
                let ax = apply(&ar, x);
                Some(
                    ax.iter()
                        .zip(x)
                        .map(|(&yi, &xi)| yi - xi)
                        .fold(f64::NEG_INFINITY, f64::max),
                )
            })
            .unwrap();
            assert!(
                (res.minimum.value() - oracle).abs() <= TOL,
                "closed form {} vs grid {}",
                res.minimum,
                oracle
            );
            tested += 1;
        }
    }

    #[test]
    fn rayleigh_box_point_box_returns_objective_at_point() {
        let a = example_a();
        let x0 = TropicalVector::from_f64(&[2.0, 2.0, 2.0]);
        let res = min_rayleigh_box(&a, &x0, &x0).unwrap();
        // Box is the single point x0, so the minimum is x0⁻ A x0.
        let obj = x0.conjugate().dot(&a.mul_vec(&x0));
        assert_eq!(res.minimum, obj);
        let x = res.family.instantiate(&x0).unwrap();
        assert_eq!(x, x0);
    }

    #[test]
    fn rayleigh_box_rejects_crossed_bounds() {
        let a = example_a();
        let g = TropicalVector::from_f64(&[3.0, 0.0, 0.0]);
        let h = TropicalVector::from_f64(&[2.0, 5.0, 5.0]);
        match min_rayleigh_box(&a, &g, &h) {
            Err(OptError::EmptyBox { margin }) => assert!((margin - 1.0).abs() < 1e-12),
            other => panic!("expected empty box, got {other:?}"),
        }
    }

    #[test]
    fn rayleigh_box_matches_grid_search() {
        let mut rng = StdRng::seed_from_u64(61);
        for case in 0..20 {
            let n = 2 + case % 2;
            let mut a = random_matrix(&mut rng, n, 0.3);
            for i in 0..n {
                a.set(i, i, TropicalScalar::new(rng.random_range(0..=4) as f64));
            }
            let g = random_regular_vector(&mut rng, n, 0, 3);
            let h = TropicalVector::from_scalars(
                (0..n)
                    .map(|i| g.get(i).otimes(TropicalScalar::new(rng.random_range(0..=4) as f64)))
                    .collect(),
            );
            let res = min_rayleigh_box(&a, &g, &h).unwrap();
            let ar = a.to_f64_rows();
            let (gv, hv) = (g.to_f64(), h.to_f64());
            let oracle = grid_min(0.0, 7.0, 0.5, n, |x| {
                for i in 0..n {
                    if x[i] < gv[i] - TOL || x[i] > hv[i] + TOL {
                        return None;
                    }
                }
                let ax = apply(&ar, x);
                Some(
                    ax.iter()
                        .zip(x)
                        .map(|(&yi, &xi)| yi - xi)
                        .fold(f64::NEG_INFINITY, f64::max),
                )
            })
            .unwrap();
            assert!(
                (res.minimum.value() - oracle).abs() <= TOL,
                "closed form {} vs grid {}",
                res.minimum,
                oracle
            );
        }
    }

    #[test]
    fn rayleigh_box_solves_the_rank_one_reduction() {
        // The makespan objective collapses to x⁻(11ᵀA)x over the box
        // [g, (h⁻ ⊕ f⁻A)⁻]; on the worked project this minimum is 4.
        let a = example_a();
        let ones = TropicalVector::ones(3);
        let rank_one = ones.outer(&ones.mul_mat(&a)); // 11ᵀA
        let g = TropicalVector::from_f64(&[2.0, 2.0, 1.0]);
        let h = TropicalVector::from_f64(&[3.0, 3.0, 2.0]);
        let f = TropicalVector::from_f64(&[6.0, 6.0, 6.0]);
        let combined = h.conjugate().oplus(&f.conjugate().mul_mat(&a)).conjugate();
        assert_eq!(combined, TropicalVector::from_f64(&[2.0, 3.0, 2.0]));
        let res = min_rayleigh_box(&rank_one, &g, &combined).unwrap();
        assert_eq!(res.minimum, TropicalScalar::new(4.0));
        assert_eq!(res.family.lower().unwrap(), &g);
        assert_eq!(res.family.upper().unwrap(), &TropicalVector::from_f64(&[2.0, 3.0, 2.0]));
    }

    #[test]
    fn rayleigh_box_monotone_under_box_growth() {
        let mut rng = StdRng::seed_from_u64(73);
        for _ in 0..20 {
            let mut a = random_matrix(&mut rng, 3, 0.3);
            for i in 0..3 {
                a.set(i, i, TropicalScalar::new(rng.random_range(0..=4) as f64));
            }
            let g = random_regular_vector(&mut rng, 3, 2, 4);
            let h = TropicalVector::from_scalars(
                (0..3)
                    .map(|i| g.get(i).otimes(TropicalScalar::new(rng.random_range(0..=3) as f64)))
                    .collect(),
            );
            let theta = min_rayleigh_box(&a, &g, &h).unwrap().minimum;
            let wider_g = g.scale(TropicalScalar::new(-1.0));
            let wider_h = h.scale(TropicalScalar::new(1.0));
            let theta_wide = min_rayleigh_box(&a, &wider_g, &wider_h).unwrap().minimum;
            assert!(
                theta_wide.value() <= theta.value() + TOL,
                "enlarging the box increased the minimum: {theta} -> {theta_wide}"
            );
        }
    }

    #[test]
    fn family_instantiation_respects_bounds() {
        let g = TropicalVector::from_f64(&[2.0, 2.0, 1.0]);
        let res = min_rayleigh_constrained(&example_a(), &example_d(), &g).unwrap();
        let below = TropicalVector::from_f64(&[1.0, 2.0, 1.0]);
        assert_eq!(res.family.instantiate(&below), Err(OptError::OutOfBounds { index: 0 }));
        let irregular = TropicalVector::from_f64(&[2.0, NI, 1.0]);
        assert_eq!(res.family.instantiate(&irregular), Err(OptError::NotRegularChoice { index: 1 }));
    }

    #[test]
    fn optimality_certificate_across_random_members() {
        // Every instantiated member of a cone family is feasible and attains
        // the minimum.
        let mut rng = StdRng::seed_from_u64(97);
        let g = TropicalVector::from_f64(&[2.0, 2.0, 1.0]);
        let a = example_a();
        let d = example_d();
        let res = min_rayleigh_constrained(&a, &d, &g).unwrap();
        for _ in 0..20 {
            let u = TropicalVector::from_scalars(
                (0..3)
                    .map(|i| g.get(i).otimes(TropicalScalar::new(rng.random_range(0..=6) as f64)))
                    .collect(),
            );
            let x = res.family.instantiate(&u).unwrap();
            assert!(d.mul_vec(&x).oplus(&g).le_with_slack(&x, TOL), "member violates Dx ⊕ g <= x");
            let objective = x.conjugate().dot(&a.mul_vec(&x));
            assert!(
                (objective.value() - res.minimum.value()).abs() <= TOL,
                "member objective {objective} differs from minimum {}",
                res.minimum
            );
        }
    }

    #[test]
    fn empty_family_is_distinct_from_infeasibility() {
        let generator = TropicalMatrix::identity(2);
        let lo = TropicalVector::from_f64(&[1.0, 0.0]);
        let hi = TropicalVector::from_f64(&[0.0, 5.0]);
        match SolutionFamily::new(FamilyKind::Box, generator, Some(lo), Some(hi)) {
            Err(OptError::EmptyFamily { index }) => assert_eq!(index, 0),
            other => panic!("expected empty family, got {other:?}"),
        }
    }
}
