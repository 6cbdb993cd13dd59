//! Property tests for the algebraic laws the solvers rely on.
//!
//! `max` and `+` on floats are exact, so the semiring laws, star fixpoint,
//! conjugation and trace identities are asserted with exact equality. A
//! tolerance appears only where k-th roots (float division) enter.

use proptest::prelude::*;

use tropsched_core::linsys::solution_cone;
use tropsched_core::matrix::{TropicalMatrix, TropicalVector};
use tropsched_core::semifield::TropicalScalar;

const NI: f64 = f64::NEG_INFINITY;
const TOL: f64 = 1e-9;

fn scalar() -> impl Strategy<Value = TropicalScalar> {
    prop_oneof![
        4 => (-50i64..=50).prop_map(|v| TropicalScalar::new(v as f64)),
        1 => Just(TropicalScalar::zero()),
    ]
}

fn finite_scalar() -> impl Strategy<Value = TropicalScalar> {
    (-50i64..=50).prop_map(|v| TropicalScalar::new(v as f64))
}

fn entry() -> impl Strategy<Value = TropicalScalar> {
    prop_oneof![
        2 => (-5i64..=5).prop_map(|v| TropicalScalar::new(v as f64)),
        1 => Just(TropicalScalar::zero()),
    ]
}

fn square_matrix(n: usize) -> impl Strategy<Value = TropicalMatrix> {
    prop::collection::vec(entry(), n * n).prop_map(move |data| {
        let mut iter = data.into_iter();
        TropicalMatrix::from_fn(n, n, |_, _| iter.next().unwrap())
    })
}

fn any_square_matrix() -> impl Strategy<Value = TropicalMatrix> {
    (1usize..=4).prop_flat_map(square_matrix)
}

/// Shifts all entries down by an integer so every cycle has non-positive
/// weight; integer entries keep the later equality checks exact.
fn close_cycles(a: TropicalMatrix) -> TropicalMatrix {
    let lambda = a.spectral_radius();
    if lambda.value() > 0.0 {
        a.scale(TropicalScalar::new(-lambda.value().ceil()))
    } else {
        a
    }
}

fn closed_matrix() -> impl Strategy<Value = TropicalMatrix> {
    any_square_matrix().prop_map(close_cycles)
}

fn regular_vector(n: usize) -> impl Strategy<Value = TropicalVector> {
    prop::collection::vec(-8i64..=8, n)
        .prop_map(|v| TropicalVector::from_f64(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn addition_is_associative_commutative_idempotent(
        a in scalar(), b in scalar(), c in scalar()
    ) {
        prop_assert_eq!(a.oplus(b).oplus(c), a.oplus(b.oplus(c)));
        prop_assert_eq!(a.oplus(b), b.oplus(a));
        prop_assert_eq!(a.oplus(a), a);
    }

    #[test]
    fn multiplication_is_associative_commutative(
        a in scalar(), b in scalar(), c in scalar()
    ) {
        prop_assert_eq!(a.otimes(b).otimes(c), a.otimes(b.otimes(c)));
        prop_assert_eq!(a.otimes(b), b.otimes(a));
        prop_assert_eq!(a.otimes(TropicalScalar::one()), a);
        prop_assert_eq!(a.otimes(TropicalScalar::zero()), TropicalScalar::zero());
    }

    #[test]
    fn multiplication_distributes_over_addition(
        a in scalar(), b in scalar(), c in scalar()
    ) {
        prop_assert_eq!(a.otimes(b.oplus(c)), a.otimes(b).oplus(a.otimes(c)));
    }

    #[test]
    fn order_law_and_antitone_inverse(a in finite_scalar(), b in finite_scalar()) {
        prop_assert_eq!(a <= b, a.oplus(b) == b);
        if a <= b {
            prop_assert!(a.inverse().unwrap() >= b.inverse().unwrap());
        }
    }

    #[test]
    fn rational_powers_compose(
        a in finite_scalar(),
        n1 in -6i64..=6, d1 in 1u32..=4,
        n2 in -6i64..=6, d2 in 1u32..=4,
    ) {
        let sequential = a.power(n1, d1).unwrap().power(n2, d2).unwrap();
        let combined = a.power(n1 * n2, d1 * d2).unwrap();
        prop_assert!((sequential.value() - combined.value()).abs() <= TOL);
    }

    #[test]
    fn star_is_a_fixpoint(a in closed_matrix()) {
        let star = a.star().expect("cycles were closed");
        let n = a.rows();
        let again = TropicalMatrix::identity(n).oplus(&a.otimes(&star));
        prop_assert_eq!(&star, &again);
        // The star dominates the identity.
        prop_assert!(TropicalMatrix::identity(n).le(&star));
    }

    #[test]
    fn conjugation_identities(x in (1usize..=5).prop_flat_map(regular_vector)) {
        // x⁻ ⊗ x collapses to the multiplicative identity.
        prop_assert_eq!(x.conjugate().dot(&x), TropicalScalar::one());
        // x ⊗ x⁻ dominates the identity matrix.
        let outer = x.outer(&x.conjugate());
        prop_assert!(TropicalMatrix::identity(x.len()).le(&outer));
    }

    #[test]
    fn conjugation_is_antitone(
        pair in (1usize..=5).prop_flat_map(|n| (regular_vector(n), regular_vector(n)))
    ) {
        let (x, y) = pair;
        prop_assert_eq!(x.le(&y), y.conjugate().le(&x.conjugate()));
    }

    #[test]
    fn trace_identities(
        (a, b) in (1usize..=4).prop_flat_map(|n| (square_matrix(n), square_matrix(n))),
        c in finite_scalar(),
    ) {
        prop_assert_eq!(a.oplus(&b).trace(), a.trace().oplus(b.trace()));
        prop_assert_eq!(a.otimes(&b).trace(), b.otimes(&a).trace());
        prop_assert_eq!(a.scale(c).trace(), c.otimes(a.trace()));
    }

    #[test]
    fn row_regular_matrix_preserves_regularity(
        (a, x) in (1usize..=4).prop_flat_map(|n| (square_matrix(n), regular_vector(n)))
    ) {
        prop_assume!(a.is_row_regular());
        prop_assert!(a.mul_vec(&x).is_regular());
    }

    #[test]
    fn cone_members_solve_the_inequality(
        (a, u) in (1usize..=4)
            .prop_flat_map(|n| (square_matrix(n).prop_map(close_cycles), regular_vector(n)))
    ) {
        let cone = solution_cone(&a).expect("cycles were closed");
        let x = cone.instantiate(&u);
        // Soundness of the closure: A ⊗ (A* u) <= A* u, exactly.
        prop_assert!(a.mul_vec(&x).le(&x));
    }

    #[test]
    fn cone_is_complete_on_integer_grids(a in square_matrix(3).prop_map(close_cycles)) {
        // x solves A x <= x exactly when x is a fixpoint of the star:
        // every integer grid solution is reachable as A* u (with u = x).
        let star = a.star().expect("cycles were closed");
        for x0 in -3i64..=3 {
            for x1 in -3i64..=3 {
                for x2 in -3i64..=3 {
                    let x = TropicalVector::from_f64(&[x0 as f64, x1 as f64, x2 as f64]);
                    let solves = a.mul_vec(&x).le(&x);
                    let fixed = star.mul_vec(&x) == x;
                    prop_assert_eq!(solves, fixed);
                }
            }
        }
    }

    #[test]
    fn spectral_radius_has_an_eigenvector_witness(
        cycle in prop::collection::vec(-5i64..=5, 3),
        extra in prop::collection::vec(entry(), 9),
    ) {
        // Strong connectivity via a finite 0 -> 1 -> 2 -> 0 cycle.
        let mut iter = extra.into_iter();
        let mut a = TropicalMatrix::from_fn(3, 3, |_, _| iter.next().unwrap());
        for (i, &w) in cycle.iter().enumerate() {
            a.set(i, (i + 1) % 3, TropicalScalar::new(w as f64));
        }
        let lambda = a.spectral_radius();
        prop_assert!(lambda.is_finite());
        let scaled = a.scale(lambda.inverse().unwrap());
        let star = scaled.star().expect("unit spectral radius");
        let witness = (0..3).any(|j| {
            let col = star.column(j);
            let lhs = a.mul_vec(&col);
            let rhs = col.scale(lambda);
            (0..3).all(|i| (lhs.get(i).value() - rhs.get(i).value()).abs() <= TOL)
        });
        prop_assert!(witness, "no star column is an eigenvector of {a}");
    }
}

#[test]
fn star_fixpoint_example_with_neg_inf_rows() {
    let a = TropicalMatrix::from_rows_f64(&[&[NI, -1.0, NI], &[NI, NI, 0.0], &[-2.0, NI, NI]]);
    let star = a.star().unwrap();
    assert_eq!(
        star,
        TropicalMatrix::identity(3).oplus(&a.otimes(&star))
    );
}
