use std::sync::Arc;

use ks_core::intlin::{elementary_divisors, smith_normal_form};
use ks_core::lattice::{cokernel_of_sum, k3_period_lattice};
use ks_core::{IntMatrix, QuadLattice, SubLattice};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-range..=range, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

fn sized_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(r, c, 9))
}

fn check_snf(m: &IntMatrix) {
    let s = smith_normal_form(m);
    assert_eq!(s.u.matmul(m).unwrap().matmul(&s.v).unwrap(), s.d);
    let d = s.diagonal();
    for i in 0..d.len() {
        if i + 1 < d.len() && !d[i + 1].is_zero() {
            assert!((&d[i + 1] % &d[i]).is_zero());
        }
        assert!(!d[i].is_negative());
    }
    for i in 0..s.d.nrows() {
        for j in 0..s.d.ncols() {
            if i != j {
                assert!(s.d[(i, j)].is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn smith_form_postcondition(m in sized_matrix(12)) {
        check_snf(&m);
    }

    #[test]
    fn signature_adds_up(diag in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 1..=8)) {
        let l = QuadLattice::diagonal(&diag).unwrap();
        let (p, n) = l.signature().unwrap();
        prop_assert_eq!(p + n, diag.len());
        prop_assert_eq!(n, diag.iter().filter(|&&x| x < 0).count());
    }

    #[test]
    fn double_complement(rows in matrix(2, 6, 3)) {
        let l = Arc::new(QuadLattice::diagonal(&[-1, -1, 1, 1, 2, -3]).unwrap());
        prop_assume!(ks_core::intlin::rank(&rows) == 2);
        let s = SubLattice::saturated_span(l.clone(), &rows).unwrap();
        prop_assume!(s.discriminant().is_ok());
        let back = s.orthogonal_complement().unwrap().orthogonal_complement().unwrap();
        prop_assert!(back.same_lattice(&s));
        let raw = SubLattice::new(l, rows).unwrap();
        for r in raw.basis().rows_iter() {
            prop_assert!(back.contains(r));
        }
    }

    #[test]
    fn unimodular_cokernel_order(rows in matrix(1, 4, 4)) {
        let l = Arc::new(QuadLattice::direct_sum(&[QuadLattice::u_minus(), QuadLattice::u_minus()]).unwrap());
        prop_assume!(!rows.is_zero());
        let s = SubLattice::saturated_span(l, &rows).unwrap();
        prop_assume!(s.discriminant().is_ok());
        let t = s.orthogonal_complement().unwrap();
        let k = cokernel_of_sum(&s, &t).unwrap();
        prop_assert_eq!(k.order(), s.discriminant().unwrap());
        prop_assert_eq!(t.discriminant().unwrap(), s.discriminant().unwrap());
    }
}

#[test]
fn smith_form_fifty_by_fifty() {
    use ks_core::fixtures::rng;
    use rand::Rng;
    let mut r = rng(50);
    for (rows, cols) in [(50, 50), (50, 37), (23, 50)] {
        let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(r.gen_range(-20i64..=20)));
        check_snf(&m);
    }
    // rank-deficient: a product of thin factors
    let a = IntMatrix::from_fn(50, 10, |_, _| BigInt::from(r.gen_range(-3i64..=3)));
    let b = IntMatrix::from_fn(10, 50, |_, _| BigInt::from(r.gen_range(-3i64..=3)));
    let m = a.matmul(&b).unwrap();
    check_snf(&m);
    assert!(elementary_divisors(&m).len() <= 10);
}

#[test]
fn k3_lattice_facts() {
    let k3 = QuadLattice::k3();
    assert_eq!(k3.rank(), 22);
    assert!(k3.is_unimodular());
    assert_eq!(k3.signature().unwrap(), (19, 3));
    for d in [1u64, 2, 3] {
        let p = k3_period_lattice(d).unwrap();
        assert_eq!(p.p.rank(), 21);
        assert_eq!(p.p.discriminant().unwrap(), BigInt::from(2 * d));
        assert_eq!(k3.norm_int(&p.h).unwrap(), BigInt::from(-2 * d as i64));
        assert_eq!(p.p.as_lattice().unwrap().signature().unwrap(), (19, 2));
    }
}
