use ks_core::clifford::CliffordContext;
use ks_core::fixtures::{random_period, rng};
use ks_core::kuga_satake::{
    complex_structure, dimension_report, kuga_satake_torus, polarization_type, torus_metadata, K3Period,
};
use ks_core::{IntMatrix, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_tori_satisfy_riemann_relations(seed in any::<u64>(), n in 3usize..=6, quad in any::<bool>()) {
        let p = random_period(&mut rng(seed), n, quad).unwrap();
        let t = kuga_satake_torus(&p).unwrap();
        prop_assert!(t.verified);
        t.check().unwrap();
    }

    #[test]
    fn rotations_fix_the_complex_structure(seed in any::<u64>(), n in 3usize..=8, k in 0usize..3) {
        let p = random_period(&mut rng(seed), n, false).unwrap();
        let (a, b) = [(3, 4), (5, 12), (20, 21)][k];
        let c = ((a * a + b * b) as f64).sqrt() as i64;
        let r = p.rotate(&Scalar::ratio(a, c), &Scalar::ratio(b, c)).unwrap();
        prop_assert_eq!(complex_structure(&p).unwrap(), complex_structure(&r).unwrap());
    }

    #[test]
    fn real_dimension_is_twice_complex(n in 2usize..=40) {
        let (real, complex) = dimension_report(n).unwrap();
        prop_assert_eq!(real, complex * 2);
    }
}

#[test]
fn rank_two_is_an_elliptic_curve() {
    let ctx = CliffordContext::from_ints(&[-1, -1]).unwrap();
    let t = kuga_satake_torus(&K3Period::standard(&ctx).unwrap()).unwrap();
    let c = t.complex_structure.to_integer().unwrap();
    assert_eq!(c.matmul(&c).unwrap(), IntMatrix::identity(2).neg());
    // the i-action is left multiplication by -J = -e1 e2
    assert_eq!(c, IntMatrix::from_i64(&[vec![0, 1], vec![-1, 0]]));
    assert_eq!(t.complex_dim(), 1);
    assert_eq!(polarization_type(&t.polarization).unwrap(), vec![BigInt::from(2)]);
}

#[test]
fn k3_sized_metadata() {
    let (_, complex) = dimension_report(21).unwrap();
    assert_eq!(complex, BigInt::from(524288));
    let mut q = vec![-1i64, -1];
    q.extend(std::iter::repeat_n(1, 19));
    let ctx = CliffordContext::from_ints(&q).unwrap();
    let p = K3Period::standard(&ctx).unwrap();
    assert!(kuga_satake_torus(&p).is_err());
    let m = torus_metadata(&p).unwrap();
    assert_eq!(m.complex_dim, BigInt::from(524288));
}
