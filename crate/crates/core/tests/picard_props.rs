use ks_core::clifford::CliffordElement;
use ks_core::correspondence::{
    commutant, hodge_type_00, p_embedding, picard_via_commutant, picard_via_kernel, tu_map, u_map, wedge_family,
};
use ks_core::fixtures::{random_even_element, random_period, rng};
use ks_core::intlin::canonical_basis;
use ks_core::kuga_satake::kuga_satake_torus;
use ks_core::{IntMatrix, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_picard_computations_agree(seed in any::<u64>(), n in 3usize..=6, quad in any::<bool>()) {
        let p = random_period(&mut rng(seed), n, quad).unwrap();
        let a = canonical_basis(&picard_via_kernel(&p).unwrap());
        let b = canonical_basis(&picard_via_commutant(&p).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn type_00_iff_orthogonal_to_the_period(seed in any::<u64>(), n in 3usize..=5) {
        let p = random_period(&mut rng(seed), n, false).unwrap();
        let t = kuga_satake_torus(&p).unwrap();
        let ctx = p.context();
        for i in 0..n {
            let e: Vec<Scalar> = (0..n).map(|k| Scalar::int((k == i) as i64)).collect();
            let orth = p.form(&e, p.f1()).unwrap().is_zero() && p.form(&e, p.f2()).unwrap().is_zero();
            let m = p_embedding(ctx, &e).unwrap();
            prop_assert_eq!(hodge_type_00(&m, &t).unwrap().holds, orth);
        }
    }

    #[test]
    fn u_maps_are_multiplicative(seed in any::<u64>(), n in 2usize..=6) {
        let q: Vec<i64> = (0..n).map(|i| if i < 2 { -1 } else { 1 + (i as i64 % 3) }).collect();
        let ctx = ks_core::clifford::CliffordContext::from_ints(&q).unwrap();
        let cap = 1usize << (n - 1);
        let a = random_even_element(&mut rng(seed), &ctx, 3.min(cap)).unwrap();
        let b = random_even_element(&mut rng(seed ^ 9), &ctx, 3.min(cap)).unwrap();
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(tu_map(&ab).unwrap(), tu_map(&a).unwrap().matmul(&tu_map(&b).unwrap()).unwrap());
        // transpose reverses the order
        prop_assert_eq!(u_map(&ab).unwrap(), u_map(&b).unwrap().matmul(&u_map(&a).unwrap()).unwrap());
        prop_assert_eq!(tu_map(&a.add(&b).unwrap()).unwrap(), tu_map(&a).unwrap().add(&tu_map(&b).unwrap()).unwrap());
        prop_assert_eq!(tu_map(&CliffordElement::one(&ctx)).unwrap().nrows(), cap);
    }
}

#[test]
fn wedge_family_avoids_the_commutant() {
    // rank-3 standard period: Pic = span(e3), T = span(e1, e2)
    let ctx = ks_core::clifford::CliffordContext::from_ints(&[-1, -1, 1]).unwrap();
    let p = ks_core::kuga_satake::K3Period::standard(&ctx).unwrap();
    let t = kuga_satake_torus(&p).unwrap();
    let m = [Scalar::zero(), Scalar::zero(), Scalar::int(1)];
    let tl = IntMatrix::from_i64(&[vec![1, 0, 0], vec![0, 1, 0]]);
    let w = wedge_family(&ctx, &m, &tl).unwrap();
    assert_eq!(w.rank(), tl.nrows());
    let com = commutant(&t.complex_structure).unwrap();
    assert_eq!(w.rational_intersection_rank(&com).unwrap(), 0);
}

#[test]
fn rank_four_wedge_family() {
    let ctx = ks_core::clifford::CliffordContext::from_ints(&[-1, -1, 1, 2]).unwrap();
    let p = ks_core::kuga_satake::K3Period::standard(&ctx).unwrap();
    let t = kuga_satake_torus(&p).unwrap();
    let m = [Scalar::zero(), Scalar::zero(), Scalar::int(1), Scalar::zero()];
    let tl = IntMatrix::from_i64(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    let w = wedge_family(&ctx, &m, &tl).unwrap();
    assert_eq!(w.rank(), 2);
    let com = commutant(&t.complex_structure).unwrap();
    assert_eq!(w.rational_intersection_rank(&com).unwrap(), 0);
}
