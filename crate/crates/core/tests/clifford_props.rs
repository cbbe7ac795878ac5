use std::sync::Arc;

use ks_core::clifford::{embed_vector_product, CliffordContext, CliffordElement};
use ks_core::fixtures::{random_even_element, rng};
use ks_core::{Scalar, ScalarMatrix};
use num_traits::Zero;
use proptest::prelude::*;

fn context(q: &[i64]) -> Arc<CliffordContext> {
    CliffordContext::from_ints(q).unwrap()
}

fn forms() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2), Just(3)], 2..=8)
}

fn element(seed: u64, ctx: &Arc<CliffordContext>, terms: usize) -> CliffordElement {
    let cap = 1usize << (ctx.rank() - 1);
    random_even_element(&mut rng(seed), ctx, terms.min(cap)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn associative(q in forms(), seed in any::<u64>(), t in 1usize..6) {
        let ctx = context(&q);
        let a = element(seed, &ctx, t);
        let b = element(seed ^ 1, &ctx, t);
        let c = element(seed ^ 2, &ctx, t);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn vectors_square_to_their_norm(q in forms(), v in prop::collection::vec(-4i64..=4, 8)) {
        let ctx = context(&q);
        let v: Vec<Scalar> = v[..q.len()].iter().map(|&x| Scalar::int(x)).collect();
        let norm = q.iter().zip(&v).fold(Scalar::zero(), |acc, (qi, vi)| acc + &(&Scalar::int(*qi) * vi) * vi);
        prop_assert_eq!(embed_vector_product(&ctx, &v, &v).unwrap(), CliffordElement::scalar(&ctx, norm));
    }

    #[test]
    fn iota_reverses_products(q in forms(), seed in any::<u64>()) {
        let ctx = context(&q);
        let a = element(seed, &ctx, 4);
        let b = element(seed.wrapping_add(7), &ctx, 4);
        prop_assert_eq!(a.multiply(&b).unwrap().iota(), b.iota().multiply(&a.iota()).unwrap());
        prop_assert_eq!(a.iota().iota(), a);
    }

    #[test]
    fn trace_is_symmetric(q in forms(), seed in any::<u64>()) {
        let ctx = context(&q);
        let a = element(seed, &ctx, 5);
        let b = element(seed.wrapping_mul(3), &ctx, 5);
        prop_assert_eq!(a.multiply(&b).unwrap().trace(), b.multiply(&a).unwrap().trace());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn left_multiplication_is_an_injective_homomorphism(
        q in prop::collection::vec(prop_oneof![Just(-1i64), Just(1), Just(2)], 2..=6),
        seed in any::<u64>(),
    ) {
        let ctx = context(&q);
        let a = element(seed, &ctx, 3);
        let b = element(seed ^ 0xabc, &ctx, 3);
        let la = a.left_mult_matrix().unwrap();
        let lb = b.left_mult_matrix().unwrap();
        prop_assert_eq!(a.multiply(&b).unwrap().left_mult_matrix().unwrap(), la.matmul(&lb).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().left_mult_matrix().unwrap(), la.add(&lb).unwrap());
        // the image of 1 under L_a recovers a, so L_a = 0 forces a = 0
        let one = CliffordElement::one(&ctx).to_dense().unwrap();
        prop_assert_eq!(la.mul_vec(&one).unwrap(), a.to_dense().unwrap());
    }

    #[test]
    fn sparse_and_dense_products_agree(q in forms(), seed in any::<u64>()) {
        let ctx = context(&q);
        let a = element(seed, &ctx, 6);
        let b = element(seed ^ 5, &ctx, 6);
        let dense = a.left_mult_matrix().unwrap().mul_vec(&b.to_dense().unwrap()).unwrap();
        prop_assert_eq!(CliffordElement::from_dense(&ctx, &dense).unwrap(), a.multiply(&b).unwrap());
    }
}

#[test]
fn left_multiplication_has_trivial_kernel() {
    // the dense matrices of the basis monomials are linearly independent
    let ctx = context(&[-1, -1, 2, 3]);
    let dim = 8;
    let mut stacked = ScalarMatrix::zeros(0, dim * dim);
    for idx in 0..dim {
        let mut v = vec![Scalar::zero(); dim];
        v[idx] = Scalar::int(1);
        let e = CliffordElement::from_dense(&ctx, &v).unwrap();
        stacked.push_row(e.left_mult_matrix().unwrap().entries().to_vec()).unwrap();
    }
    let ints = stacked.to_integer().unwrap();
    assert_eq!(ks_core::intlin::rank(&ints), dim);
}

#[test]
fn rank_21_sparse_product() {
    let mut q = vec![-1i64, -1];
    q.extend(std::iter::repeat_n(1, 19));
    let ctx = context(&q);
    assert!(ctx.check_dense().is_err());
    let a = element(1, &ctx, 64);
    let b = element(2, &ctx, 64);
    let ab = a.multiply(&b).unwrap();
    assert!(ab.len() <= 64 * 64);
    assert_eq!(ab.iota(), b.iota().multiply(&a.iota()).unwrap());
}
