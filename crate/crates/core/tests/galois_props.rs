use ks_core::fixtures::{random_cyclic_module, random_stable_setup, rng};
use ks_core::galois::{
    bad_prime_bound, brauer_model, four_term_check, h1, h1_cyclic, torsion_sup, u_swap_setup, TorsionSup,
};
use ks_core::howell::{right_kernel_order, right_kernel_order_snf, PrimePower};
use ks_core::numtheory::valuation;
use ks_core::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn pp(l: u64, n: u32) -> PrimePower {
    PrimePower::new(l, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cocycles_match_the_cyclic_formula(seed in any::<u64>()) {
        let m = random_cyclic_module(&mut rng(seed), 6).unwrap();
        prop_assert_eq!(h1(&m).unwrap(), h1_cyclic(&m).unwrap());
    }

    #[test]
    fn howell_kernels_match_smith_kernels(
        v in prop::collection::vec(-6i64..=6, 12),
        rows in 1usize..=4,
        l in prop_oneof![Just(2u64), Just(3), Just(5)],
        n in 1u32..=5,
    ) {
        let cols = 12 / rows.max(1);
        let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j]));
        prop_assert_eq!(right_kernel_order(&m, pp(l, n)), right_kernel_order_snf(&m, pp(l, n)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn good_primes_give_the_brauer_isomorphism(seed in any::<u64>(), rank in 2usize..=5) {
        let s = random_stable_setup(&mut rng(seed), rank).unwrap();
        let delta = s.delta();
        for l in [3u64, 5, 7] {
            if valuation(&delta, &BigInt::from(l)) > 0 {
                continue;
            }
            for n in 1..=4 {
                let t = s.t_module().reduce_mod(pp(l, n)).invariant_order();
                let b = brauer_model(&s, pp(l, n)).unwrap().invariant_order();
                prop_assert_eq!(t, b);
            }
        }
    }

    #[test]
    fn four_term_orders_and_k_divides_delta(seed in any::<u64>(), rank in 2usize..=5) {
        let s = random_stable_setup(&mut rng(seed), rank).unwrap();
        let k = s.k_group().unwrap();
        for l in [2u64, 3] {
            let lb = BigInt::from(l);
            let kl = k.primary_part(&lb);
            let delta_part = num_traits::pow(lb.clone(), valuation(&s.delta(), &lb) as usize);
            prop_assert!((&delta_part % kl.order()).is_zero());
            if !s.acts_trivially_on_k(l).unwrap() {
                continue;
            }
            let m = kl.invariant_factors().iter().map(|d| valuation(d, &lb)).max().unwrap_or(0).max(1);
            // the order identity is asserted inside four_term_check
            let rep = four_term_check(&s, l, m + 1).unwrap();
            prop_assert_eq!(rep.k_order, kl.order());
            prop_assert!(rep.injective);
        }
    }

    #[test]
    fn bound_is_stable_past_its_exponent(seed in any::<u64>()) {
        let m = random_cyclic_module(&mut rng(seed), 5).unwrap();
        for l in [2u64, 3] {
            if let TorsionSup::Bounded { bound, exponent } = torsion_sup(&m, l).unwrap() {
                for n in [exponent, exponent + 1, exponent + 2] {
                    prop_assert_eq!(m.reduce_mod(pp(l, n)).invariant_order(), bound.clone());
                }
            }
        }
    }
}

#[test]
fn swap_fixture_isomorphism_and_bound() {
    let s = u_swap_setup();
    for n in 1..=4 {
        for l in [3u64, 5, 7] {
            let t = s.t_module().reduce_mod(pp(l, n)).invariant_order();
            assert_eq!(t, brauer_model(&s, pp(l, n)).unwrap().invariant_order());
            assert!(t.is_one());
        }
    }
    let b = bad_prime_bound(&s, 2, 6).unwrap();
    assert_eq!(b.sup.value(), Some(&BigInt::from(2)));
    assert!(b.all_hold());
    assert_eq!(b.rows.iter().map(|r| r.n).collect::<Vec<_>>(), (1..=6).collect::<Vec<_>>());
}
