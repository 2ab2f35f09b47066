//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use nakayama::greenring::{GreenElement, GreenRing};
use nakayama::hopf::AlgebraParams;
use nakayama::modcat::{make_uniserial, Decomposition, QuiverRep, UniserialClass};
use num_bigint::BigInt;

fn arb_params() -> impl Strategy<Value = AlgebraParams> {
    prop_oneof![Just(2u64), Just(3u64)].prop_flat_map(|p| {
        (p as usize..=6usize).prop_map(move |n| AlgebraParams::new(n, p, 1).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// decompose is additive: the decomposition of a direct sum is the
    /// multiset union of the summands' classes.
    #[test]
    fn decompose_direct_sum_is_multiset_union(
        pr in arb_params(),
        picks in prop::collection::vec((1usize..=6, 0usize..6), 1..5),
    ) {
        let mut expected = Decomposition::new();
        let mut sum = QuiverRep::zero(pr);
        for (l, v) in picks {
            let c = UniserialClass::new((l - 1) % pr.d() + 1, v % pr.n());
            *expected.entry(c).or_insert(0) += 1;
            sum = sum.direct_sum(&make_uniserial(&pr, c).unwrap()).unwrap();
        }
        prop_assert_eq!(sum.decompose().unwrap(), expected);
    }

    /// The Green ring is commutative and distributive on random elements
    /// with signed coefficients.
    #[test]
    fn green_ring_laws(
        pr in arb_params(),
        terms_a in prop::collection::vec((1usize..=6, 0usize..6, -3i64..=3), 1..3),
        terms_b in prop::collection::vec((1usize..=6, 0usize..6, -3i64..=3), 1..3),
        terms_c in prop::collection::vec((1usize..=6, 0usize..6, -3i64..=3), 1..3),
    ) {
        let ring = GreenRing::new(pr);
        let build = |terms: &[(usize, usize, i64)]| {
            let mut e = GreenElement::zero(pr);
            for &(l, v, c) in terms {
                e.add_term(
                    UniserialClass::new((l - 1) % pr.d() + 1, v % pr.n()),
                    &BigInt::from(c),
                );
            }
            e
        };
        let (a, b, c) = (build(&terms_a), build(&terms_b), build(&terms_c));
        let ab = ring.multiply(&a, &b).unwrap();
        let ba = ring.multiply(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        let lhs = ring.multiply(&a, &b.add(&c)).unwrap();
        let rhs = ab.add(&ring.multiply(&a, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    /// Shift-ring products land in the summed grading degree.
    #[test]
    fn shift_ring_grading(
        pr in arb_params(),
        l1 in 1usize..=6, v1 in 0usize..6, s1 in -4i64..=4,
        l2 in 1usize..=6, v2 in 0usize..6, s2 in -4i64..=4,
    ) {
        use nakayama::greenring::ShiftGreenElement;
        let ring = GreenRing::new(pr);
        let a = ShiftGreenElement::from_class(
            pr,
            UniserialClass::new((l1 - 1) % pr.d() + 1, v1 % pr.n()),
            s1,
        );
        let b = ShiftGreenElement::from_class(
            pr,
            UniserialClass::new((l2 - 1) % pr.d() + 1, v2 % pr.n()),
            s2,
        );
        let prod = ring.shift_multiply(&a, &b).unwrap();
        prop_assert_eq!(prod.support_degrees(), vec![s1 + s2]);
    }
}
