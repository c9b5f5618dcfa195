mod common;

use common::{all_polys, leq_o_oracle, leq_plus_oracle};
use moncomp_core::gen::{case_rng, random_grade};
use moncomp_core::grading::{
    canonicalize, leq, leq_o, leq_plus, leq_witness, meet, oplus, Grade, MonoidKind, NatInf,
};
use proptest::prelude::*;

const KINDS: [MonoidKind; 4] = [
    MonoidKind::CompletedNat,
    MonoidKind::MultisetExpr,
    MonoidKind::PolyPlusClass,
    MonoidKind::PolyOClass,
];

fn kind() -> impl Strategy<Value = MonoidKind> {
    prop::sample::select(KINDS.to_vec())
}

fn grades(k: MonoidKind, seed: u64) -> (Grade, Grade, Grade) {
    let mut rng = case_rng(seed, 0);
    (
        random_grade(&mut rng, k),
        random_grade(&mut rng, k),
        random_grade(&mut rng, k),
    )
}

#[test]
fn nat_examples() {
    assert_eq!(
        oplus(&Grade::nat(3), &Grade::nat(4)).unwrap(),
        Grade::nat(7)
    );
    assert_eq!(
        oplus(&Grade::nat(3), &Grade::Nat(NatInf::Inf)).unwrap(),
        Grade::Nat(NatInf::Inf)
    );
    assert!(leq(&Grade::nat(3), &Grade::nat(4)).unwrap());
    assert!(!leq(&Grade::nat(5), &Grade::nat(4)).unwrap());
    assert_eq!(
        leq_witness(&Grade::nat(3), &Grade::nat(10)).unwrap(),
        Some(Grade::nat(7))
    );
    assert_eq!(
        meet(&Grade::nat(3), &Grade::nat(10)).unwrap(),
        Grade::nat(3)
    );
}

#[test]
fn multiset_examples() {
    let a = Grade::multiset(["x", "y"]);
    let b = Grade::multiset(["x", "x", "y", "z"]);
    assert!(leq(&a, &b).unwrap());
    assert!(!leq(&b, &a).unwrap());
    assert_eq!(
        leq_witness(&a, &b).unwrap(),
        Some(Grade::multiset(["x", "z"]))
    );
    assert_eq!(
        meet(&a, &Grade::multiset(["x", "x", "z"])).unwrap(),
        Grade::multiset(["x"])
    );
}

#[test]
fn polynomial_quotients() {
    let f = Grade::poly_plus(vec![100, 2]);
    let g = Grade::poly_plus(vec![0, 3]);
    assert!(leq_plus(&f, &g).unwrap());
    // 2x + 100 exceeds x + 5 by an unbounded amount.
    assert!(!leq_plus(&f, &Grade::poly_plus(vec![5, 1])).unwrap());
    // But a constant gap of any size is absorbed.
    assert!(leq_plus(&Grade::poly_plus(vec![1000]), &Grade::poly_plus(vec![])).unwrap());
    assert!(leq_o(&Grade::poly_o(vec![7, 9]), &Grade::poly_o(vec![0, 1])).unwrap());
    assert!(!leq_o(&Grade::poly_o(vec![0, 0, 1]), &Grade::poly_o(vec![5, 5])).unwrap());
    assert!(!leq_o(&Grade::poly_o(vec![1]), &Grade::poly_o(vec![])).unwrap());
    assert_eq!(
        canonicalize(&Grade::poly_o(vec![3, 0, 4])),
        Grade::poly_o(vec![0, 0, 1])
    );
}

#[test]
fn mixed_kinds_are_rejected() {
    assert!(oplus(&Grade::nat(1), &Grade::poly_plus(vec![1])).is_err());
    assert!(leq_plus(&Grade::poly_o(vec![1]), &Grade::poly_o(vec![1])).is_err());
}

#[test]
fn quotient_orders_match_oracles_on_small_polys() {
    let ps = all_polys(3, 3);
    for f in &ps {
        for g in &ps {
            let (pf, pg) = (Grade::poly_plus(f.clone()), Grade::poly_plus(g.clone()));
            assert_eq!(
                leq_plus(&pf, &pg).unwrap(),
                leq_plus_oracle(f, g),
                "{f:?} ≤+ {g:?}"
            );
            let (of, og) = (Grade::poly_o(f.clone()), Grade::poly_o(g.clone()));
            assert_eq!(
                leq_o(&of, &og).unwrap(),
                leq_o_oracle(f, g),
                "{f:?} ≤O {g:?}"
            );
        }
    }
}

#[test]
fn grades_round_trip_through_json() {
    for (i, k) in KINDS.iter().enumerate() {
        for j in 0..50 {
            let g = random_grade(&mut case_rng(i as u64, j), *k);
            let text = serde_json::to_string(&g).unwrap();
            assert_eq!(serde_json::from_str::<Grade>(&text).unwrap(), g, "{text}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn monoid_laws(k in kind(), seed in any::<u64>()) {
        let (a, b, c) = grades(k, seed);
        let zero = Grade::zero(k);
        let inf = Grade::infinity(k);
        let ab_c = oplus(&oplus(&a, &b).unwrap(), &c).unwrap();
        let a_bc = oplus(&a, &oplus(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(oplus(&a, &b).unwrap(), oplus(&b, &a).unwrap());
        prop_assert_eq!(&oplus(&a, &zero).unwrap(), &a);
        prop_assert_eq!(&oplus(&a, &inf).unwrap(), &inf);
    }

    #[test]
    fn preorder_and_witness(k in kind(), seed in any::<u64>()) {
        let (a, b, c) = grades(k, seed);
        prop_assert!(leq(&a, &a).unwrap());
        let ab = oplus(&a, &b).unwrap();
        prop_assert!(leq(&a, &ab).unwrap());
        if leq(&a, &b).unwrap() && leq(&b, &c).unwrap() {
            prop_assert!(leq(&a, &c).unwrap());
        }
        if let Some(w) = leq_witness(&a, &b).unwrap() {
            prop_assert_eq!(&oplus(&w, &a).unwrap(), &b);
        }
        prop_assert!(leq(&a, &Grade::infinity(k)).unwrap());
        prop_assert!(leq(&Grade::zero(k), &a).unwrap());
    }

    #[test]
    fn meet_is_a_lower_bound(k in kind(), seed in any::<u64>()) {
        let (a, b, c) = grades(k, seed);
        let m = meet(&a, &b).unwrap();
        let below = |x: &Grade, y: &Grade| match k {
            MonoidKind::PolyOClass => leq_o(x, y).unwrap(),
            _ => leq(x, y).unwrap(),
        };
        prop_assert!(below(&m, &a) && below(&m, &b));
        if below(&c, &a) && below(&c, &b) {
            prop_assert!(below(&c, &m));
        }
    }

    #[test]
    fn quotient_orders_are_preorders(seed in any::<u64>()) {
        let (f, g, h) = grades(MonoidKind::PolyPlusClass, seed);
        prop_assert!(leq_plus(&f, &f).unwrap());
        if leq_plus(&f, &g).unwrap() && leq_plus(&g, &h).unwrap() {
            prop_assert!(leq_plus(&f, &h).unwrap());
        }
        // Canonical forms are class representatives.
        let cf = canonicalize(&f);
        prop_assert!(leq_plus(&f, &cf).unwrap() && leq_plus(&cf, &f).unwrap());
        let (p, q, _) = grades(MonoidKind::PolyOClass, seed);
        let cp = canonicalize(&p);
        prop_assert!(leq_o(&p, &cp).unwrap() && leq_o(&cp, &p).unwrap());
        if leq(&p, &q).unwrap() {
            prop_assert!(leq_o(&p, &q).unwrap());
        }
    }
}
