mod common;

use common::{big_step, Big};
use moncomp_core::complexity::{
    blum_decide_leq, calibrate_chi, canonical_trees, fit_chi, kleene_t, measure, measuring_program,
    mu_search_effective, mu_search_naive, normal_form_eval, normality_certify, order_predicate,
    Chi, Measure,
};
use moncomp_core::gen::{case_rng, random_tree, ProgramGen};
use moncomp_core::grading::{Grade, NatInf};
use moncomp_core::machine::{encode_program, parse_program, run, Program};
use moncomp_core::Tree;
use proptest::prelude::*;

fn code(src: &str) -> Tree {
    encode_program(&parse_program(src).unwrap())
}

fn case(seed: u64) -> (Program, Tree) {
    let mut rng = case_rng(seed, 0);
    let p = ProgramGen::default().terminating(&mut rng);
    (p, random_tree(&mut rng, 6))
}

#[test]
fn unary_addition_measures() {
    let add =
        code("split X0 into (X1, X2); while X1 { X1 := tl X1; X2 := cons(nil, X2) }; X0 := X2");
    for j in 0..=20u64 {
        for k in 0..=20u64 {
            let a = Tree::cons(Tree::nat(j), Tree::nat(k));
            assert_eq!(
                measure(Measure::Time, &add, &a, NatInf::Inf).unwrap(),
                Some(NatInf::Fin(9 * j + 4))
            );
            assert_eq!(
                normal_form_eval(&add, &a, NatInf::Inf).unwrap(),
                Some(Tree::nat(j + k))
            );
        }
    }
    let a = Tree::cons(Tree::nat(2), Tree::nat(1));
    // Peak is after the final copy: X0 and X2 both hold 3.
    assert_eq!(
        measure(Measure::Space, &add, &a, NatInf::Inf).unwrap(),
        Some(NatInf::Fin(6))
    );
    assert_eq!(normal_form_eval(&add, &a, NatInf::Fin(21)).unwrap(), None);
    assert_eq!(
        normal_form_eval(&add, &a, NatInf::Fin(22)).unwrap(),
        Some(Tree::nat(3))
    );
}

#[test]
fn naive_search_finds_the_identity_trace() {
    let id = code("X0 := X0");
    let naive = mu_search_naive(&id, &Tree::NIL, 1_000_000).expect("within cap");
    assert_eq!(
        Some(naive.clone()),
        mu_search_effective(&id, &Tree::NIL, NatInf::Inf).unwrap()
    );
    assert!(kleene_t(&id, &Tree::NIL, &naive));
    assert!(!kleene_t(&id, &Tree::nat(1), &naive));
}

#[test]
fn naive_search_gives_up_at_the_cap() {
    let lp = code("while cons(nil, nil) { }");
    assert_eq!(mu_search_naive(&lp, &Tree::NIL, 5_000), None);
    assert_eq!(
        mu_search_effective(&lp, &Tree::NIL, NatInf::Fin(5_000)).unwrap(),
        None
    );
}

#[test]
fn candidates_come_in_size_order() {
    let c = canonical_trees(30);
    assert_eq!(c[0], Tree::NIL);
    assert_eq!(c[1], Tree::cons(Tree::NIL, Tree::NIL));
    assert!(c.windows(2).all(|w| w[0].size() <= w[1].size()));
    // Catalan numbers 1, 1, 2, 5, 14 sum to 23, leaving 7 of size 5.
    assert_eq!(c.iter().filter(|t| t.size() == 4).count(), 14);
    assert_eq!(c.iter().filter(|t| t.size() == 5).count(), 7);
}

#[test]
fn measure_order_and_blum_on_divergence() {
    assert!(order_predicate(Measure::Time, &Grade::nat(2), &Grade::Nat(NatInf::Inf)).unwrap());
    assert!(order_predicate(Measure::Time, &Grade::nat(2), &Grade::poly_plus(vec![])).is_err());
    let lp = code("X1 := cons(nil, nil); while X1 { X0 := cons(nil, X0) }");
    assert_eq!(
        measure(Measure::Time, &lp, &Tree::NIL, NatInf::Fin(1000)).unwrap(),
        None
    );
    for n in [0, 10, 1000] {
        assert!(!blum_decide_leq(Measure::Time, &lp, &Tree::NIL, n).unwrap());
        assert!(!blum_decide_leq(Measure::Space, &lp, &Tree::NIL, n).unwrap());
    }
    let spin = code("while cons(nil, nil) { }");
    assert!(!blum_decide_leq(Measure::Space, &spin, &Tree::NIL, 100).unwrap());
}

#[test]
fn kappa_round_trip() {
    for m in [Measure::Time, Measure::Space] {
        for n in [0, 1, 7, 40] {
            assert_eq!(
                m.kappa_star(&m.kappa_lower(NatInf::Fin(n))).unwrap(),
                NatInf::Fin(n)
            );
        }
        assert_eq!(
            m.kappa_star(&m.kappa_lower(NatInf::Inf)).unwrap(),
            NatInf::Inf
        );
    }
}

#[test]
fn fitted_bound_covers_its_points() {
    let pts = [(2, 100), (10, 180), (30, 390), (5, 150)];
    let chi = fit_chi(&pts).unwrap();
    assert!(pts.iter().all(|&(c, t)| chi.admits(c, t)));
    let wide = calibrate_chi(&pts).unwrap();
    assert!(wide.alpha >= chi.alpha && wide.beta >= chi.beta);
}

#[test]
fn normality_on_a_small_corpus() {
    let corpus: Vec<(Tree, Tree)> = (0..12)
        .map(|i| {
            let (p, a) = case(1000 + i);
            (encode_program(&p), a)
        })
        .collect();
    let loose = Chi {
        alpha: 1.0e6,
        beta: 1.0e9,
    };
    let r = normality_certify(Measure::Time, &corpus, loose, NatInf::Inf).unwrap();
    assert!(r.ok(), "{:?}", r.mismatches);
    assert!(r.entries.iter().all(|e| e.internal_agrees));
    let tight = Chi {
        alpha: 0.0,
        beta: 0.0,
    };
    assert!(
        !normality_certify(Measure::Time, &corpus, tight, NatInf::Inf)
            .unwrap()
            .ok()
    );
    assert!(measuring_program(Measure::Space).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_matches_direct_run(seed in any::<u64>(), fuel in 0u64..300) {
        let (p, a) = case(seed);
        let f = encode_program(&p);
        let (big, _) = big_step(&p, &a, Some(fuel));
        let nf = normal_form_eval(&f, &a, NatInf::Fin(fuel)).unwrap();
        prop_assert_eq!(nf.as_ref(), big.value());
    }

    #[test]
    fn measures_recount(seed in any::<u64>()) {
        let (p, a) = case(seed);
        let f = encode_program(&p);
        let (Big::Halted { time, space, .. }, _) = big_step(&p, &a, None) else { unreachable!() };
        prop_assert_eq!(measure(Measure::Time, &f, &a, NatInf::Inf).unwrap(), Some(NatInf::Fin(time)));
        prop_assert_eq!(measure(Measure::Space, &f, &a, NatInf::Inf).unwrap(), Some(NatInf::Fin(space)));
        let witness = mu_search_effective(&f, &a, NatInf::Inf).unwrap().unwrap();
        prop_assert!(kleene_t(&f, &a, &witness));
    }

    #[test]
    fn blum_decision_matches_recount(seed in any::<u64>(), n in 0u64..200, divergent in any::<bool>()) {
        let mut rng = case_rng(seed, 0);
        let g = ProgramGen::default();
        let p = if divergent { g.divergent(&mut rng) } else { g.terminating(&mut rng) };
        let a = random_tree(&mut rng, 6);
        let f = encode_program(&p);
        let (big, _) = big_step(&p, &a, Some(100_000));
        for m in [Measure::Time, Measure::Space] {
            let expect = match &big {
                Big::Halted { time, space, .. } => if m == Measure::Time { *time <= n } else { *space <= n },
                Big::OutOfFuel { .. } => false,
            };
            prop_assert_eq!(blum_decide_leq(m, &f, &a, n).unwrap(), expect, "{}", m);
        }
        prop_assert_eq!(run(&p, a, NatInf::Fin(100_000)).is_halted(), !divergent);
    }
}
