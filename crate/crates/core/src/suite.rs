//! Seeded law suites: each law is checked on `cases` generated instances
//! and reported with its violation count and the first counterexample.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexity::{
    blum_brute_leq, blum_decide_leq, blum_halt_agree, measure, mu_search_effective,
    normal_form_eval, order_predicate, Measure,
};
use crate::diagram::{
    finrel_eval, is_function, par, seq, seq_all, spider_normalize, spider_rebuild, Diagram, FinRel,
    Interp,
};
use crate::gen::{
    case_rng, random_grade, random_spider_diagram, random_spider_diagram_from, random_tree,
    ProgramGen,
};
use crate::grading::{
    canonicalize, leq, leq_o, leq_plus, leq_witness, meet, oplus, Grade, MonoidKind, NatInf,
};
use crate::machine::{
    encode_program, extract_output, par_compose, seq_compose, specialize, step, suspend,
    trace_eval, Machine, Morphism, Program, RetractTag, Step,
};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Grading,
    Diagram,
    Machine,
    Complexity,
    All,
}

impl SuiteName {
    pub const MODULES: [SuiteName; 4] = [
        SuiteName::Grading,
        SuiteName::Diagram,
        SuiteName::Machine,
        SuiteName::Complexity,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::Grading => "grading",
            SuiteName::Diagram => "diagram",
            SuiteName::Machine => "machine",
            SuiteName::Complexity => "complexity",
            SuiteName::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite '{0}' (expected grading, diagram, machine, complexity or all)")]
pub struct UnknownSuite(pub String);

impl FromStr for SuiteName {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "grading" => SuiteName::Grading,
            "diagram" => SuiteName::Diagram,
            "machine" => SuiteName::Machine,
            "complexity" => SuiteName::Complexity,
            "all" => SuiteName::All,
            other => return Err(UnknownSuite(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: u64,
    /// The machine whose runs the machine laws observe. Replaying and
    /// known-value checks compare it against the reference machine.
    pub machine: Machine,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: u64) -> Self {
        SuiteConfig {
            seed,
            cases,
            machine: Machine::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub suite: SuiteName,
    pub law: &'static str,
    pub cases: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub laws: Vec<LawReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.laws.iter().all(|l| l.violations == 0)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }
}

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Runner {
    suite: SuiteName,
    cfg: SuiteConfig,
    laws: Vec<LawReport>,
}

impl Runner {
    fn law(
        &mut self,
        law: &'static str,
        cases: u64,
        check: impl Fn(&mut ChaCha8Rng, u64) -> Check + Sync + Send,
    ) {
        let id = self.laws.len() as u64 + ((self.suite as u64) << 8);
        let seed = self.cfg.seed;
        let results =
            crate::sweep::map_range(cases, |i| check(&mut case_rng(seed, (id << 32) | i), i));
        let mut report = LawReport {
            suite: self.suite,
            law,
            cases,
            violations: 0,
            first_violation: None,
        };
        for (i, r) in results.into_iter().enumerate() {
            if let Err(msg) = r {
                report.violations += 1;
                report
                    .first_violation
                    .get_or_insert_with(|| format!("case {i}: {msg}"));
            }
        }
        self.laws.push(report);
    }
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> SuiteReport {
    let mut laws = Vec::new();
    let modules: Vec<SuiteName> = if name == SuiteName::All {
        SuiteName::MODULES.to_vec()
    } else {
        vec![name]
    };
    for m in modules {
        let mut r = Runner {
            suite: m,
            cfg: *cfg,
            laws: Vec::new(),
        };
        match m {
            SuiteName::Grading => grading_laws(&mut r),
            SuiteName::Diagram => diagram_laws(&mut r),
            SuiteName::Machine => machine_laws(&mut r),
            SuiteName::Complexity => complexity_laws(&mut r),
            SuiteName::All => unreachable!("expanded above"),
        }
        laws.extend(r.laws);
    }
    SuiteReport {
        suite: name,
        seed: cfg.seed,
        laws,
    }
}

const KINDS: [MonoidKind; 4] = [
    MonoidKind::CompletedNat,
    MonoidKind::MultisetExpr,
    MonoidKind::PolyPlusClass,
    MonoidKind::PolyOClass,
];

fn grades(rng: &mut ChaCha8Rng, i: u64) -> (Grade, Grade, Grade) {
    let k = KINDS[i as usize % 4];
    (
        random_grade(rng, k),
        random_grade(rng, k),
        random_grade(rng, k),
    )
}

/// The order a monoid's meet is greatest below: the quotient order for
/// `PolyOClass`, the monoid preorder otherwise.
fn meet_order(a: &Grade, b: &Grade) -> bool {
    match a.kind() {
        MonoidKind::PolyOClass => leq_o(a, b).unwrap(),
        _ => leq(a, b).unwrap(),
    }
}

fn small_poly(rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..5).map(|_| rng.gen_range(0..=5)).collect()
}

fn eval_poly(c: &[u64], x: i128) -> i128 {
    c.iter().rev().fold(0, |acc, &k| acc * x + k as i128)
}

/// `f ≤+ g` by sampling: the largest difference seen up to `10^4` must not
/// be exceeded further out.
pub fn leq_plus_sampled(f: &[u64], g: &[u64]) -> bool {
    let d = |x| eval_poly(f, x) - eval_poly(g, x);
    let c = (0..=20).chain([10_000]).map(d).max().unwrap();
    [15_000, 20_000].into_iter().all(|x| d(x) <= c)
}

/// `f ≤O g` by sampling: some `c ≤ 1000` bounds `f/g` at every sampled `x ≥ 1`.
pub fn leq_o_sampled(f: &[u64], g: &[u64]) -> bool {
    (1..=1000).any(|c| {
        (1..=20)
            .chain([10_000])
            .all(|x| eval_poly(f, x) <= c * eval_poly(g, x))
    })
}

fn grading_laws(r: &mut Runner) {
    let n = r.cfg.cases;
    r.law("oplus_associative", n, |rng, i| {
        let (a, b, c) = grades(rng, i);
        let (l, rr) = (
            oplus(&a, &oplus(&b, &c).unwrap()),
            oplus(&oplus(&a, &b).unwrap(), &c),
        );
        ensure(l == rr, || format!("{a} {b} {c}"))
    });
    r.law("oplus_commutative", n, |rng, i| {
        let (a, b, _) = grades(rng, i);
        ensure(oplus(&a, &b) == oplus(&b, &a), || format!("{a} {b}"))
    });
    r.law("oplus_unit", n, |rng, i| {
        let (a, _, _) = grades(rng, i);
        ensure(oplus(&Grade::zero(a.kind()), &a).as_ref() == Ok(&a), || {
            format!("{a}")
        })
    });
    r.law("infinity_absorbs", n, |rng, i| {
        let (a, _, _) = grades(rng, i);
        let inf = Grade::infinity(a.kind());
        ensure(oplus(&inf, &a).as_ref() == Ok(&inf), || format!("{a}"))
    });
    r.law("leq_reflexive_transitive", n, |rng, i| {
        let (a, b, c) = grades(rng, i);
        let l = |x: &Grade, y: &Grade| leq(x, y).unwrap();
        ensure(
            l(&a, &a) && (!(l(&a, &b) && l(&b, &c)) || l(&a, &c)),
            || format!("{a} {b} {c}"),
        )
    });
    r.law("leq_witness_sound", n, |rng, i| {
        let (a, b, _) = grades(rng, i);
        // Half the time make `a ≤ b` hold by construction.
        let b = if rng.gen_bool(0.5) {
            oplus(&a, &b).unwrap()
        } else {
            b
        };
        match leq_witness(&a, &b).unwrap() {
            Some(w) => ensure(oplus(&w, &a).as_ref() == Ok(&b), || {
                format!("{w} ⊕ {a} ≠ {b}")
            }),
            None => Ok(()),
        }
    });
    r.law("quotient_antisymmetric", n, |rng, i| {
        let (a, b, _) = grades(rng, i);
        let (ca, cb) = (canonicalize(&a), canonicalize(&b));
        let both = match a.kind() {
            MonoidKind::PolyPlusClass => leq_plus(&ca, &cb).unwrap() && leq_plus(&cb, &ca).unwrap(),
            MonoidKind::PolyOClass => leq_o(&ca, &cb).unwrap() && leq_o(&cb, &ca).unwrap(),
            _ => leq(&ca, &cb).unwrap() && leq(&cb, &ca).unwrap(),
        };
        ensure(!both || ca == cb, || format!("{ca} ~ {cb}"))
    });
    r.law("meet_greatest_lower_bound", n, |rng, i| {
        let (a, b, l) = grades(rng, i);
        let m = meet(&a, &b).unwrap();
        let lower = meet_order(&m, &a) && meet_order(&m, &b);
        let greatest = !(meet_order(&l, &a) && meet_order(&l, &b)) || meet_order(&l, &m);
        ensure(lower && greatest, || {
            format!("meet({a}, {b}) = {m}, candidate {l}")
        })
    });
    r.law("leq_plus_oracle", n, |rng, _| {
        let (f, g) = (small_poly(rng), small_poly(rng));
        let lib = leq_plus(&Grade::poly_plus(f.clone()), &Grade::poly_plus(g.clone())).unwrap();
        ensure(lib == leq_plus_sampled(&f, &g), || {
            format!("{f:?} ≤+ {g:?}: {lib}")
        })
    });
    r.law("leq_o_oracle", n, |rng, _| {
        let (f, g) = (small_poly(rng), small_poly(rng));
        let lib = leq_o(&Grade::poly_o(f.clone()), &Grade::poly_o(g.clone())).unwrap();
        ensure(lib == leq_o_sampled(&f, &g), || {
            format!("{f:?} ≤O {g:?}: {lib}")
        })
    });
}

fn a_id(k: usize) -> Diagram {
    Diagram::id(vec!["A".to_string(); k])
}

/// Equal relations at carriers 1 to 4.
fn same_semantics(l: &Diagram, r: &Diagram) -> Check {
    for k in 1..=4 {
        let (x, y) = (
            finrel_eval(l, k, &Interp::new()),
            finrel_eval(r, k, &Interp::new()),
        );
        if x != y {
            return Err(format!("carrier {k}: {l:?} vs {r:?}"));
        }
    }
    Ok(())
}

/// Plug both sides of an equation with domain `[A]` into a random context.
fn in_context(rng: &mut ChaCha8Rng, lhs: &Diagram, rhs: &Diagram) -> (Diagram, Diagram) {
    let pre = loop {
        let d = random_spider_diagram(rng, 4);
        if !d.cod().is_empty() {
            break d;
        }
    };
    let w = pre.cod().len();
    let at = rng.gen_range(0..w);
    let wrap = |side: &Diagram| {
        let mid = par(&par(&a_id(at), side), &a_id(w - at - 1));
        seq(&pre, &mid).expect("context boundary")
    };
    let (l, r) = (wrap(lhs), wrap(rhs));
    let post = random_spider_diagram_from(rng, l.cod().len(), 4);
    (seq(&l, &post).unwrap(), seq(&r, &post).unwrap())
}

fn equation_law(r: &mut Runner, law: &'static str, n: u64, lhs: Diagram, rhs: Diagram) {
    r.law(law, n, move |rng, _| {
        let (l, rr) = in_context(rng, &lhs, &rhs);
        same_semantics(&l, &rr)?;
        ensure(spider_normalize(&l) == spider_normalize(&rr), || {
            format!("spider forms differ: {l:?}")
        })
    });
}

fn diagram_laws(r: &mut Runner) {
    let n = r.cfg.cases;
    let (d, e, c, s) = (
        Diagram::copy("A"),
        Diagram::delete("A"),
        Diagram::compare("A"),
        Diagram::swap("A", "A"),
    );
    let id = a_id(1);
    let s_ = |ds: &[Diagram]| seq_all(ds).expect("law boundaries");
    equation_law(
        r,
        "coassociativity",
        n,
        s_(&[d.clone(), par(&d, &id)]),
        s_(&[d.clone(), par(&id, &d)]),
    );
    equation_law(
        r,
        "counit_left",
        n,
        s_(&[d.clone(), par(&e, &id)]),
        id.clone(),
    );
    equation_law(
        r,
        "counit_right",
        n,
        s_(&[d.clone(), par(&id, &e)]),
        id.clone(),
    );
    equation_law(
        r,
        "cocommutativity",
        n,
        s_(&[d.clone(), s.clone()]),
        d.clone(),
    );
    // Laws with domain A ⊗ A or A ⊗ A ⊗ A are plugged in after a copy.
    let dd = s_(&[d.clone(), par(&d, &id)]);
    equation_law(
        r,
        "compare_associative",
        n,
        s_(&[dd.clone(), par(&c, &id), c.clone()]),
        s_(&[dd.clone(), par(&id, &c), c.clone()]),
    );
    let frob_l = s_(&[par(&d, &id), par(&id, &c)]);
    let frob_m = s_(&[c.clone(), d.clone()]);
    let frob_r = s_(&[par(&id, &d), par(&c, &id)]);
    let pair = |x: &Diagram| s_(&[d.clone(), x.clone()]);
    equation_law(r, "frobenius_left", n, pair(&frob_l), pair(&frob_m));
    equation_law(r, "frobenius_right", n, pair(&frob_r), pair(&frob_m));
    equation_law(
        r,
        "copy_then_compare",
        n,
        s_(&[d.clone(), c.clone()]),
        id.clone(),
    );
    r.law("spider_soundness", n, |rng, _| {
        let g = random_spider_diagram(rng, 12);
        let back = spider_rebuild(&spider_normalize(&g).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let ok = finrel_eval(&g, 2, &Interp::new()) == finrel_eval(&back, 2, &Interp::new());
        ensure(ok, || format!("{g:?}"))
    });
    r.law("spider_completeness", n, |rng, _| {
        let (g, h) = spider_pair(rng);
        let nf = spider_normalize(&g).unwrap() == spider_normalize(&h).unwrap();
        let sem = finrel_eval(&g, 2, &Interp::new()).unwrap()
            == finrel_eval(&h, 2, &Interp::new()).unwrap();
        ensure(nf == sem, || {
            format!("nf {nf}, relation {sem}: {g:?} vs {h:?}")
        })
    });
    r.law("function_characterization", n, |rng, _| {
        let k = rng.gen_range(1..=3usize);
        let pairs = (0..k as u32).flat_map(|x| (0..k as u32).map(move |y| (vec![x], vec![y])));
        let rel = FinRel::new(
            k,
            1,
            1,
            pairs.filter(|_| rng.gen_bool(0.4)).collect::<Vec<_>>(),
        )
        .unwrap();
        let (dk, tk) = (
            finrel_eval(&Diagram::copy("A"), k, &Interp::new()).unwrap(),
            finrel_eval(&Diagram::delete("A"), k, &Interp::new()).unwrap(),
        );
        let single = rel.compose(&dk) == dk.compose(&rel.product(&rel));
        let total = rel.compose(&tk) == tk;
        ensure(is_function(&rel) == (single && total), || {
            format!("{:?}", rel.pairs)
        })
    });
}

/// Two spider diagrams with the same boundary, equal about half the time.
pub fn spider_pair(rng: &mut ChaCha8Rng) -> (Diagram, Diagram) {
    let g = random_spider_diagram(rng, 12);
    if rng.gen_bool(0.5) {
        let nf = spider_normalize(&g).expect("spider fragment");
        return (g, spider_rebuild(&nf).expect("rebuild"));
    }
    for _ in 0..64 {
        let h = random_spider_diagram_from(rng, g.dom().len(), 12);
        if h.cod() == g.cod() {
            return (g, h);
        }
    }
    (g.clone(), g)
}

fn program_and_input(rng: &mut ChaCha8Rng) -> (Program, Tree) {
    let p = ProgramGen::default().terminating(rng);
    (p, random_tree(rng, 8))
}

/// `split X0 into (X1, X2); while X1 { X1 := tl X1; X2 := cons(nil, X2) }; X0 := X2`.
pub fn unary_addition() -> Program {
    crate::machine::parse_program(
        "split X0 into (X1, X2); while X1 { X1 := tl X1; X2 := cons(nil, X2) }; X0 := X2",
    )
    .expect("unary addition parses")
}

fn machine_laws(r: &mut Runner) {
    let n = r.cfg.cases;
    let m = r.cfg.machine;
    const FUEL: NatInf = NatInf::Fin(100_000);
    r.law("determinism", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        ensure(m.run(&p, a.clone(), FUEL) == m.run(&p, a, FUEL), || {
            format!("{p:?}")
        })
    });
    r.law("fuel_monotonicity", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let Some(t) = m.run(&p, a.clone(), FUEL).time() else {
            return Ok(());
        };
        let more = t + rng.gen_range(0..100);
        let (at, above) = (
            m.run(&p, a.clone(), NatInf::Fin(t)),
            m.run(&p, a.clone(), NatInf::Fin(more)),
        );
        let below = if t > 0 {
            !m.run(&p, a, NatInf::Fin(t - 1)).is_halted()
        } else {
            true
        };
        ensure(at == above && at.is_halted() && below, || {
            format!("{p:?} at {t}")
        })
    });
    r.law("trace_replay", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let out = m.run(&p, a, FUEL);
        let tr = out.trace();
        for i in 1..tr.configs.len() {
            match step(&tr.configs[i - 1]) {
                Step::Next { config, cost } if config == tr.configs[i] && cost == tr.costs[i] => {}
                _ => return Err(format!("step {i} of {p:?} does not replay")),
            }
        }
        let (t, s) = (tr.time(), tr.space());
        match out {
            crate::machine::Outcome::Halted { time, space, .. } => {
                ensure(time == t && space == s, || {
                    format!("grades {time}/{space} vs {t}/{s}")
                })
            }
            _ => Ok(()),
        }
    });
    r.law("known_time", n.min(441), move |_, i| {
        let (j, k) = (i / 21, i % 21);
        let out = m.run(
            &unary_addition(),
            Tree::cons(Tree::nat(j), Tree::nat(k)),
            NatInf::Inf,
        );
        let want = (Tree::nat(j + k), 9 * j + 4);
        ensure(
            out.value() == Some(&want.0) && out.time() == Some(want.1),
            || format!("({j}, {k}): {:?} in {:?}", out.value(), out.time()),
        )
    });
    r.law("smn", n, move |rng, _| {
        let (f, a) = program_and_input(rng);
        let b = random_tree(rng, 6);
        let fuel = NatInf::Fin(rng.gen_range(0..400));
        let l = m
            .run(&specialize(&f, a.clone()), b.clone(), fuel)
            .observation();
        let rr = m.run(&f, Tree::cons(a, b), fuel).observation();
        ensure(l == rr, || format!("{f:?}: {l:?} vs {rr:?}"))
    });
    r.law("seq_compose_additive", n, move |rng, _| {
        let ((p, a), (q, _)) = (program_and_input(rng), program_and_input(rng));
        let (Some(mid), Some(tp)) = (
            m.run(&p, a.clone(), FUEL).value().cloned(),
            m.run(&p, a.clone(), FUEL).time(),
        ) else {
            return Ok(());
        };
        let Some(tq) = m.run(&q, mid, FUEL).time() else {
            return Ok(());
        };
        let t = m.run(&seq_compose(&p, &q), a, NatInf::Inf).time();
        ensure(t == Some(tp + tq), || format!("{t:?} ≠ {tp} + {tq}"))
    });
    r.law("par_compose_additive", n, move |rng, _| {
        let ((p, a), (q, b)) = (program_and_input(rng), program_and_input(rng));
        let (op, oq) = (m.run(&p, a.clone(), FUEL), m.run(&q, b.clone(), FUEL));
        let (Some(tp), Some(tq)) = (op.time(), oq.time()) else {
            return Ok(());
        };
        let out = m.run(&par_compose(&p, &q), Tree::cons(a, b), NatInf::Inf);
        let want = Tree::cons(op.value().unwrap().clone(), oq.value().unwrap().clone());
        ensure(
            out.time() == Some(tp + tq) && out.value() == Some(&want),
            || format!("{:?}", out.time()),
        )
    });
    r.law("restriction_square", n, |rng, _| {
        let fin = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.2) {
                NatInf::Inf
            } else {
                NatInf::Fin(rng.gen_range(0..100))
            }
        };
        let (l, nn, k) = (fin(rng), fin(rng), fin(rng));
        let f = Morphism::new(ProgramGen::default().terminating(rng), l);
        let g = Morphism::new(ProgramGen::default().terminating(rng), nn);
        let lhs = f.then(&g).restrict(l.checked_add(k).unwrap());
        let rhs = f.then(&g.restrict(k));
        ensure(lhs == rhs, || {
            format!("{:?} vs {:?}", lhs.budget, rhs.budget)
        })
    });
    r.law("retraction", n, |rng, i| {
        let tag = RetractTag::ALL[i as usize % 5];
        let t = match tag {
            RetractTag::Bool => Tree::bool(rng.gen()),
            RetractTag::Nat => Tree::nat(rng.gen_range(0..50)),
            RetractTag::Pair => Tree::cons(random_tree(rng, 5), random_tree(rng, 5)),
            RetractTag::Trace => {
                let (p, a) = program_and_input(rng);
                crate::machine::encode_trace(crate::machine::run(&p, a, NatInf::Fin(2_000)).trace())
            }
            RetractTag::Program => encode_program(&ProgramGen::default().terminating(rng)),
        };
        let back = tag.decode(&tag.encode(&t));
        ensure(back.in_image && back.value == t, || format!("{tag:?} {t}"))
    });
    r.law("self_interpreter", n.min(50), move |rng, _| {
        let (p, a) = program_and_input(rng);
        let direct = m.run(&p, a.clone(), FUEL);
        let Some(v) = direct.value() else {
            return Ok(());
        };
        let u = crate::machine::run(
            crate::machine::universal_program(),
            Tree::cons(encode_program(&p), a),
            NatInf::Inf,
        );
        ensure(u.value() == Some(v), || format!("{p:?}"))
    });
}

fn complexity_laws(r: &mut Runner) {
    let n = r.cfg.cases;
    let run_ref = |p: &Program, a: Tree, fuel| crate::machine::run(p, a, fuel);
    r.law("normal_form", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let t = run_ref(&p, a.clone(), NatInf::Fin(100_000))
            .time()
            .unwrap_or(500);
        let fuel = NatInf::Fin(rng.gen_range(t.saturating_sub(3)..=t + 3));
        let nf = normal_form_eval(&encode_program(&p), &a, fuel).map_err(|e| e.to_string())?;
        let direct = run_ref(&p, a, fuel).value().cloned();
        ensure(nf == direct, || format!("{p:?} at {fuel}"))
    });
    r.law("kleene_normal_form", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let code = encode_program(&p);
        let x = mu_search_effective(&code, &a, NatInf::Fin(100_000)).map_err(|e| e.to_string())?;
        let direct = run_ref(&p, a, NatInf::Fin(100_000)).value().cloned();
        ensure(x.and_then(|x| extract_output(&x).ok()) == direct, || {
            format!("{p:?}")
        })
    });
    r.law("internal_grading", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let susp = suspend(&encode_program(&p), &a).unwrap();
        let full = trace_eval(&susp, NatInf::Inf).unwrap();
        let t = run_ref(&p, a, NatInf::Inf).time().unwrap();
        let k = rng.gen_range(0..=t + 5);
        let at_k = trace_eval(&susp, NatInf::Fin(k)).unwrap();
        let want = if k >= t { full } else { None };
        ensure(at_k == want, || format!("{p:?} at {k} of {t}"))
    });
    r.law("section", n, |rng, i| {
        let m = if i % 2 == 0 {
            Measure::Time
        } else {
            Measure::Space
        };
        let g = if rng.gen_bool(0.1) {
            NatInf::Inf
        } else {
            NatInf::Fin(rng.gen_range(0..10_000))
        };
        let back = m.kappa_star(&m.kappa_lower(g));
        ensure(back == Ok(g), || format!("{m} {g}: {back:?}"))
    });
    r.law("order_agrees_with_leq", n, |rng, _| {
        let (a, b) = (
            random_grade(rng, MonoidKind::CompletedNat),
            random_grade(rng, MonoidKind::CompletedNat),
        );
        let ok = [Measure::Time, Measure::Space]
            .iter()
            .all(|&m| order_predicate(m, &a, &b) == leq(&a, &b));
        ensure(
            ok && order_predicate(Measure::Time, &a, &a) == Ok(true),
            || format!("{a} {b}"),
        )
    });
    r.law("measure_matches_run", n, move |rng, _| {
        let (p, a) = program_and_input(rng);
        let out = run_ref(&p, a.clone(), NatInf::Fin(100_000));
        let code = encode_program(&p);
        let time = measure(Measure::Time, &code, &a, NatInf::Fin(100_000)).unwrap();
        let space = measure(Measure::Space, &code, &a, NatInf::Fin(100_000)).unwrap();
        let want = |x: Option<u64>| x.map(NatInf::Fin);
        let s = match &out {
            crate::machine::Outcome::Halted { space, .. } => Some(*space),
            _ => None,
        };
        ensure(time == want(out.time()) && space == want(s), || {
            format!("{p:?}")
        })
    });
    r.law("blum_halting", n, |rng, i| {
        let p = if i % 5 == 0 {
            ProgramGen::default().divergent(rng)
        } else {
            ProgramGen::default().terminating(rng)
        };
        let a = random_tree(rng, 6);
        let ok = blum_halt_agree(&encode_program(&p), &a, NatInf::Fin(5_000)).unwrap();
        ensure(ok, || format!("{p:?}"))
    });
    r.law("blum_decidable", n, |rng, i| {
        let m = if i % 2 == 0 {
            Measure::Time
        } else {
            Measure::Space
        };
        let p = if i % 5 < 2 {
            ProgramGen::default().divergent(rng)
        } else {
            ProgramGen::default().terminating(rng)
        };
        let a = random_tree(rng, 6);
        let bound = rng.gen_range(0..200);
        let decided = blum_decide_leq(m, &encode_program(&p), &a, bound).unwrap();
        let brute = blum_brute_leq(m, &p, &a, bound, 20_000);
        ensure(decided == brute, || format!("{m} ≤ {bound}: {p:?}"))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::CostModel;

    #[test]
    fn every_suite_passes_on_the_reference_machine() {
        let report = run_suite(SuiteName::All, &SuiteConfig::new(7, 40));
        let bad: Vec<_> = report.laws.iter().filter(|l| l.violations > 0).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(report.law("trace_replay").is_some());
    }

    #[test]
    fn an_expensive_statement_rule_breaks_replay() {
        let mutant = Machine::with_cost(CostModel {
            statement: 2,
            ..CostModel::default()
        });
        let report = run_suite(
            SuiteName::Machine,
            &SuiteConfig {
                seed: 7,
                cases: 40,
                machine: mutant,
            },
        );
        assert!(!report.ok());
        assert!(report.law("trace_replay").unwrap().violations > 0);
        assert!(report.law("known_time").unwrap().violations > 0);
    }

    #[test]
    fn sampled_oracles_on_the_textbook_pairs() {
        assert!(leq_plus_sampled(&[7], &[0]));
        assert!(leq_plus_sampled(&[0, 1], &[0, 0, 1]));
        assert!(!leq_plus_sampled(&[0, 0, 1], &[0, 1]));
        assert!(leq_o_sampled(&[0, 3], &[0, 0, 1]));
        assert!(!leq_o_sampled(&[0, 0, 1], &[0, 9]));
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<SuiteName>(), Ok(SuiteName::All));
        assert!("nope".parse::<SuiteName>().is_err());
    }
}
