//! Kleene normal form, μ-search, Blum measures and normal complexity.
//!
//! A measure reads its value off a trace code (`κ*`), embeds grades back
//! as trace codes (`κ_*`) and compares grades (`⋖`). Time is the sum of
//! step costs, space the largest store.

mod normality;

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::grading::{Grade, GradeError, MonoidKind, NatInf};
use crate::machine::{
    decode_program, decode_record, decode_trace, encode_trace, extract_output, run, suspend,
    trace_eval, Config, DecodeError, ExtractError, Machine, Outcome, Program, TraceEntry,
    TraceRecord,
};
use crate::tree::Tree;

pub use normality::{
    calibrate_chi, fit_chi, measuring_program, normality_certify, Chi, NormalityEntry,
    NormalityReport, Regression, CALIBRATION_HEADROOM,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexityError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Grade(#[from] GradeError),
    #[error("the {0} measure has no internal measuring program")]
    Unsupported(Measure),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Time,
    Space,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Measure::Time => "time",
            Measure::Space => "space",
        })
    }
}

impl Measure {
    /// `κ*`: the grade recorded by a trace code. Incomplete traces measure `∞`.
    pub fn kappa_star(self, trace_code: &Tree) -> Result<NatInf, DecodeError> {
        let r = decode_record(trace_code)?;
        if !r.complete {
            return Ok(NatInf::Inf);
        }
        Ok(NatInf::Fin(match self {
            Measure::Time => r.time(),
            Measure::Space => r.space(),
        }))
    }

    /// `κ_*`: the shortest trace code that `κ*` reads as `m`. `∞` becomes
    /// the empty incomplete trace.
    pub fn kappa_lower(self, m: NatInf) -> Tree {
        let NatInf::Fin(m) = m else {
            return encode_record_parts(Vec::new(), false);
        };
        let entry = match self {
            Measure::Time => TraceEntry {
                cost: m,
                store: vec![Tree::NIL],
            },
            Measure::Space => TraceEntry {
                cost: 0,
                store: vec![Tree::nat(m)],
            },
        };
        encode_record_parts(vec![entry], true)
    }

    /// `⋖`, the usual order on `ℕ ∪ {∞}`.
    pub fn order(self, a: NatInf, b: NatInf) -> bool {
        a <= b
    }
}

fn encode_record_parts(entries: Vec<TraceEntry>, complete: bool) -> Tree {
    crate::machine::encode_record(&TraceRecord { entries, complete })
}

/// Order predicate of a measure on grades; both must be completed naturals.
pub fn order_predicate(m: Measure, g1: &Grade, g2: &Grade) -> Result<bool, GradeError> {
    match (g1.as_nat(), g2.as_nat()) {
        (Some(a), Some(b)) => Ok(m.order(a, b)),
        _ => {
            let bad = if g1.as_nat().is_none() { g1 } else { g2 };
            Err(GradeError::MixedMonoid {
                left: MonoidKind::CompletedNat,
                right: bad.kind(),
            })
        }
    }
}

/// `T(F, a, x)`: `x` codes the complete run of `F` on `a`.
pub fn kleene_t(f_code: &Tree, a: &Tree, x: &Tree) -> bool {
    let Ok(p) = decode_program(f_code) else {
        return false;
    };
    let Ok(trace) = decode_trace(x, &p) else {
        return false;
    };
    trace.complete && trace.configs[0].store == Config::initial(&p, a.clone()).store
}

/// Visit the trees with `size` cons nodes in lexicographic order of their
/// preorder strings, with `Nil` before `Cons`.
fn for_each_tree_of_size(
    size: u64,
    f: &mut impl FnMut(Tree) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn build(bits: &[bool]) -> Tree {
        // Right-to-left stack evaluation of the preorder string.
        let mut stack: Vec<Tree> = Vec::new();
        for &is_cons in bits.iter().rev() {
            if is_cons {
                let l = stack.pop().expect("well-formed preorder");
                let r = stack.pop().expect("well-formed preorder");
                stack.push(Tree::cons(l, r));
            } else {
                stack.push(Tree::NIL);
            }
        }
        stack.pop().expect("one tree")
    }
    fn go(
        bits: &mut Vec<bool>,
        conses_left: u64,
        open: u64,
        f: &mut impl FnMut(Tree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if open == 0 {
            return if conses_left == 0 {
                f(build(bits))
            } else {
                ControlFlow::Continue(())
            };
        }
        if open > 1 || conses_left == 0 {
            bits.push(false);
            go(bits, conses_left, open - 1, f)?;
            bits.pop();
        }
        if conses_left > 0 {
            bits.push(true);
            go(bits, conses_left - 1, open + 1, f)?;
            bits.pop();
        }
        ControlFlow::Continue(())
    }
    go(&mut Vec::new(), size, 1, f)
}

/// `μx. T(F, a, x)` by enumeration in size-then-lexicographic order, giving
/// up after `cap` candidates.
pub fn mu_search_naive(f_code: &Tree, a: &Tree, cap: u64) -> Option<Tree> {
    let mut tried = 0u64;
    let mut found = None;
    let mut size = 0;
    while tried < cap {
        let flow = for_each_tree_of_size(size, &mut |x| {
            if tried >= cap {
                return ControlFlow::Break(());
            }
            tried += 1;
            if kleene_t(f_code, a, &x) {
                found = Some(x);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            break;
        }
        size += 1;
    }
    found
}

/// The first `n` candidates of the naive search, for inspection.
pub fn canonical_trees(n: usize) -> Vec<Tree> {
    let mut out = Vec::with_capacity(n);
    let mut size = 0;
    while out.len() < n {
        let _ = for_each_tree_of_size(size, &mut |x| {
            if out.len() >= n {
                return ControlFlow::Break(());
            }
            out.push(x);
            ControlFlow::Continue(())
        });
        size += 1;
    }
    out
}

/// μ-search implemented by running the machine: the trace is the unique
/// witness, so producing it and checking `T` is enough.
pub fn mu_search_effective(
    f_code: &Tree,
    a: &Tree,
    fuel_cap: NatInf,
) -> Result<Option<Tree>, DecodeError> {
    let p = decode_program(f_code)?;
    Ok(match run(&p, a.clone(), fuel_cap) {
        Outcome::Halted { trace, .. } => {
            let x = encode_trace(&trace);
            kleene_t(f_code, a, &x).then_some(x)
        }
        Outcome::OutOfFuel { .. } => None,
    })
}

/// `w(t_n(s(F, a)))`; `None` where it is undefined.
pub fn normal_form_eval(
    f_code: &Tree,
    a: &Tree,
    n: NatInf,
) -> Result<Option<Tree>, ComplexityError> {
    let susp = suspend(f_code, a)?;
    Ok(match trace_eval(&susp, n)? {
        Some(code) => Some(extract_output(&code)?),
        None => None,
    })
}

/// `κ*(t_cap(s(F, a)))`; `None` where the run does not finish within `cap`.
pub fn measure(
    m: Measure,
    f_code: &Tree,
    a: &Tree,
    cap: NatInf,
) -> Result<Option<NatInf>, DecodeError> {
    let susp = suspend(f_code, a)?;
    trace_eval(&susp, cap)?
        .map(|code| m.kappa_star(&code))
        .transpose()
}

/// The measure is defined exactly when the run halts.
pub fn blum_halt_agree(f_code: &Tree, a: &Tree, cap: NatInf) -> Result<bool, DecodeError> {
    let p = decode_program(f_code)?;
    let halts = run(&p, a.clone(), cap).is_halted();
    Ok(measure(Measure::Time, f_code, a, cap)?.is_some() == halts)
}

/// Decide `c(F, a) ⋖ n` without ever running unboundedly. Time runs on fuel
/// `n`. Space stops as soon as the store exceeds `n` or a configuration
/// repeats, since a repeat within bounded space means divergence.
pub fn blum_decide_leq(m: Measure, f_code: &Tree, a: &Tree, n: u64) -> Result<bool, DecodeError> {
    let p = decode_program(f_code)?;
    Ok(match m {
        Measure::Time => Machine::default()
            .evaluate(&p, a.clone(), NatInf::Fin(n))
            .value
            .is_some(),
        Measure::Space => space_bounded_halts(&p, a, n),
    })
}

fn space_bounded_halts(p: &Program, a: &Tree, n: u64) -> bool {
    let machine = Machine::default();
    let mut c = Config::initial(p, a.clone());
    let mut seen = HashSet::new();
    loop {
        if c.store_size() > n {
            return false;
        }
        if c.is_terminal() {
            return true;
        }
        if !seen.insert(c.clone()) {
            return false;
        }
        machine.step_in_place(&mut c);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub n: u64,
    pub decided: bool,
    pub brute: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlumReport {
    pub program: String,
    pub input: Tree,
    pub measure: Measure,
    pub fuel_cap: u64,
    pub halt_agreement: bool,
    pub bound_checks: Vec<BoundCheck>,
}

impl BlumReport {
    pub fn ok(&self) -> bool {
        self.halt_agreement && self.bound_checks.iter().all(|b| b.decided == b.brute)
    }
}

/// Brute-force answer to `c(F, a) ⋖ n`: run up to `fuel_cap` and compare.
/// A run still going at the cap counts as divergent.
pub fn blum_brute_leq(m: Measure, p: &Program, a: &Tree, n: u64, fuel_cap: u64) -> bool {
    let e = Machine::default().evaluate(p, a.clone(), NatInf::Fin(fuel_cap));
    e.value.is_some()
        && match m {
            Measure::Time => e.time <= n,
            Measure::Space => e.space <= n,
        }
}

/// Check both Blum axioms for one program and input at the bounds `ns`.
pub fn blum_report(
    m: Measure,
    f_code: &Tree,
    a: &Tree,
    fuel_cap: u64,
    ns: &[u64],
) -> Result<BlumReport, DecodeError> {
    let p = decode_program(f_code)?;
    let halt_agreement = blum_halt_agree(f_code, a, NatInf::Fin(fuel_cap))?;
    let bound_checks = ns
        .iter()
        .map(|&n| {
            Ok(BoundCheck {
                n,
                decided: blum_decide_leq(m, f_code, a, n)?,
                brute: blum_brute_leq(m, &p, a, n, fuel_cap),
            })
        })
        .collect::<Result<_, DecodeError>>()?;
    Ok(BlumReport {
        program: crate::machine::print_program(&p),
        input: a.clone(),
        measure: m,
        fuel_cap,
        halt_agreement,
        bound_checks,
    })
}
