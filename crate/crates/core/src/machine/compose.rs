//! Composition of programs and budgeted morphisms of the graded category.

use serde::Serialize;

use super::ast::{Program, Stmt, Var};
use super::encode::{decode_program, encode_program, DecodeError};
use super::exec::{run, Outcome};
use super::parse::parse_program;
use super::universal::universal_program;
use crate::grading::NatInf;
use crate::tree::Tree;

/// `p ; q`. The bodies are concatenated with `q`'s locals renamed apart,
/// so there is no glue cost and `time(p;q, a) = time(p, a) + time(q, p(a))`.
pub fn seq_compose(p: &Program, q: &Program) -> Program {
    let offset = p.store_width() as u32;
    let q = q.rename(|v| {
        if v == Var::IO {
            v
        } else {
            Var(v.0 + offset - 1)
        }
    });
    Program::new(p.body.iter().chain(q.body.iter()).cloned().collect())
}

/// `p ⊗ q` on pairs: split the input, run both halves in disjoint
/// variables, join the results. Splitting and joining cost nothing.
pub fn par_compose(p: &Program, q: &Program) -> Program {
    let left = Var(1);
    let right = Var(1 + p.store_width() as u32);
    let p = p.rename(|v| Var(v.0 + left.0));
    let q = q.rename(|v| Var(v.0 + right.0));
    let mut body = vec![Stmt::Split {
        src: Var::IO,
        left,
        right,
    }];
    body.extend(p.body.iter().cloned());
    body.extend(q.body.iter().cloned());
    body.push(Stmt::Join {
        left,
        right,
        dst: Var::IO,
    });
    Program::new(body)
}

/// A program together with the grade budget it is allowed to consume.
/// Two morphisms are equal when program and budget are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub program: Program,
    pub budget: NatInf,
}

impl Morphism {
    pub fn new(program: Program, budget: NatInf) -> Self {
        Morphism { program, budget }
    }

    pub fn unbounded(program: Program) -> Self {
        Morphism {
            program,
            budget: NatInf::Inf,
        }
    }

    pub fn run(&self, input: Tree) -> Outcome {
        run(&self.program, input, self.budget)
    }

    /// `f ↾ n`: same program, budget `budget ∧ n`.
    pub fn restrict(&self, n: NatInf) -> Morphism {
        Morphism {
            program: self.program.clone(),
            budget: self.budget.min(n),
        }
    }

    /// `f ; g` with budget `ℓ ⊕ n`.
    pub fn then(&self, g: &Morphism) -> Morphism {
        Morphism {
            program: seq_compose(&self.program, &g.program),
            budget: self.budget.checked_add(g.budget).unwrap_or(NatInf::Inf),
        }
    }

    /// `f ⊗ g` with budget `ℓ ⊕ n`.
    pub fn tensor(&self, g: &Morphism) -> Morphism {
        Morphism {
            program: par_compose(&self.program, &g.program),
            budget: self.budget.checked_add(g.budget).unwrap_or(NatInf::Inf),
        }
    }
}

/// `restrict(m, n)`.
pub fn restrict(m: &Morphism, n: NatInf) -> Morphism {
    m.restrict(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataService {
    Copy,
    Delete,
    Compare,
}

/// Copy and delete are grade 0. Compare returns `a` on `Cons(a, a)` and
/// diverges on unequal pairs; its equality test is costed.
pub fn data_service_morphism(kind: DataService) -> Morphism {
    match kind {
        DataService::Copy => Morphism::new(
            Program::new(vec![Stmt::Join {
                left: Var::IO,
                right: Var::IO,
                dst: Var::IO,
            }]),
            NatInf::Fin(0),
        ),
        DataService::Delete => Morphism::new(Program::constant(Tree::NIL), NatInf::Fin(0)),
        DataService::Compare => Morphism::unbounded(
            parse_program(
                "split X0 into (X1, X2);
                 if eq?(X1, X2) { X0 := X1 } else { while cons(nil, nil) { } }",
            )
            .expect("compare source parses"),
        ),
    }
}

/// `γ(h) = (h ⊗ A) ; u`: on `Cons(x, a)`, run `h` on `x` to obtain a program
/// code and evaluate that code on `a` with the universal program.
pub fn gamma(h_code: &Tree) -> Result<Morphism, DecodeError> {
    let h = decode_program(h_code)?;
    let passthrough = Program::new(vec![]);
    Ok(Morphism::unbounded(seq_compose(
        &par_compose(&h, &passthrough),
        universal_program(),
    )))
}

/// The intensional witness of a morphism: the code of its program.
pub fn program_of(m: &Morphism) -> Tree {
    encode_program(&m.program)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(s: &str) -> Program {
        parse_program(s).unwrap()
    }

    #[test]
    fn sequential_time_is_additive() {
        let id = Program::identity();
        let t = Tree::nat(3);
        let once = run(&id, t.clone(), NatInf::Inf).time().unwrap();
        let twice = run(&seq_compose(&id, &id), t, NatInf::Inf).time().unwrap();
        assert_eq!(twice, 2 * once);
    }

    #[test]
    fn sequential_locals_do_not_leak() {
        // p leaves garbage in X1; q reads X1 expecting nil.
        let p = prog("X1 := cons(nil, nil)");
        let q = prog("X0 := X1");
        let out = run(&seq_compose(&p, &q), Tree::nat(2), NatInf::Inf);
        assert_eq!(out.value(), Some(&Tree::NIL));
    }

    #[test]
    fn parallel_composition_pairs_results() {
        let p = prog("X0 := tl X0");
        let q = prog("X1 := X0; X0 := cons(X1, X0)");
        let (a, b) = (Tree::nat(2), Tree::nat(1));
        let o = run(
            &par_compose(&p, &q),
            Tree::cons(a.clone(), b.clone()),
            NatInf::Inf,
        );
        let pa = run(&p, a, NatInf::Inf);
        let qb = run(&q, b, NatInf::Inf);
        assert_eq!(
            o.value().unwrap(),
            &Tree::cons(pa.value().unwrap().clone(), qb.value().unwrap().clone())
        );
        assert_eq!(o.time().unwrap(), pa.time().unwrap() + qb.time().unwrap());
    }

    #[test]
    fn restriction_laws() {
        let f = Morphism::unbounded(Program::identity());
        assert_eq!(f.restrict(NatInf::Inf), f);
        let (m, n) = (NatInf::Fin(7), NatInf::Fin(3));
        assert_eq!(f.restrict(m).restrict(n), f.restrict(m.min(n)));
        assert!(!f.restrict(NatInf::Fin(1)).run(Tree::NIL).is_halted());
        assert!(f.restrict(NatInf::Fin(2)).run(Tree::NIL).is_halted());
    }

    #[test]
    fn data_services() {
        let t = Tree::nat(2);
        let copy = data_service_morphism(DataService::Copy);
        let o = copy.run(t.clone());
        assert_eq!(o.value(), Some(&Tree::cons(t.clone(), t.clone())));
        assert_eq!(o.time(), Some(0));
        let del = data_service_morphism(DataService::Delete).run(t.clone());
        assert_eq!((del.value(), del.time()), (Some(&Tree::NIL), Some(0)));
        let cmp = data_service_morphism(DataService::Compare);
        assert_eq!(cmp.run(Tree::cons(t.clone(), t.clone())).value(), Some(&t));
        let unequal = Tree::cons(Tree::NIL, Tree::nat(1));
        assert!(!cmp.restrict(NatInf::Fin(10_000)).run(unequal).is_halted());
    }

    #[test]
    fn gamma_dispatches_through_the_universal_program() {
        let f = prog("X0 := cons(X0, X0)");
        let h = Program::constant(encode_program(&f));
        let g = gamma(&encode_program(&h)).unwrap();
        let a = Tree::nat(1);
        let o = g.run(Tree::cons(Tree::NIL, a.clone()));
        assert_eq!(o.value(), Some(&Tree::cons(a.clone(), a)));
        assert!(gamma(&Tree::NIL).is_err());
    }

    #[test]
    fn gamma_on_non_code_output_yields_nil() {
        let h = Program::constant(Tree::nat(3));
        let g = gamma(&encode_program(&h)).unwrap();
        assert_eq!(
            g.run(Tree::cons(Tree::NIL, Tree::nat(2))).value(),
            Some(&Tree::NIL)
        );
    }
}
