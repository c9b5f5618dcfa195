//! The evaluator family of the standard model: the partial evaluator
//! (`smn`), suspensions, the graded trace evaluator `t_n` and the output
//! extractor `w`. Together they factor the graded universal evaluator as
//! `u_n = s ; t_n ; w`.

use thiserror::Error;

use super::ast::{Program, Stmt, Var};
use super::encode::{decode_program, encode_program, DecodeError};
use super::exec::{Config, Machine, Outcome};
use super::trace::{decode_record, encode_trace};
use crate::grading::NatInf;
use crate::tree::{Tree, View};

/// Specialise `f_code` to a fixed first input component `a`: the result
/// is the code of a program that maps `b` to what `F` maps `Cons(a, b)` to.
///
/// The prefix `Xf := quote a; join (Xf, X0) into X0` costs nothing and
/// leaves `Xf` empty, so time and space of the specialised run are exactly
/// those of `F` on the pair.
pub fn smn(f_code: &Tree, a: &Tree) -> Result<Tree, DecodeError> {
    let f = decode_program(f_code)?;
    Ok(encode_program(&specialize(&f, a.clone())))
}

/// Program-level form of [`smn`].
pub fn specialize(f: &Program, a: Tree) -> Program {
    let fresh = Var(f.store_width() as u32);
    let mut body = vec![
        Stmt::Quote(fresh, a),
        Stmt::Join {
            left: fresh,
            right: Var::IO,
            dst: Var::IO,
        },
    ];
    body.extend(f.body.iter().cloned());
    Program::new(body)
}

/// Closed suspension of `F` on `a`: `Cons(⌜F⌝, initial store)`.
pub fn suspend(f_code: &Tree, a: &Tree) -> Result<Tree, DecodeError> {
    let f = decode_program(f_code)?;
    let config = Config::initial(&f, a.clone());
    Ok(Tree::cons(f_code.clone(), Tree::list(config.store)))
}

/// Inverse of [`suspend`]: the program and its starting configuration.
pub fn decode_suspension(susp: &Tree) -> Result<(Program, Config), DecodeError> {
    let View::Cons(code, store) = susp.view() else {
        return Err(DecodeError::IllFormed {
            what: "suspension",
            tree: susp.to_string(),
        });
    };
    let program = decode_program(code)?;
    let store = store.list_items();
    if store.len() != program.store_width() {
        return Err(DecodeError::IllFormed {
            what: "suspension",
            tree: "store width mismatch".into(),
        });
    }
    let config = Config::with_store(&program, store);
    Ok((program, config))
}

/// `t_n`: run a suspension within `budget` and return the code of its
/// complete trace, or `None` where the graded evaluator is undefined.
pub fn trace_eval(susp: &Tree, budget: NatInf) -> Result<Option<Tree>, DecodeError> {
    trace_eval_with(&Machine::default(), susp, budget)
}

pub fn trace_eval_with(
    m: &Machine,
    susp: &Tree,
    budget: NatInf,
) -> Result<Option<Tree>, DecodeError> {
    let (_, config) = decode_suspension(susp)?;
    Ok(match m.run_config(config, budget) {
        Outcome::Halted { trace, .. } => Some(encode_trace(&trace)),
        Outcome::OutOfFuel { .. } => None,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("cannot extract an output from an incomplete trace")]
    Incomplete,
}

/// `w`: the final `X0` of a complete trace code.
pub fn extract_output(trace_code: &Tree) -> Result<Tree, ExtractError> {
    let record = decode_record(trace_code)?;
    if !record.complete {
        return Err(ExtractError::Incomplete);
    }
    record.output().cloned().ok_or(ExtractError::Incomplete)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::exec::run;
    use crate::machine::parse::parse_program;

    #[test]
    fn specialising_first_projection_returns_the_constant() {
        let fst = parse_program("X0 := hd X0").unwrap();
        let a = Tree::nat(3);
        let code = smn(&encode_program(&fst), &a).unwrap();
        let specialised = decode_program(&code).unwrap();
        for b in [Tree::NIL, Tree::nat(1), Tree::cons(Tree::nat(2), Tree::NIL)] {
            assert_eq!(run(&specialised, b, NatInf::Inf).value(), Some(&a));
        }
    }

    #[test]
    fn smn_rejects_non_programs() {
        assert!(smn(&Tree::NIL, &Tree::NIL).is_err());
        assert!(suspend(&Tree::nat(4), &Tree::NIL).is_err());
    }

    #[test]
    fn suspension_of_identity() {
        let code = encode_program(&Program::identity());
        let s = suspend(&code, &Tree::NIL).unwrap();
        assert_eq!(s, Tree::cons(code, Tree::list(vec![Tree::NIL])));
        let (p, c) = decode_suspension(&s).unwrap();
        assert_eq!(p, Program::identity());
        assert_eq!(c.store, vec![Tree::NIL]);
        assert!(!c.is_terminal());
    }

    #[test]
    fn trace_eval_and_extract_on_identity() {
        let code = encode_program(&Program::identity());
        let t = Tree::nat(5);
        let s = suspend(&code, &t).unwrap();
        let tc = trace_eval(&s, NatInf::Inf).unwrap().unwrap();
        assert_eq!(decode_record(&tc).unwrap().entries.len(), 2);
        assert_eq!(extract_output(&tc).unwrap(), t);
        assert_eq!(trace_eval(&s, NatInf::Fin(0)).unwrap(), None);
        assert_eq!(trace_eval(&s, NatInf::Fin(1)).unwrap(), None);
        assert!(trace_eval(&s, NatInf::Fin(2)).unwrap().is_some());
    }

    #[test]
    fn extraction_refuses_incomplete_traces() {
        let p = parse_program("while cons(nil, nil) { }").unwrap();
        let o = run(&p, Tree::NIL, NatInf::Fin(20));
        assert_eq!(
            extract_output(&encode_trace(o.trace())),
            Err(ExtractError::Incomplete)
        );
        assert!(extract_output(&Tree::list(vec![Tree::NIL])).is_err());
    }
}
