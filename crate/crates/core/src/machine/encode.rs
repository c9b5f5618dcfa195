//! Programs as data.
//!
//! Every syntax node is `Cons(tag, args)` where `tag` is a unary numeral and
//! `args` is a Nil-terminated list of sub-encodings. Variables are unary
//! numerals of their index. Tags start at 1 so that `Nil` is never a valid
//! node, which lets the self-interpreter reject junk cheaply.

use thiserror::Error;

use super::ast::{Block, Expr, Program, Stmt, Var};
use crate::tree::Tree;

pub mod tag {
    pub const PROGRAM: u64 = 1;
    pub const ASSIGN: u64 = 2;
    pub const WHILE: u64 = 3;
    pub const IF: u64 = 4;
    pub const SPLIT: u64 = 5;
    pub const JOIN: u64 = 6;
    pub const QUOTE: u64 = 7;
    pub const VAR: u64 = 8;
    pub const NIL: u64 = 9;
    pub const CONS: u64 = 10;
    pub const HD: u64 = 11;
    pub const TL: u64 = 12;
    pub const EQ: u64 = 13;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("ill-formed {what} code: {tree}")]
    IllFormed { what: &'static str, tree: String },
    #[error("unknown {what} tag {tag}")]
    UnknownTag { what: &'static str, tag: u64 },
}

fn ill(what: &'static str, t: &Tree) -> DecodeError {
    let mut tree = t.to_string();
    if tree.len() > 80 {
        tree.truncate(77);
        tree.push_str("...");
    }
    DecodeError::IllFormed { what, tree }
}

fn node(tag: u64, args: Vec<Tree>) -> Tree {
    Tree::cons(Tree::nat(tag), Tree::list(args))
}

fn var_code(v: Var) -> Tree {
    Tree::nat(u64::from(v.0))
}

pub fn encode_expr(e: &Expr) -> Tree {
    match e {
        Expr::Var(v) => node(tag::VAR, vec![var_code(*v)]),
        Expr::Nil => node(tag::NIL, vec![]),
        Expr::Cons(a, b) => node(tag::CONS, vec![encode_expr(a), encode_expr(b)]),
        Expr::Hd(a) => node(tag::HD, vec![encode_expr(a)]),
        Expr::Tl(a) => node(tag::TL, vec![encode_expr(a)]),
        Expr::Eq(a, b) => node(tag::EQ, vec![encode_expr(a), encode_expr(b)]),
    }
}

pub fn encode_block(b: &[Stmt]) -> Tree {
    Tree::list(b.iter().map(encode_stmt).collect::<Vec<_>>())
}

pub fn encode_stmt(s: &Stmt) -> Tree {
    match s {
        Stmt::Assign(v, e) => node(tag::ASSIGN, vec![var_code(*v), encode_expr(e)]),
        Stmt::While(e, b) => node(tag::WHILE, vec![encode_expr(e), encode_block(b)]),
        Stmt::If(e, a, b) => node(
            tag::IF,
            vec![encode_expr(e), encode_block(a), encode_block(b)],
        ),
        Stmt::Split { src, left, right } => node(
            tag::SPLIT,
            vec![var_code(*src), var_code(*left), var_code(*right)],
        ),
        Stmt::Join { left, right, dst } => node(
            tag::JOIN,
            vec![var_code(*left), var_code(*right), var_code(*dst)],
        ),
        Stmt::Quote(v, t) => node(tag::QUOTE, vec![var_code(*v), t.clone()]),
    }
}

/// `⌜p⌝`.
pub fn encode_program(p: &Program) -> Tree {
    node(tag::PROGRAM, vec![encode_block(&p.body)])
}

fn split_node(t: &Tree, what: &'static str) -> Result<(u64, Vec<Tree>), DecodeError> {
    let (Some(tag), Some(args)) = (t.left(), t.right()) else {
        return Err(ill(what, t));
    };
    let tag = tag.as_nat().ok_or_else(|| ill(what, t))?;
    Ok((tag, args.list_items()))
}

fn args<const N: usize>(
    t: &Tree,
    what: &'static str,
    items: Vec<Tree>,
) -> Result<[Tree; N], DecodeError> {
    <[Tree; N]>::try_from(items).map_err(|_| ill(what, t))
}

fn decode_var(t: &Tree) -> Result<Var, DecodeError> {
    t.as_nat()
        .and_then(|n| u32::try_from(n).ok())
        .map(Var)
        .ok_or_else(|| ill("variable", t))
}

pub fn decode_expr(t: &Tree) -> Result<Expr, DecodeError> {
    let what = "expression";
    let (tg, items) = split_node(t, what)?;
    Ok(match tg {
        tag::VAR => {
            let [v] = args(t, what, items)?;
            Expr::Var(decode_var(&v)?)
        }
        tag::NIL => {
            let [] = args(t, what, items)?;
            Expr::Nil
        }
        tag::CONS | tag::EQ => {
            let [a, b] = args(t, what, items)?;
            let (a, b) = (decode_expr(&a)?, decode_expr(&b)?);
            if tg == tag::CONS {
                Expr::cons(a, b)
            } else {
                Expr::eq(a, b)
            }
        }
        tag::HD | tag::TL => {
            let [a] = args(t, what, items)?;
            let a = decode_expr(&a)?;
            if tg == tag::HD {
                Expr::hd(a)
            } else {
                Expr::tl(a)
            }
        }
        other => return Err(DecodeError::UnknownTag { what, tag: other }),
    })
}

pub fn decode_block(t: &Tree) -> Result<Block, DecodeError> {
    // The list spine must end in Nil, which list_items guarantees by construction.
    t.list_items().iter().map(decode_stmt).collect()
}

pub fn decode_stmt(t: &Tree) -> Result<Stmt, DecodeError> {
    let what = "statement";
    let (tg, items) = split_node(t, what)?;
    Ok(match tg {
        tag::ASSIGN => {
            let [v, e] = args(t, what, items)?;
            Stmt::Assign(decode_var(&v)?, decode_expr(&e)?)
        }
        tag::WHILE => {
            let [e, b] = args(t, what, items)?;
            Stmt::While(decode_expr(&e)?, decode_block(&b)?)
        }
        tag::IF => {
            let [e, a, b] = args(t, what, items)?;
            Stmt::If(decode_expr(&e)?, decode_block(&a)?, decode_block(&b)?)
        }
        tag::SPLIT => {
            let [s, l, r] = args(t, what, items)?;
            Stmt::Split {
                src: decode_var(&s)?,
                left: decode_var(&l)?,
                right: decode_var(&r)?,
            }
        }
        tag::JOIN => {
            let [l, r, d] = args(t, what, items)?;
            Stmt::Join {
                left: decode_var(&l)?,
                right: decode_var(&r)?,
                dst: decode_var(&d)?,
            }
        }
        tag::QUOTE => {
            let [v, lit] = args(t, what, items)?;
            Stmt::Quote(decode_var(&v)?, lit)
        }
        other => return Err(DecodeError::UnknownTag { what, tag: other }),
    })
}

pub fn decode_program(t: &Tree) -> Result<Program, DecodeError> {
    let what = "program";
    let (tg, items) = split_node(t, what)?;
    if tg != tag::PROGRAM {
        return Err(DecodeError::UnknownTag { what, tag: tg });
    }
    let [body] = args(t, what, items)?;
    Ok(Program {
        body: decode_block(&body)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse::parse_program;

    #[test]
    fn identity_round_trip() {
        let p = Program::identity();
        assert_eq!(decode_program(&encode_program(&p)).unwrap(), p);
    }

    #[test]
    fn nil_is_not_a_program() {
        assert!(decode_program(&Tree::NIL).is_err());
        assert!(decode_program(&Tree::nat(1)).is_err());
        assert!(matches!(
            decode_program(&Tree::cons(Tree::nat(2), Tree::NIL)),
            Err(DecodeError::UnknownTag {
                what: "program",
                tag: 2
            })
        ));
    }

    #[test]
    fn rejects_wrong_arity_and_bad_vars() {
        let bad_arity = node(tag::PROGRAM, vec![Tree::list(vec![node(tag::VAR, vec![])])]);
        assert!(decode_program(&bad_arity).is_err());
        let bad_var = node(
            tag::PROGRAM,
            vec![Tree::list(vec![node(
                tag::ASSIGN,
                vec![Tree::cons(Tree::nat(1), Tree::NIL), encode_expr(&Expr::Nil)],
            )])],
        );
        assert!(decode_program(&bad_var).is_err());
    }

    #[test]
    fn nested_program_round_trip() {
        let p = parse_program(
            "split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; \
             if eq?(X2, nil) { X3 := quote (() . ()) } else { join (X1, X2) into X0 }",
        )
        .unwrap();
        assert_eq!(decode_program(&encode_program(&p)).unwrap(), p);
    }
}
