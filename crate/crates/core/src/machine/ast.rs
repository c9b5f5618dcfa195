use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::tree::Tree;

/// Program variable `Xk`. `X0` carries both input and output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub const IO: Var = Var(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Var),
    Nil,
    Cons(Box<Expr>, Box<Expr>),
    Hd(Box<Expr>),
    Tl(Box<Expr>),
    /// Tree equality; yields `true`/`false` in the boolean convention.
    Eq(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(k: u32) -> Expr {
        Expr::Var(Var(k))
    }

    pub fn cons(a: Expr, b: Expr) -> Expr {
        Expr::Cons(Box::new(a), Box::new(b))
    }

    pub fn hd(e: Expr) -> Expr {
        Expr::Hd(Box::new(e))
    }

    pub fn tl(e: Expr) -> Expr {
        Expr::Tl(Box::new(e))
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Eq(Box::new(a), Box::new(b))
    }

    pub fn node_count(&self) -> u64 {
        match self {
            Expr::Var(_) | Expr::Nil => 1,
            Expr::Hd(e) | Expr::Tl(e) => 1 + e.node_count(),
            Expr::Cons(a, b) | Expr::Eq(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Nil => {}
            Expr::Hd(e) | Expr::Tl(e) => e.vars(out),
            Expr::Cons(a, b) | Expr::Eq(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    fn rename(&self, f: &impl Fn(Var) -> Var) -> Expr {
        match self {
            Expr::Var(v) => Expr::Var(f(*v)),
            Expr::Nil => Expr::Nil,
            Expr::Hd(e) => Expr::hd(e.rename(f)),
            Expr::Tl(e) => Expr::tl(e.rename(f)),
            Expr::Cons(a, b) => Expr::cons(a.rename(f), b.rename(f)),
            Expr::Eq(a, b) => Expr::eq(a.rename(f), b.rename(f)),
        }
    }
}

/// Shared statement list; the machine's control frames point into these.
pub type Block = Arc<[Stmt]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Assign(Var, Expr),
    While(Expr, Block),
    If(Expr, Block, Block),
    /// `split src into (left, right)`: moves the halves of `src` out, leaving `src` nil.
    Split {
        src: Var,
        left: Var,
        right: Var,
    },
    /// `join (left, right) into dst`: moves both sources into a pair.
    Join {
        left: Var,
        right: Var,
        dst: Var,
    },
    /// `Xk := quote <tree>`: loads a literal. Administrative, like split and join.
    Quote(Var, Tree),
}

impl Stmt {
    /// Statements that cost nothing under the cost model.
    pub fn is_administrative(&self) -> bool {
        matches!(
            self,
            Stmt::Split { .. } | Stmt::Join { .. } | Stmt::Quote(..)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub body: Block,
}

impl Program {
    pub fn new(body: Vec<Stmt>) -> Self {
        Program { body: body.into() }
    }

    /// `X0 := X0`.
    pub fn identity() -> Self {
        Program::new(vec![Stmt::Assign(Var::IO, Expr::Var(Var::IO))])
    }

    /// Ignores its input and outputs `t`, at grade 0.
    pub fn constant(t: Tree) -> Self {
        Program::new(vec![Stmt::Quote(Var::IO, t)])
    }

    /// AST size: one per statement plus one per expression node.
    pub fn node_count(&self) -> u64 {
        fn block(b: &[Stmt]) -> u64 {
            b.iter()
                .map(|s| match s {
                    Stmt::Assign(_, e) => 1 + e.node_count(),
                    Stmt::While(e, body) => 1 + e.node_count() + block(body),
                    Stmt::If(e, a, b) => 1 + e.node_count() + block(a) + block(b),
                    Stmt::Split { .. } | Stmt::Join { .. } | Stmt::Quote(..) => 1,
                })
                .sum()
        }
        block(&self.body)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        fn block(b: &[Stmt], out: &mut BTreeSet<Var>) {
            for s in b {
                match s {
                    Stmt::Assign(v, e) => {
                        out.insert(*v);
                        e.vars(out);
                    }
                    Stmt::While(e, body) => {
                        e.vars(out);
                        block(body, out);
                    }
                    Stmt::If(e, a, b) => {
                        e.vars(out);
                        block(a, out);
                        block(b, out);
                    }
                    Stmt::Split { src, left, right } => out.extend([*src, *left, *right]),
                    Stmt::Join { left, right, dst } => out.extend([*left, *right, *dst]),
                    Stmt::Quote(v, _) => {
                        out.insert(*v);
                    }
                }
            }
        }
        let mut out = BTreeSet::from([Var::IO]);
        block(&self.body, &mut out);
        out
    }

    /// Number of store slots: one past the highest variable index.
    pub fn store_width(&self) -> usize {
        self.vars().last().map_or(1, |v| v.index() + 1)
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Program {
        fn block(b: &[Stmt], f: &impl Fn(Var) -> Var) -> Block {
            b.iter()
                .map(|s| match s {
                    Stmt::Assign(v, e) => Stmt::Assign(f(*v), e.rename(f)),
                    Stmt::While(e, body) => Stmt::While(e.rename(f), block(body, f)),
                    Stmt::If(e, a, b) => Stmt::If(e.rename(f), block(a, f), block(b, f)),
                    Stmt::Split { src, left, right } => Stmt::Split {
                        src: f(*src),
                        left: f(*left),
                        right: f(*right),
                    },
                    Stmt::Join { left, right, dst } => Stmt::Join {
                        left: f(*left),
                        right: f(*right),
                        dst: f(*dst),
                    },
                    Stmt::Quote(v, t) => Stmt::Quote(f(*v), t.clone()),
                })
                .collect()
        }
        Program {
            body: block(&self.body, &f),
        }
    }
}
