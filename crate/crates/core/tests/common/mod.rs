//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's evaluator, spider normaliser or order predicates.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use moncomp_core::diagram::{Diagram, Term};
use moncomp_core::machine::{Expr, Program, Stmt, Var};
use moncomp_core::Tree;

/// What a big-step run observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Big {
    Halted { value: Tree, time: u64, space: u64 },
    OutOfFuel { used: u64 },
}

impl Big {
    pub fn value(&self) -> Option<&Tree> {
        match self {
            Big::Halted { value, .. } => Some(value),
            Big::OutOfFuel { .. } => None,
        }
    }

    pub fn time(&self) -> Option<u64> {
        match self {
            Big::Halted { time, .. } => Some(*time),
            Big::OutOfFuel { .. } => None,
        }
    }
}

/// One costed or administrative step with the store it leaves behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub cost: u64,
    pub store: Vec<Tree>,
}

struct Interp {
    store: BTreeMap<u32, Tree>,
    width: u32,
    fuel: Option<u64>,
    used: u64,
    space: u64,
    events: Vec<Event>,
}

struct Exhausted;

fn expr_nodes(e: &Expr) -> u64 {
    match e {
        Expr::Var(_) | Expr::Nil => 1,
        Expr::Hd(a) | Expr::Tl(a) => 1 + expr_nodes(a),
        Expr::Cons(a, b) | Expr::Eq(a, b) => 1 + expr_nodes(a) + expr_nodes(b),
    }
}

fn max_var(p: &Program) -> u32 {
    fn e(x: &Expr) -> u32 {
        match x {
            Expr::Var(v) => v.0,
            Expr::Nil => 0,
            Expr::Hd(a) | Expr::Tl(a) => e(a),
            Expr::Cons(a, b) | Expr::Eq(a, b) => e(a).max(e(b)),
        }
    }
    fn s(st: &[Stmt]) -> u32 {
        st.iter()
            .map(|x| match x {
                Stmt::Assign(v, x) => v.0.max(e(x)),
                Stmt::While(x, b) => e(x).max(s(b)),
                Stmt::If(x, a, b) => e(x).max(s(a)).max(s(b)),
                Stmt::Split { src, left, right } => src.0.max(left.0).max(right.0),
                Stmt::Join { left, right, dst } => left.0.max(right.0).max(dst.0),
                Stmt::Quote(v, _) => v.0,
            })
            .max()
            .unwrap_or(0)
    }
    s(&p.body)
}

impl Interp {
    fn get(&self, v: Var) -> Tree {
        self.store.get(&v.0).cloned().unwrap_or(Tree::NIL)
    }

    fn take(&mut self, v: Var) -> Tree {
        self.store.insert(v.0, Tree::NIL).unwrap_or(Tree::NIL)
    }

    fn eval(&self, e: &Expr) -> Tree {
        match e {
            Expr::Var(v) => self.get(*v),
            Expr::Nil => Tree::NIL,
            Expr::Cons(a, b) => Tree::cons(self.eval(a), self.eval(b)),
            Expr::Hd(a) => self.eval(a).left().cloned().unwrap_or(Tree::NIL),
            Expr::Tl(a) => self.eval(a).right().cloned().unwrap_or(Tree::NIL),
            Expr::Eq(a, b) => {
                if self.eval(a) == self.eval(b) {
                    Tree::cons(Tree::NIL, Tree::NIL)
                } else {
                    Tree::NIL
                }
            }
        }
    }

    /// Pay for a step, refusing it if it would overrun the fuel.
    fn pay(&mut self, cost: u64) -> Result<(), Exhausted> {
        if let Some(f) = self.fuel {
            if self.used + cost > f {
                return Err(Exhausted);
            }
        }
        self.used += cost;
        Ok(())
    }

    fn record(&mut self, cost: u64) {
        let store: Vec<Tree> = (0..self.width).map(|i| self.get(Var(i))).collect();
        let size: u64 = store.iter().map(Tree::size).sum();
        self.space = self.space.max(size);
        self.events.push(Event { cost, store });
    }

    fn block(&mut self, stmts: &[Stmt]) -> Result<(), Exhausted> {
        for s in stmts {
            match s {
                Stmt::Assign(v, e) => {
                    let cost = 1 + expr_nodes(e);
                    self.pay(cost)?;
                    let val = self.eval(e);
                    self.store.insert(v.0, val);
                    self.record(cost);
                }
                Stmt::While(e, body) => loop {
                    let cost = 1 + expr_nodes(e);
                    self.pay(cost)?;
                    let go = self.eval(e).is_cons();
                    self.record(cost);
                    if !go {
                        break;
                    }
                    self.block(body)?;
                },
                Stmt::If(e, a, b) => {
                    let cost = 1 + expr_nodes(e);
                    self.pay(cost)?;
                    let go = self.eval(e).is_cons();
                    self.record(cost);
                    self.block(if go { a } else { b })?;
                }
                Stmt::Split { src, left, right } => {
                    let v = self.take(*src);
                    self.store
                        .insert(left.0, v.left().cloned().unwrap_or(Tree::NIL));
                    self.store
                        .insert(right.0, v.right().cloned().unwrap_or(Tree::NIL));
                    self.record(0);
                }
                Stmt::Join { left, right, dst } => {
                    let l = self.take(*left);
                    let r = if left == right {
                        l.clone()
                    } else {
                        self.take(*right)
                    };
                    self.store.insert(dst.0, Tree::cons(l, r));
                    self.record(0);
                }
                Stmt::Quote(v, t) => {
                    self.store.insert(v.0, t.clone());
                    self.record(0);
                }
            }
        }
        Ok(())
    }
}

/// Big-step run with the cost rule recounted from scratch. `fuel = None`
/// is unbounded, so only use it on programs known to halt.
pub fn big_step(p: &Program, input: &Tree, fuel: Option<u64>) -> (Big, Vec<Event>) {
    let width = max_var(p) + 1;
    let mut it = Interp {
        store: BTreeMap::new(),
        width,
        fuel,
        used: 0,
        space: 0,
        events: Vec::new(),
    };
    it.store.insert(0, input.clone());
    it.record(0);
    let big = match it.block(&p.body) {
        Ok(()) => Big::Halted {
            value: it.get(Var::IO),
            time: it.used,
            space: it.space,
        },
        Err(Exhausted) => Big::OutOfFuel { used: it.used },
    };
    (big, it.events)
}

pub type Rel = BTreeSet<(Vec<u32>, Vec<u32>)>;

fn all_tuples(k: u32, n: usize) -> Vec<Vec<u32>> {
    (0..k.pow(n as u32))
        .map(|mut code| {
            let mut t = vec![0; n];
            for slot in t.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            t
        })
        .collect()
}

/// Relational meaning of a generator-free diagram over `0..k`.
pub fn relation(d: &Diagram, k: u32) -> Rel {
    match d.term() {
        Term::Id(ts) => all_tuples(k, ts.len())
            .into_iter()
            .map(|t| (t.clone(), t))
            .collect(),
        Term::Copy(_) => (0..k).map(|x| (vec![x], vec![x, x])).collect(),
        Term::Delete(_) => (0..k).map(|x| (vec![x], vec![])).collect(),
        Term::Compare(_) => (0..k).map(|x| (vec![x, x], vec![x])).collect(),
        Term::Swap(..) => all_tuples(k, 2)
            .into_iter()
            .map(|t| (t.clone(), vec![t[1], t[0]]))
            .collect(),
        Term::Seq(a, b) => {
            let (ra, rb) = (relation(a, k), relation(b, k));
            let mut out = Rel::new();
            for (x, m) in &ra {
                for (m2, y) in &rb {
                    if m == m2 {
                        out.insert((x.clone(), y.clone()));
                    }
                }
            }
            out
        }
        Term::Par(a, b) => {
            let (ra, rb) = (relation(a, k), relation(b, k));
            let mut out = Rel::new();
            for (x1, y1) in &ra {
                for (x2, y2) in &rb {
                    out.insert((
                        [x1.clone(), x2.clone()].concat(),
                        [y1.clone(), y2.clone()].concat(),
                    ));
                }
            }
            out
        }
        Term::Gen { .. } => panic!("generator boxes have no fixed meaning"),
    }
}

fn eval_poly(c: &[i128], x: i128) -> i128 {
    c.iter().rev().fold(0, |acc, &k| acc * x + k)
}

/// `∃c ∀x. f(x) ≤ c + g(x)`.
pub fn leq_plus_oracle(f: &[u64], g: &[u64]) -> bool {
    let n = f.len().max(g.len());
    let d: Vec<i128> = (0..n)
        .map(|i| *f.get(i).unwrap_or(&0) as i128 - *g.get(i).unwrap_or(&0) as i128)
        .collect();
    bounded_above(&d)
}

/// Whether `d` is bounded above on ℕ. For degree ≤ 4 and coefficients in
/// `-5..=5` the turning points lie below 25, so the best constant is the
/// largest value on `0..=100`, and it must still hold far out.
pub fn bounded_above(d: &[i128]) -> bool {
    let c = (0..=100).map(|x| eval_poly(d, x)).max().unwrap_or(0);
    [10_000, 20_000].iter().all(|&x| eval_poly(d, x) <= c)
}

/// Points at which the `≤O` oracle samples.
pub fn o_points() -> Vec<i128> {
    std::iter::once(10_000).chain(1..=30).collect()
}

pub fn values_at(f: &[u64], points: &[i128]) -> Vec<i128> {
    let f: Vec<i128> = f.iter().map(|&x| x as i128).collect();
    points.iter().map(|&x| eval_poly(&f, x)).collect()
}

/// `∃c ≤ 1000, ∀x ≥ 1. f(x) ≤ c·g(x)` from values at [`o_points`].
pub fn leq_o_from_values(fv: &[i128], gv: &[i128]) -> bool {
    fv.iter().zip(gv).all(|(&fx, &gx)| fx <= 1000 * gx)
}

pub fn leq_o_oracle(f: &[u64], g: &[u64]) -> bool {
    let pts = o_points();
    leq_o_from_values(&values_at(f, &pts), &values_at(g, &pts))
}

/// Every coefficient vector of length `len` over `0..=max`.
pub fn all_polys(len: usize, max: u64) -> Vec<Vec<u64>> {
    all_tuples(max as u32 + 1, len)
        .into_iter()
        .map(|t| t.into_iter().map(u64::from).collect())
        .collect()
}
