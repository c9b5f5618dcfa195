//! Seeded generators for programs, trees, diagrams and grades.
//!
//! Every case of a sweep gets its own RNG from `(seed, index)`, so results
//! do not depend on evaluation order or thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{par_all, seq, Diagram};
use crate::grading::{Extended, Grade, MonoidKind, Multiset, NatInf};
use crate::machine::{Block, Expr, Program, Stmt, Var};
use crate::tree::Tree;

pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random tree with exactly `size` cons nodes.
pub fn tree_of_size(rng: &mut impl Rng, size: u64) -> Tree {
    // Explicit stack: build a random shape bottom-up from a size split plan.
    enum Job {
        Build(u64),
        Join,
    }
    let mut jobs = vec![Job::Build(size)];
    let mut done: Vec<Tree> = Vec::new();
    while let Some(job) = jobs.pop() {
        match job {
            Job::Build(0) => done.push(Tree::NIL),
            Job::Build(n) => {
                let left = rng.gen_range(0..n);
                jobs.push(Job::Join);
                jobs.push(Job::Build(n - 1 - left));
                jobs.push(Job::Build(left));
            }
            Job::Join => {
                let r = done.pop().expect("right built");
                let l = done.pop().expect("left built");
                done.push(Tree::cons(l, r));
            }
        }
    }
    done.pop().expect("tree built")
}

/// Mix of unary numerals, small lists and arbitrary shapes up to `max_size`.
pub fn random_tree(rng: &mut impl Rng, max_size: u64) -> Tree {
    let n = rng.gen_range(0..=max_size);
    match rng.gen_range(0..3) {
        0 => Tree::nat(n),
        1 => {
            let items: Vec<Tree> = (0..n / 2).map(|_| Tree::nat(rng.gen_range(0..3))).collect();
            Tree::list(items)
        }
        _ => tree_of_size(rng, n),
    }
}

/// Shape parameters for [`ProgramGen`].
#[derive(Debug, Clone, Copy)]
pub struct ProgramGen {
    pub max_nodes: u64,
    pub vars: u32,
    pub max_depth: u32,
}

impl Default for ProgramGen {
    fn default() -> Self {
        ProgramGen {
            max_nodes: 40,
            vars: 4,
            max_depth: 2,
        }
    }
}

struct Ctx<'a, R> {
    rng: &'a mut R,
    budget: i64,
    vars: u32,
    /// Loop counters of enclosing loops; never written inside their loop.
    protected: Vec<Var>,
}

impl<R: Rng> Ctx<'_, R> {
    fn writable(&mut self) -> Option<Var> {
        let free: Vec<Var> = (0..self.vars)
            .map(Var)
            .filter(|v| !self.protected.contains(v))
            .collect();
        free.choose(self.rng).copied()
    }

    fn any_var(&mut self) -> Var {
        Var(self.rng.gen_range(0..self.vars))
    }

    /// Inside loops at most one variable occurrence is allowed, so stores
    /// grow additively per iteration rather than doubling.
    fn expr(&mut self, depth: u32, var_budget: &mut u32) -> Expr {
        self.budget -= 1;
        let leaf = depth == 0 || self.budget <= 2 || self.rng.gen_bool(0.4);
        if leaf {
            return if *var_budget > 0 && self.rng.gen_bool(0.75) {
                *var_budget -= 1;
                Expr::Var(self.any_var())
            } else {
                Expr::Nil
            };
        }
        match self.rng.gen_range(0..4) {
            0 => {
                let a = self.expr(depth - 1, var_budget);
                Expr::cons(a, self.expr(depth - 1, var_budget))
            }
            1 => Expr::hd(self.expr(depth - 1, var_budget)),
            2 => Expr::tl(self.expr(depth - 1, var_budget)),
            _ => {
                let a = self.expr(depth - 1, var_budget);
                Expr::eq(a, self.expr(depth - 1, var_budget))
            }
        }
    }

    fn var_budget(&self) -> u32 {
        if self.protected.is_empty() {
            u32::MAX
        } else {
            1
        }
    }

    fn block(&mut self, depth: u32, max_stmts: usize) -> Vec<Stmt> {
        let n = self.rng.gen_range(1..=max_stmts);
        let mut out = Vec::new();
        for _ in 0..n {
            if self.budget <= 3 {
                break;
            }
            if let Some(s) = self.stmt(depth) {
                out.push(s);
            }
        }
        out
    }

    fn stmt(&mut self, depth: u32) -> Option<Stmt> {
        self.budget -= 1;
        let in_loop = !self.protected.is_empty();
        let roll = self.rng.gen_range(0..100);
        Some(if roll < 45 {
            let v = self.writable()?;
            let mut vb = self.var_budget();
            Stmt::Assign(v, self.expr(2, &mut vb))
        } else if roll < 60 && depth > 0 && self.budget > 8 {
            let counter = self.writable()?;
            self.budget -= 2;
            self.protected.push(counter);
            let mut body = self.block(depth - 1, 3);
            self.protected.pop();
            body.push(Stmt::Assign(counter, Expr::tl(Expr::Var(counter))));
            Stmt::While(Expr::Var(counter), Block::from(body))
        } else if roll < 75 && depth > 0 && self.budget > 6 {
            let mut vb = self.var_budget();
            let test = self.expr(1, &mut vb);
            let then = self.block(depth - 1, 2);
            let other = if self.rng.gen_bool(0.5) {
                self.block(depth - 1, 2)
            } else {
                Vec::new()
            };
            Stmt::If(test, Block::from(then), Block::from(other))
        } else if roll < 83 {
            let src = self.writable()?;
            let left = self.writable()?;
            let right = self.writable()?;
            Stmt::Split { src, left, right }
        } else if roll < 92 {
            let dst = self.writable()?;
            let left = self.writable()?;
            let mut right = self.writable()?;
            if in_loop && right == left {
                // A self-join copies, which would double the store each round.
                right = self.writable().filter(|&r| r != left)?;
            }
            Stmt::Join { left, right, dst }
        } else {
            let v = self.writable()?;
            let t = random_tree(self.rng, 4);
            Stmt::Quote(v, t)
        })
    }
}

impl ProgramGen {
    /// A program of at most `max_nodes` AST nodes. Loops count down a
    /// variable their body never writes, so almost every draw terminates.
    pub fn terminating(&self, rng: &mut impl Rng) -> Program {
        loop {
            let mut ctx = Ctx {
                rng,
                budget: self.max_nodes as i64,
                vars: self.vars,
                protected: Vec::new(),
            };
            let body = ctx.block(self.max_depth, 6);
            let p = Program::new(body);
            if p.node_count() <= self.max_nodes && !p.body.is_empty() {
                return p;
            }
        }
    }

    /// A program that diverges on every input: random straight-line code
    /// around one of a few non-terminating loop shapes.
    pub fn divergent(&self, rng: &mut impl Rng) -> Program {
        let small = ProgramGen {
            max_nodes: 10,
            vars: self.vars,
            max_depth: 0,
        };
        let prefix = small.terminating(rng).body.to_vec();
        let k = Var(rng.gen_range(1..self.vars.max(2)));
        let other = Var(0);
        let lp = match rng.gen_range(0..4) {
            0 => vec![Stmt::While(
                Expr::cons(Expr::Nil, Expr::Nil),
                Block::from(vec![]),
            )],
            1 => vec![
                Stmt::Assign(k, Expr::cons(Expr::Nil, Expr::Nil)),
                Stmt::While(
                    Expr::Var(k),
                    Block::from(vec![Stmt::Assign(
                        other,
                        Expr::cons(Expr::Nil, Expr::Var(other)),
                    )]),
                ),
            ],
            2 => vec![
                Stmt::Assign(k, Expr::cons(Expr::Nil, Expr::Var(k))),
                Stmt::While(
                    Expr::Var(k),
                    Block::from(vec![Stmt::Assign(k, Expr::cons(Expr::Nil, Expr::Var(k)))]),
                ),
            ],
            _ => vec![Stmt::While(
                Expr::eq(Expr::Var(k), Expr::Var(k)),
                Block::from(vec![Stmt::Assign(k, Expr::tl(Expr::Var(k)))]),
            )],
        };
        let mut body = prefix;
        body.extend(lp);
        Program::new(body)
    }
}

/// Spider-fragment diagram on base type `A` with at most `max_gens`
/// copy/delete/compare/swap boxes.
pub fn random_spider_diagram(rng: &mut impl Rng, max_gens: usize) -> Diagram {
    let width = rng.gen_range(1..=3usize);
    random_spider_diagram_from(rng, width, max_gens)
}

/// As [`random_spider_diagram`], with a domain of exactly `width` wires.
pub fn random_spider_diagram_from(rng: &mut impl Rng, width: usize, max_gens: usize) -> Diagram {
    let a = "A";
    let ids = |n: usize| Diagram::id(vec![a.to_string(); n]);
    let mut width = width;
    let mut d = ids(width);
    for _ in 0..rng.gen_range(0..=max_gens) {
        let mut ops: Vec<u8> = vec![0];
        if width >= 1 {
            ops.push(1);
        }
        if width >= 2 {
            ops.extend([2, 3]);
        }
        if width >= 5 {
            ops.retain(|&o| o != 0);
        }
        let op = *ops.choose(rng).expect("some op applies");
        let (gen, arity) = match op {
            0 if width == 0 => break,
            0 => (Diagram::copy(a), 1),
            1 => (Diagram::delete(a), 1),
            2 => (Diagram::compare(a), 2),
            _ => (Diagram::swap(a, a), 2),
        };
        let at = rng.gen_range(0..=width - arity);
        let layer = par_all(&[ids(at), gen.clone(), ids(width - at - arity)]);
        d = seq(&d, &layer).expect("layer boundaries match");
        width = width - arity + gen.cod().len();
    }
    d
}

pub fn random_multiset(rng: &mut impl Rng) -> Multiset {
    const ATOMS: [&str; 4] = ["x", "y", "f(x)", "g(x,y)"];
    let mut m = Multiset::new();
    for _ in 0..rng.gen_range(0..4) {
        m.insert(*ATOMS.choose(rng).expect("atoms"), rng.gen_range(1..3));
    }
    m
}

/// Random grade of the given kind; about one in ten is `∞`.
pub fn random_grade(rng: &mut impl Rng, kind: MonoidKind) -> Grade {
    if rng.gen_bool(0.1) {
        return Grade::infinity(kind);
    }
    let poly = |rng: &mut dyn rand::RngCore| {
        let deg = rng.gen_range(0..4);
        (0..deg).map(|_| rng.gen_range(0..6)).collect::<Vec<u64>>()
    };
    match kind {
        MonoidKind::CompletedNat => Grade::Nat(NatInf::Fin(rng.gen_range(0..1000))),
        MonoidKind::MultisetExpr => Grade::Multiset(Extended::Finite(random_multiset(rng))),
        MonoidKind::PolyPlusClass => Grade::poly_plus(poly(rng)),
        MonoidKind::PolyOClass => Grade::poly_o(poly(rng)),
    }
}
