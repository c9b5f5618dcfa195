//! Small-step semantics with exact cost and space accounting.
//!
//! Cost model: an executed `Assign`, `While` test or `If` test costs one for
//! the statement plus one per evaluated expression node. `split`, `join`,
//! `quote` and the descent into or out of statement lists cost nothing.
//! `hd`/`tl` of `nil` are `nil`, so stepping is total and the only partiality
//! is non-termination, which surfaces as fuel exhaustion.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use super::ast::{Block, Expr, Program, Stmt, Var};
use crate::grading::NatInf;
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub statement: u64,
    pub expr_node: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            statement: 1,
            expr_node: 1,
        }
    }
}

/// A position inside a statement list. Frames compare by block identity,
/// which is meaningful within the run of one program value.
#[derive(Debug, Clone)]
pub struct Frame {
    pub block: Block,
    pub pos: usize,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.block, &other.block) && self.pos == other.pos
    }
}

impl Eq for Frame {}

impl Hash for Frame {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.block) as *const Stmt as usize).hash(state);
        self.pos.hash(state);
    }
}

/// Machine configuration: the control continuation (innermost frame last)
/// and the store, one slot per program variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub control: Vec<Frame>,
    pub store: Vec<Tree>,
}

impl Config {
    /// `{X0: input}` with every other variable nil.
    pub fn initial(program: &Program, input: Tree) -> Config {
        let mut store = vec![Tree::NIL; program.store_width()];
        store[0] = input;
        Config::with_store(program, store)
    }

    /// Start of `program` over an explicit store. The store must be at least
    /// `program.store_width()` long.
    pub fn with_store(program: &Program, store: Vec<Tree>) -> Config {
        assert!(
            store.len() >= program.store_width(),
            "store narrower than program"
        );
        let mut c = Config {
            control: vec![Frame {
                block: program.body.clone(),
                pos: 0,
            }],
            store,
        };
        c.pop_finished();
        c
    }

    pub fn is_terminal(&self) -> bool {
        self.control.is_empty()
    }

    /// Total number of cons nodes held by the store.
    pub fn store_size(&self) -> u64 {
        self.store
            .iter()
            .fold(0u64, |acc, t| acc.saturating_add(t.size()))
    }

    pub fn output(&self) -> &Tree {
        &self.store[0]
    }

    /// The statement about to execute.
    pub fn current(&self) -> Option<&Stmt> {
        self.control.last().map(|f| &f.block[f.pos])
    }

    fn pop_finished(&mut self) {
        while let Some(top) = self.control.last() {
            if top.pos < top.block.len() {
                break;
            }
            self.control.pop();
        }
    }

    fn get(&self, v: Var) -> &Tree {
        &self.store[v.index()]
    }

    fn set(&mut self, v: Var, t: Tree) {
        self.store[v.index()] = t;
    }
}

/// Result of a single step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Terminal,
    Next { config: Config, cost: u64 },
}

/// Execution trace: `costs[i]` is the cost of the step that produced
/// `configs[i]`; a trace that starts a run has `costs[0] == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub configs: Vec<Config>,
    pub costs: Vec<u64>,
    pub complete: bool,
}

impl Trace {
    pub fn time(&self) -> u64 {
        self.costs.iter().sum()
    }

    pub fn space(&self) -> u64 {
        self.configs
            .iter()
            .map(Config::store_size)
            .max()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Empty segment; the unit of [`Trace::concat`].
    pub fn empty() -> Trace {
        Trace {
            configs: Vec::new(),
            costs: Vec::new(),
            complete: true,
        }
    }

    pub fn concat(mut self, other: Trace) -> Trace {
        if !other.is_empty() {
            self.complete = other.complete;
        }
        self.configs.extend(other.configs);
        self.costs.extend(other.costs);
        self
    }

    /// Split into `[0, at)` and `[at, len)`. The prefix is marked incomplete
    /// unless it is empty.
    pub fn split_at(&self, at: usize) -> (Trace, Trace) {
        let prefix = Trace {
            configs: self.configs[..at].to_vec(),
            costs: self.costs[..at].to_vec(),
            complete: at == 0,
        };
        let suffix = Trace {
            configs: self.configs[at..].to_vec(),
            costs: self.costs[at..].to_vec(),
            complete: self.complete || at == self.configs.len(),
        };
        (prefix, suffix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halted {
        value: Tree,
        time: u64,
        space: u64,
        trace: Trace,
    },
    OutOfFuel {
        steps_done: u64,
        partial: Trace,
    },
}

/// The observable part of an outcome: what two runs must agree on to
/// count as the same partial function at the same grade.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Observation {
    Halted { value: Tree, time: u64, space: u64 },
    OutOfFuel { steps_done: u64 },
}

impl Outcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }

    pub fn value(&self) -> Option<&Tree> {
        match self {
            Outcome::Halted { value, .. } => Some(value),
            Outcome::OutOfFuel { .. } => None,
        }
    }

    pub fn time(&self) -> Option<u64> {
        match self {
            Outcome::Halted { time, .. } => Some(*time),
            Outcome::OutOfFuel { .. } => None,
        }
    }

    pub fn trace(&self) -> &Trace {
        match self {
            Outcome::Halted { trace, .. } => trace,
            Outcome::OutOfFuel { partial, .. } => partial,
        }
    }

    pub fn observation(&self) -> Observation {
        match self {
            Outcome::Halted {
                value, time, space, ..
            } => Observation::Halted {
                value: value.clone(),
                time: *time,
                space: *space,
            },
            Outcome::OutOfFuel { steps_done, .. } => Observation::OutOfFuel {
                steps_done: *steps_done,
            },
        }
    }
}

/// Trace-free run summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Option<Tree>,
    pub time: u64,
    pub space: u64,
}

impl Evaluation {
    pub fn observation(&self) -> Observation {
        match &self.value {
            Some(value) => Observation::Halted {
                value: value.clone(),
                time: self.time,
                space: self.space,
            },
            None => Observation::OutOfFuel {
                steps_done: self.time,
            },
        }
    }
}

/// The standard-model machine, parameterised by its cost model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Machine {
    pub cost: CostModel,
}

impl Machine {
    pub fn with_cost(cost: CostModel) -> Self {
        Machine { cost }
    }

    fn eval(&self, e: &Expr, c: &Config, cost: &mut u64) -> Tree {
        *cost += self.cost.expr_node;
        match e {
            Expr::Var(v) => c.get(*v).clone(),
            Expr::Nil => Tree::NIL,
            Expr::Cons(a, b) => {
                let a = self.eval(a, c, cost);
                Tree::cons(a, self.eval(b, c, cost))
            }
            Expr::Hd(a) => self.eval(a, c, cost).hd(),
            Expr::Tl(a) => self.eval(a, c, cost).tl(),
            Expr::Eq(a, b) => {
                let a = self.eval(a, c, cost);
                Tree::bool(a == self.eval(b, c, cost))
            }
        }
    }

    /// Advance `c` by one statement, returning the step's cost, or `None`
    /// when `c` is terminal.
    pub fn step_in_place(&self, c: &mut Config) -> Option<u64> {
        let top = c.control.last()?;
        let block = top.block.clone();
        let pos = top.pos;
        let depth = c.control.len() - 1;
        let mut cost = 0;
        match &block[pos] {
            Stmt::Assign(v, e) => {
                cost += self.cost.statement;
                let val = self.eval(e, c, &mut cost);
                c.set(*v, val);
                c.control[depth].pos += 1;
            }
            Stmt::While(e, body) => {
                cost += self.cost.statement;
                if self.eval(e, c, &mut cost).is_cons() {
                    // The loop frame stays on the while so it is re-tested.
                    c.control.push(Frame {
                        block: body.clone(),
                        pos: 0,
                    });
                } else {
                    c.control[depth].pos += 1;
                }
            }
            Stmt::If(e, then, other) => {
                cost += self.cost.statement;
                let branch = if self.eval(e, c, &mut cost).is_cons() {
                    then
                } else {
                    other
                };
                c.control[depth].pos += 1;
                c.control.push(Frame {
                    block: branch.clone(),
                    pos: 0,
                });
            }
            Stmt::Split { src, left, right } => {
                let v = std::mem::take(&mut c.store[src.index()]);
                c.set(*left, v.hd());
                c.set(*right, v.tl());
                c.control[depth].pos += 1;
            }
            Stmt::Join { left, right, dst } => {
                let l = std::mem::take(&mut c.store[left.index()]);
                let r = if left == right {
                    l.clone()
                } else {
                    std::mem::take(&mut c.store[right.index()])
                };
                c.set(*dst, Tree::cons(l, r));
                c.control[depth].pos += 1;
            }
            Stmt::Quote(v, t) => {
                c.set(*v, t.clone());
                c.control[depth].pos += 1;
            }
        }
        c.pop_finished();
        Some(cost)
    }

    pub fn step(&self, c: &Config) -> Step {
        let mut next = c.clone();
        match self.step_in_place(&mut next) {
            None => Step::Terminal,
            Some(cost) => Step::Next { config: next, cost },
        }
    }

    /// Drive `c` until it halts or the next step would exceed `fuel`.
    /// `observe` sees every reached configuration with the cost of the step
    /// into it. Returns whether it halted and the total cost spent.
    pub(crate) fn drive(
        &self,
        mut c: Config,
        fuel: NatInf,
        mut observe: impl FnMut(&Config, u64),
    ) -> (Option<Config>, u64) {
        let mut used = 0u64;
        observe(&c, 0);
        loop {
            if c.is_terminal() {
                return (Some(c), used);
            }
            // The over-budget configuration is discarded, so stepping in place is fine.
            let cost = self
                .step_in_place(&mut c)
                .expect("non-terminal config steps");
            let total = used.saturating_add(cost);
            if !fuel.admits(total) {
                return (None, used);
            }
            used = total;
            observe(&c, cost);
        }
    }

    /// Run from an arbitrary configuration, recording the trace.
    pub fn run_config(&self, start: Config, fuel: NatInf) -> Outcome {
        let mut trace = Trace {
            configs: Vec::new(),
            costs: Vec::new(),
            complete: false,
        };
        let (end, used) = self.drive(start, fuel, |c, cost| {
            trace.configs.push(c.clone());
            trace.costs.push(cost);
        });
        match end {
            Some(end) => {
                trace.complete = true;
                Outcome::Halted {
                    value: end.output().clone(),
                    time: used,
                    space: trace.space(),
                    trace,
                }
            }
            None => Outcome::OutOfFuel {
                steps_done: used,
                partial: trace,
            },
        }
    }

    /// `u_n`: run `p` on `input` within `fuel`.
    pub fn run(&self, p: &Program, input: Tree, fuel: NatInf) -> Outcome {
        self.run_config(Config::initial(p, input), fuel)
    }

    /// Same result as [`Machine::run`] without materialising the trace.
    pub fn evaluate(&self, p: &Program, input: Tree, fuel: NatInf) -> Evaluation {
        let mut space = 0;
        let (end, used) = self.drive(Config::initial(p, input), fuel, |c, _| {
            space = space.max(c.store_size())
        });
        Evaluation {
            value: end.map(|c| c.output().clone()),
            time: used,
            space,
        }
    }
}

/// [`Machine::run`] under the default cost model.
pub fn run(p: &Program, input: Tree, fuel: NatInf) -> Outcome {
    Machine::default().run(p, input, fuel)
}

/// [`Machine::evaluate`] under the default cost model.
pub fn evaluate(p: &Program, input: Tree, fuel: NatInf) -> Evaluation {
    Machine::default().evaluate(p, input, fuel)
}

/// [`Machine::step`] under the default cost model.
pub fn step(c: &Config) -> Step {
    Machine::default().step(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse::parse_program;

    fn prog(s: &str) -> Program {
        parse_program(s).unwrap()
    }

    #[test]
    fn terminal_step_costs_nothing() {
        let c = Config::initial(&Program::new(vec![]), Tree::NIL);
        assert_eq!(step(&c), Step::Terminal);
    }

    #[test]
    fn identity_assignment_costs_two() {
        let c = Config::initial(&Program::identity(), Tree::NIL);
        match step(&c) {
            Step::Next { config, cost } => {
                assert_eq!(cost, 2);
                assert!(config.is_terminal());
                assert_eq!(config.store, vec![Tree::NIL]);
            }
            Step::Terminal => panic!("identity should step"),
        }
    }

    #[test]
    fn false_loop_test_skips_body_for_two() {
        let p = prog("while nil { X0 := cons(X0, X0) }");
        let Step::Next { config, cost } = step(&Config::initial(&p, Tree::nat(2))) else {
            panic!()
        };
        assert_eq!(cost, 2);
        assert!(config.is_terminal());
        assert_eq!(config.store[0], Tree::nat(2));
    }

    #[test]
    fn identity_run() {
        let t = Tree::parse("((() . ()) . ())").unwrap();
        match run(&Program::identity(), t.clone(), NatInf::Inf) {
            Outcome::Halted {
                value,
                time,
                space,
                trace,
            } => {
                assert_eq!(value, t);
                assert_eq!(time, 2);
                assert_eq!(space, t.size());
                assert_eq!(trace.len(), 2);
                assert!(trace.complete);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn zero_fuel_stops_costed_programs() {
        assert!(matches!(
            run(&Program::identity(), Tree::NIL, NatInf::Fin(0)),
            Outcome::OutOfFuel { steps_done: 0, .. }
        ));
    }

    #[test]
    fn looping_program_runs_out_of_fuel() {
        let p = prog("while cons(nil, nil) { }");
        let o = run(&p, Tree::NIL, NatInf::Fin(1000));
        match o {
            Outcome::OutOfFuel {
                steps_done,
                partial,
            } => {
                assert!(steps_done <= 1000 && steps_done > 990);
                assert!(!partial.complete);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn split_and_join_move_values() {
        let p = prog("split X0 into (X1, X2); join (X2, X1) into X0");
        let input = Tree::cons(Tree::nat(1), Tree::nat(2));
        let o = run(&p, input, NatInf::Fin(0));
        assert_eq!(o.value(), Some(&Tree::cons(Tree::nat(2), Tree::nat(1))));
        let last = o.trace().configs.last().unwrap();
        assert!(last.store[1].is_nil() && last.store[2].is_nil());
    }

    #[test]
    fn join_with_itself_copies() {
        let p = prog("join (X0, X0) into X0");
        let o = run(&p, Tree::nat(3), NatInf::Fin(0));
        assert_eq!(o.value(), Some(&Tree::cons(Tree::nat(3), Tree::nat(3))));
    }

    #[test]
    fn evaluate_matches_run() {
        let p =
            prog("split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2");
        let input = Tree::cons(Tree::nat(4), Tree::nat(2));
        for fuel in [0, 10, 39, 40, 41, 100] {
            let o = run(&p, input.clone(), NatInf::Fin(fuel));
            let e = evaluate(&p, input.clone(), NatInf::Fin(fuel));
            assert_eq!(o.observation(), e.observation(), "fuel {fuel}");
        }
    }

    #[test]
    fn if_without_else() {
        let p = prog("if X0 { X0 := tl X0 }; X1 := nil");
        assert_eq!(
            run(&p, Tree::nat(2), NatInf::Inf).value(),
            Some(&Tree::nat(1))
        );
        assert_eq!(run(&p, Tree::NIL, NatInf::Inf).value(), Some(&Tree::NIL));
    }
}
