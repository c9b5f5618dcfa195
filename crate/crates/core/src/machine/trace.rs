//! Trace codes.
//!
//! A trace code is the list of its entries, each `Cons(cost, store)` where
//! `cost` is the unary cost of the step into that configuration and `store`
//! lists the variable slots `X0, X1, ...`. Control is not recorded: the
//! machine is deterministic, so the program and the first store determine
//! it, and [`decode_trace`] rebuilds it by replay. An incomplete trace is
//! marked by a leading `Nil` element, which can never be an entry.
//!
//! Complete codes concatenate by list append, with `Nil` as the unit.

use thiserror::Error;

use super::ast::Program;
use super::encode::DecodeError;
use super::exec::{Config, Machine, Trace};
use crate::tree::{Tree, View};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub cost: u64,
    pub store: Vec<Tree>,
}

impl TraceEntry {
    pub fn store_size(&self) -> u64 {
        self.store
            .iter()
            .fold(0u64, |acc, t| acc.saturating_add(t.size()))
    }
}

/// Program-free content of a trace code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub entries: Vec<TraceEntry>,
    pub complete: bool,
}

impl TraceRecord {
    pub fn time(&self) -> u64 {
        self.entries.iter().map(|e| e.cost).sum()
    }

    pub fn space(&self) -> u64 {
        self.entries
            .iter()
            .map(TraceEntry::store_size)
            .max()
            .unwrap_or(0)
    }

    pub fn output(&self) -> Option<&Tree> {
        self.entries.last().map(|e| &e.store[0])
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("trace entry {index} does not follow from its predecessor: {reason}")]
    NotAStep { index: usize, reason: String },
    #[error("trace is empty")]
    Empty,
}

impl Trace {
    pub fn record(&self) -> TraceRecord {
        TraceRecord {
            entries: self
                .configs
                .iter()
                .zip(&self.costs)
                .map(|(c, &cost)| TraceEntry {
                    cost,
                    store: c.store.clone(),
                })
                .collect(),
            complete: self.complete,
        }
    }
}

pub fn encode_record(r: &TraceRecord) -> Tree {
    let entries = Tree::list(
        r.entries
            .iter()
            .map(|e| Tree::cons(Tree::nat(e.cost), Tree::list(e.store.iter().cloned())))
            .collect::<Vec<_>>(),
    );
    if r.complete {
        entries
    } else {
        Tree::cons(Tree::NIL, entries)
    }
}

pub fn encode_trace(tr: &Trace) -> Tree {
    encode_record(&tr.record())
}

pub fn decode_record(t: &Tree) -> Result<TraceRecord, DecodeError> {
    let bad = || DecodeError::IllFormed {
        what: "trace",
        tree: truncate(t),
    };
    let (entries, complete) = match t.view() {
        View::Cons(h, rest) if h.is_nil() => (rest, false),
        _ => (t, true),
    };
    let entries = entries
        .list_items()
        .iter()
        .map(|e| {
            let (cost, store) = match e.view() {
                View::Cons(c, s) => (c, s),
                View::Nil => return Err(bad()),
            };
            let cost = cost.as_nat().ok_or_else(bad)?;
            let store = store.list_items();
            if store.is_empty() {
                return Err(bad());
            }
            Ok(TraceEntry { cost, store })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TraceRecord { entries, complete })
}

fn truncate(t: &Tree) -> String {
    let mut s = t.to_string();
    if s.len() > 80 {
        s.truncate(77);
        s.push_str("...");
    }
    s
}

/// Rebuild the full trace of a run of `program` from its code, checking that
/// every entry is the machine's step from the previous one.
pub fn decode_trace(t: &Tree, program: &Program) -> Result<Trace, TraceError> {
    decode_trace_with(&Machine::default(), t, program)
}

pub fn decode_trace_with(m: &Machine, t: &Tree, program: &Program) -> Result<Trace, TraceError> {
    let record = decode_record(t)?;
    let first = record.entries.first().ok_or(TraceError::Empty)?;
    let not_step = |index, reason: &str| TraceError::NotAStep {
        index,
        reason: reason.to_string(),
    };
    if first.cost != 0 {
        return Err(not_step(0, "a run starts at cost 0"));
    }
    if first.store.len() != program.store_width() {
        return Err(not_step(0, "store width differs from the program's"));
    }
    let mut config = Config::with_store(program, first.store.clone());
    let mut trace = Trace {
        configs: vec![config.clone()],
        costs: vec![0],
        complete: record.complete,
    };
    for (i, entry) in record.entries.iter().enumerate().skip(1) {
        let cost = m
            .step_in_place(&mut config)
            .ok_or_else(|| not_step(i, "predecessor is terminal"))?;
        if cost != entry.cost {
            return Err(not_step(i, "cost differs"));
        }
        if config.store != entry.store {
            return Err(not_step(i, "store differs"));
        }
        trace.configs.push(config.clone());
        trace.costs.push(cost);
    }
    if record.complete != config.is_terminal() {
        return Err(not_step(
            record.entries.len() - 1,
            "completion flag disagrees with the final control",
        ));
    }
    Ok(trace)
}

/// Concatenate two trace codes; the result is complete when its last
/// non-empty part is.
pub fn concat_codes(a: &Tree, b: &Tree) -> Result<Tree, DecodeError> {
    let mut ra = decode_record(a)?;
    let rb = decode_record(b)?;
    if !rb.entries.is_empty() {
        ra.complete = rb.complete;
    }
    ra.entries.extend(rb.entries);
    Ok(encode_record(&ra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::NatInf;
    use crate::machine::exec::run;
    use crate::machine::parse::parse_program;

    #[test]
    fn identity_trace_code_is_tiny() {
        let o = run(&Program::identity(), Tree::NIL, NatInf::Inf);
        let code = encode_trace(o.trace());
        assert_eq!(
            code.to_string(),
            "((() . (() . ())) . (((() . (() . ())) . (() . ())) . ()))"
        );
        assert_eq!(code.size(), 8);
    }

    #[test]
    fn round_trip_through_replay() {
        let p = parse_program(
            "split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2",
        )
        .unwrap();
        let o = run(&p, Tree::cons(Tree::nat(3), Tree::nat(1)), NatInf::Inf);
        let code = encode_trace(o.trace());
        assert_eq!(&decode_trace(&code, &p).unwrap(), o.trace());
        assert_eq!(decode_record(&code).unwrap().time(), o.time().unwrap());
    }

    #[test]
    fn incomplete_traces_are_marked() {
        let p = parse_program("while cons(nil, nil) { }").unwrap();
        let o = run(&p, Tree::NIL, NatInf::Fin(10));
        let code = encode_trace(o.trace());
        assert!(code.hd().is_nil());
        let r = decode_record(&code).unwrap();
        assert!(!r.complete);
        assert_eq!(&decode_trace(&code, &p).unwrap(), o.trace());
    }

    #[test]
    fn tampered_codes_are_rejected() {
        let p = Program::identity();
        let o = run(&p, Tree::NIL, NatInf::Inf);
        let mut r = o.trace().record();
        r.entries[1].cost = 3;
        assert!(matches!(
            decode_trace(&encode_record(&r), &p),
            Err(TraceError::NotAStep { index: 1, .. })
        ));
        assert!(decode_record(&Tree::cons(Tree::NIL, Tree::NIL)).is_ok());
        assert!(decode_record(&Tree::list(vec![Tree::NIL, Tree::NIL])).is_err());
        assert!(decode_record(&Tree::list(vec![Tree::cons(Tree::NIL, Tree::NIL)])).is_err());
        assert!(matches!(
            decode_trace(&Tree::NIL, &p),
            Err(TraceError::Empty)
        ));
    }

    #[test]
    fn nil_is_the_unit_of_concatenation() {
        let o = run(&Program::identity(), Tree::nat(2), NatInf::Inf);
        let code = encode_trace(o.trace());
        assert_eq!(concat_codes(&code, &Tree::NIL).unwrap(), code);
        assert_eq!(concat_codes(&Tree::NIL, &code).unwrap(), code);
    }
}
