//! The standard model: a deterministic WHILE machine over binary trees.

pub mod ast;
pub mod compose;
pub mod encode;
pub mod evaluators;
pub mod exec;
pub mod parse;
pub mod retract;
pub mod trace;
pub mod universal;

pub use ast::{Block, Expr, Program, Stmt, Var};
pub use compose::{
    data_service_morphism, gamma, par_compose, program_of, restrict, seq_compose, DataService,
    Morphism,
};
pub use encode::{decode_program, encode_program, DecodeError};
pub use evaluators::{
    decode_suspension, extract_output, smn, specialize, suspend, trace_eval, trace_eval_with,
    ExtractError,
};
pub use exec::{
    evaluate, run, step, Config, CostModel, Evaluation, Frame, Machine, Observation, Outcome, Step,
    Trace,
};
pub use parse::{parse_program, print_program, ParseError};
pub use retract::{RetractTag, Retracted};
pub use trace::{
    concat_codes, decode_record, decode_trace, decode_trace_with, encode_record, encode_trace,
    TraceEntry, TraceError, TraceRecord,
};
pub use universal::{counting_universal_program, universal_program};
