//! Retractions of the subtypes used by the machine into the type of all trees.
//!
//! Each subtype already consists of trees, so the section is the inclusion
//! and the retraction sends a tree outside the image to the subtype's
//! canonical default.

use serde::{Deserialize, Serialize};

use super::ast::Program;
use super::encode::{decode_program, encode_program};
use super::trace::{decode_record, encode_record};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetractTag {
    Bool,
    Nat,
    Pair,
    Trace,
    Program,
}

/// Result of retracting an arbitrary tree onto a subtype.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retracted {
    pub value: Tree,
    pub in_image: bool,
}

impl RetractTag {
    pub const ALL: [RetractTag; 5] = [
        RetractTag::Bool,
        RetractTag::Nat,
        RetractTag::Pair,
        RetractTag::Trace,
        RetractTag::Program,
    ];

    /// What out-of-image trees retract to.
    pub fn default_value(self) -> Tree {
        match self {
            RetractTag::Bool | RetractTag::Nat | RetractTag::Trace => Tree::NIL,
            RetractTag::Pair => Tree::cons(Tree::NIL, Tree::NIL),
            RetractTag::Program => encode_program(&Program::new(vec![])),
        }
    }

    pub fn contains(self, t: &Tree) -> bool {
        match self {
            RetractTag::Bool => t.is_nil() || *t == Tree::bool(true),
            RetractTag::Nat => t.as_nat().is_some(),
            RetractTag::Pair => t.is_cons(),
            RetractTag::Trace => decode_record(t).is_ok_and(|r| encode_record(&r) == *t),
            RetractTag::Program => decode_program(t).is_ok(),
        }
    }

    /// The section: subtype elements are already trees.
    pub fn encode(self, t: &Tree) -> Tree {
        t.clone()
    }

    pub fn decode(self, t: &Tree) -> Retracted {
        if self.contains(t) {
            Retracted {
                value: t.clone(),
                in_image: true,
            }
        } else {
            Retracted {
                value: self.default_value(),
                in_image: false,
            }
        }
    }
}

pub fn encode_bool(b: bool) -> Tree {
    Tree::bool(b)
}

/// Any cons counts as true, matching the machine's tests.
pub fn decode_bool(t: &Tree) -> bool {
    t.is_cons()
}

pub fn encode_nat(n: u64) -> Tree {
    Tree::nat(n)
}

pub fn decode_nat(t: &Tree) -> Option<u64> {
    t.as_nat()
}

pub fn encode_pair(a: Tree, b: Tree) -> Tree {
    Tree::cons(a, b)
}

pub fn decode_pair(t: &Tree) -> Option<(Tree, Tree)> {
    Some((t.left()?.clone(), t.right()?.clone()))
}
