//! Binary trees: the single value universe of the machine.
//!
//! Every datum, program code, trace code and grade embedding is a [`Tree`].
//! Nodes are reference counted and cache their size, so cloning is O(1) and
//! the store-size accounting of the machine never walks a value twice.
//! Equality, hashing, printing and dropping are iterative because unary
//! numerals and trace lists can be deeper than the thread stack allows.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug)]
struct Node {
    left: Tree,
    right: Tree,
    size: u64,
}

/// `Nil` or `Cons(left, right)`.
#[derive(Clone, Default)]
pub struct Tree(Option<Arc<Node>>);

/// Borrowed view used for pattern matching.
#[derive(Debug, Clone, Copy)]
pub enum View<'a> {
    Nil,
    Cons(&'a Tree, &'a Tree),
}

impl Tree {
    pub const NIL: Tree = Tree(None);

    pub fn nil() -> Self {
        Tree(None)
    }

    /// Sizes saturate at `u64::MAX`; shared subtrees can describe trees far
    /// larger than memory.
    pub fn cons(left: Tree, right: Tree) -> Self {
        let size = left.size().saturating_add(right.size()).saturating_add(1);
        Tree(Some(Arc::new(Node { left, right, size })))
    }

    pub fn view(&self) -> View<'_> {
        match &self.0 {
            None => View::Nil,
            Some(n) => View::Cons(&n.left, &n.right),
        }
    }

    pub fn is_nil(&self) -> bool {
        self.0.is_none()
    }

    pub fn is_cons(&self) -> bool {
        self.0.is_some()
    }

    /// Number of `Cons` nodes. `Nil` has size 0.
    pub fn size(&self) -> u64 {
        self.0.as_ref().map_or(0, |n| n.size)
    }

    /// Head; `hd nil = nil`.
    pub fn hd(&self) -> Tree {
        self.0.as_ref().map_or(Tree::NIL, |n| n.left.clone())
    }

    /// Tail; `tl nil = nil`.
    pub fn tl(&self) -> Tree {
        self.0.as_ref().map_or(Tree::NIL, |n| n.right.clone())
    }

    pub fn left(&self) -> Option<&Tree> {
        self.0.as_ref().map(|n| &n.left)
    }

    pub fn right(&self) -> Option<&Tree> {
        self.0.as_ref().map(|n| &n.right)
    }

    /// Boolean convention: false = Nil, true = Cons(Nil, Nil).
    pub fn bool(b: bool) -> Self {
        if b {
            Tree::cons(Tree::NIL, Tree::NIL)
        } else {
            Tree::NIL
        }
    }

    /// Unary numeral: `n` nested conses with Nil heads.
    pub fn nat(n: u64) -> Self {
        let mut t = Tree::NIL;
        for _ in 0..n {
            t = Tree::cons(Tree::NIL, t);
        }
        t
    }

    /// Inverse of [`Tree::nat`]; `None` when some head is not Nil.
    pub fn as_nat(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        while let View::Cons(h, t) = cur.view() {
            if h.is_cons() {
                return None;
            }
            n += 1;
            cur = t;
        }
        Some(n)
    }

    /// Right-nested list terminated by Nil.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Tree>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Tree::NIL, |acc, item| Tree::cons(item, acc))
    }

    /// Spine elements of a Nil-terminated list (any tree is a list).
    pub fn list_items(&self) -> Vec<Tree> {
        let mut out = Vec::new();
        let mut cur = self;
        while let View::Cons(h, t) = cur.view() {
            out.push(h.clone());
            cur = t;
        }
        out
    }

    /// Elements of an exact list of length `n`, or `None`.
    pub fn exact_list(&self, n: usize) -> Option<Vec<Tree>> {
        let items = self.list_items();
        (items.len() == n).then_some(items)
    }

    pub fn ptr_eq(&self, other: &Tree) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// Parse the nested-paren form: `()` and `(l . r)`. A bare decimal `n`
    /// is accepted as sugar for the unary numeral.
    pub fn parse(src: &str) -> Result<Tree, TreeParseError> {
        let mut p = TreeParser {
            src: src.as_bytes(),
            pos: 0,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tree literal: {msg} at byte {pos}")]
pub struct TreeParseError {
    pub msg: String,
    pub pos: usize,
}

struct TreeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TreeParser<'_> {
    fn err(&self, msg: &str) -> TreeParseError {
        TreeParseError {
            msg: msg.to_string(),
            pos: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    // Iterative: an explicit stack of pending left subtrees.
    fn tree(&mut self) -> Result<Tree, TreeParseError> {
        let mut pending: Vec<Option<Tree>> = Vec::new();
        loop {
            let mut value = match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    if self.peek() == Some(b')') {
                        self.pos += 1;
                        Tree::NIL
                    } else {
                        pending.push(None);
                        continue;
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let n: u64 = digits.parse().map_err(|_| self.err("numeral too large"))?;
                    Tree::nat(n)
                }
                Some(_) => return Err(self.err("expected '(' or numeral")),
                None => return Err(self.err("unexpected end of input")),
            };
            loop {
                match pending.pop() {
                    None => return Ok(value),
                    Some(None) => {
                        self.expect(b'.')?;
                        pending.push(Some(value));
                        break;
                    }
                    Some(Some(left)) => {
                        self.expect(b')')?;
                        value = Tree::cons(left, value);
                    }
                }
            }
        }
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Tree) -> bool {
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if a.ptr_eq(b) {
                continue;
            }
            match (&a.0, &b.0) {
                (Some(x), Some(y)) => {
                    if x.size != y.size {
                        return false;
                    }
                    stack.push((&x.right, &y.right));
                    stack.push((&x.left, &y.left));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Preorder bit stream: 1 for Cons, 0 for Nil.
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match &t.0 {
                None => state.write_u8(0),
                Some(n) => {
                    state.write_u8(1);
                    stack.push(&n.right);
                    stack.push(&n.left);
                }
            }
        }
    }
}

impl Drop for Tree {
    fn drop(&mut self) {
        let Some(root) = self.0.take() else { return };
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if let Ok(mut n) = Arc::try_unwrap(node) {
                if let Some(l) = n.left.0.take() {
                    stack.push(l);
                }
                if let Some(r) = n.right.0.take() {
                    stack.push(r);
                }
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Task<'a> {
            Tree(&'a Tree),
            Text(&'static str),
        }
        let mut stack = vec![Task::Tree(self)];
        while let Some(task) = stack.pop() {
            match task {
                Task::Text(s) => f.write_str(s)?,
                Task::Tree(t) => match t.view() {
                    View::Nil => f.write_str("()")?,
                    View::Cons(l, r) => {
                        f.write_str("(")?;
                        stack.push(Task::Text(")"));
                        stack.push(Task::Tree(r));
                        stack.push(Task::Text(" . "));
                        stack.push(Task::Tree(l));
                    }
                },
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Tree::parse(&s).map_err(serde::de::Error::custom)
    }
}
