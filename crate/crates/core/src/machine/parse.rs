//! Concrete syntax.
//!
//! ```text
//! stmt  := Xk := expr | Xk := quote <tree>
//!        | while expr { block } | if expr { block } [else { block }]
//!        | split Xk into (Xi, Xj) | join (Xi, Xj) into Xk
//! expr  := nil | Xk | cons(expr, expr) | hd expr | tl expr | eq?(expr, expr) | (expr)
//! block := stmt ; stmt ; ...
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use super::ast::{Block, Expr, Program, Stmt, Var};
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(u32),
    Word(String),
    Num(u64),
    Assign,
    Semi,
    Comma,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(k) => write!(f, "X{k}"),
            Tok::Word(w) => write!(f, "'{w}'"),
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Assign => f.write_str("':='"),
            Tok::Semi => f.write_str("';'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut out = Vec::new();
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            ':' if chars.get(i + 1) == Some(&'=') => {
                advance(2, &mut i);
                out.push(Lexed {
                    tok: Tok::Assign,
                    line: l0,
                    col: c0,
                });
                continue;
            }
            ';' | ',' | '.' | '(' | ')' | '{' | '}' => {
                let tok = match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    _ => Tok::RBrace,
                };
                advance(1, &mut i);
                out.push(Lexed {
                    tok,
                    line: l0,
                    col: c0,
                });
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let n = text
                    .parse()
                    .map_err(|_| err(l0, c0, "numeral too large".into()))?;
                out.push(Lexed {
                    tok: Tok::Num(n),
                    line: l0,
                    col: c0,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                if chars.get(i) == Some(&'?') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match word.strip_prefix('X') {
                    Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                        Tok::Var(d.parse().map_err(|_| {
                            err(l0, c0, format!("variable index too large: {word}"))
                        })?)
                    }
                    _ => Tok::Word(word),
                };
                out.push(Lexed {
                    tok,
                    line: l0,
                    col: c0,
                });
                continue;
            }
            other => return Err(err(l0, c0, format!("unexpected character {other:?}"))),
        }
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let l = &self.toks[self.pos];
        ParseError {
            line: l.line,
            col: l.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn keyword(&mut self, w: &str) -> Result<(), ParseError> {
        if self.is_word(w) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected '{w}', found {}", self.peek())))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Tok::Var(k) => {
                let k = *k;
                self.next();
                Ok(Var(k))
            }
            other => Err(self.error(format!("expected a variable, found {other}"))),
        }
    }

    fn block_until(&mut self, end: &Tok) -> Result<Block, ParseError> {
        let mut stmts = Vec::new();
        loop {
            while *self.peek() == Tok::Semi {
                self.next();
            }
            if self.peek() == end {
                return Ok(stmts.into());
            }
            stmts.push(self.stmt()?);
            match self.peek() {
                Tok::Semi => {}
                t if t == end => {}
                // A closing brace already separates statements.
                _ if matches!(stmts.last(), Some(Stmt::While(..) | Stmt::If(..))) => {}
                other => return Err(self.error(format!("expected ';', found {other}"))),
            }
        }
    }

    fn braced(&mut self) -> Result<Block, ParseError> {
        self.expect(Tok::LBrace)?;
        let b = self.block_until(&Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        Ok(b)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().clone() {
            Tok::Var(_) => {
                let v = self.var()?;
                self.expect(Tok::Assign)?;
                if self.is_word("quote") {
                    self.next();
                    Ok(Stmt::Quote(v, self.tree()?))
                } else {
                    Ok(Stmt::Assign(v, self.expr()?))
                }
            }
            Tok::Word(w) => match w.as_str() {
                "while" => {
                    self.next();
                    let e = self.expr()?;
                    Ok(Stmt::While(e, self.braced()?))
                }
                "if" => {
                    self.next();
                    let e = self.expr()?;
                    let then = self.braced()?;
                    let other = if self.is_word("else") {
                        self.next();
                        self.braced()?
                    } else {
                        Block::from(Vec::new())
                    };
                    Ok(Stmt::If(e, then, other))
                }
                "split" => {
                    self.next();
                    let src = self.var()?;
                    self.keyword("into")?;
                    self.expect(Tok::LParen)?;
                    let left = self.var()?;
                    self.expect(Tok::Comma)?;
                    let right = self.var()?;
                    self.expect(Tok::RParen)?;
                    Ok(Stmt::Split { src, left, right })
                }
                "join" => {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let left = self.var()?;
                    self.expect(Tok::Comma)?;
                    let right = self.var()?;
                    self.expect(Tok::RParen)?;
                    self.keyword("into")?;
                    let dst = self.var()?;
                    Ok(Stmt::Join { left, right, dst })
                }
                _ => Err(self.error(format!("expected a statement, found '{w}'"))),
            },
            other => Err(self.error(format!("expected a statement, found {other}"))),
        }
    }

    fn pair(&mut self) -> Result<(Expr, Expr), ParseError> {
        self.expect(Tok::LParen)?;
        let a = self.expr()?;
        self.expect(Tok::Comma)?;
        let b = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok((a, b))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Var(k) => {
                self.next();
                Ok(Expr::var(k))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Word(w) => {
                self.next();
                match w.as_str() {
                    "nil" => Ok(Expr::Nil),
                    "hd" => Ok(Expr::hd(self.expr()?)),
                    "tl" => Ok(Expr::tl(self.expr()?)),
                    "cons" => {
                        let (a, b) = self.pair()?;
                        Ok(Expr::cons(a, b))
                    }
                    "eq?" => {
                        let (a, b) = self.pair()?;
                        Ok(Expr::eq(a, b))
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.error(format!("expected an expression, found '{w}'")))
                    }
                }
            }
            other => Err(self.error(format!("expected an expression, found {other}"))),
        }
    }

    fn tree(&mut self) -> Result<Tree, ParseError> {
        match self.next() {
            Tok::Num(n) => Ok(Tree::nat(n)),
            Tok::LParen => {
                if *self.peek() == Tok::RParen {
                    self.next();
                    return Ok(Tree::NIL);
                }
                let l = self.tree()?;
                self.expect(Tok::Dot)?;
                let r = self.tree()?;
                self.expect(Tok::RParen)?;
                Ok(Tree::cons(l, r))
            }
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected a tree literal, found {other}")))
            }
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let body = p.block_until(&Tok::Eof)?;
    Ok(Program { body })
}

impl std::str::FromStr for Program {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Nil => f.write_str("nil"),
            Expr::Cons(a, b) => write!(f, "cons({a}, {b})"),
            Expr::Hd(e) => write!(f, "hd {e}"),
            Expr::Tl(e) => write!(f, "tl {e}"),
            Expr::Eq(a, b) => write!(f, "eq?({a}, {b})"),
        }
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, b: &[Stmt], indent: usize) -> fmt::Result {
    for (i, s) in b.iter().enumerate() {
        let pad = "  ".repeat(indent);
        f.write_str(&pad)?;
        match s {
            Stmt::Assign(v, e) => write!(f, "{v} := {e}")?,
            Stmt::Quote(v, t) => write!(f, "{v} := quote {t}")?,
            Stmt::Split { src, left, right } => write!(f, "split {src} into ({left}, {right})")?,
            Stmt::Join { left, right, dst } => write!(f, "join ({left}, {right}) into {dst}")?,
            Stmt::While(e, body) => {
                writeln!(f, "while {e} {{")?;
                write_block(f, body, indent + 1)?;
                write!(f, "{pad}}}")?;
            }
            Stmt::If(e, a, b) => {
                writeln!(f, "if {e} {{")?;
                write_block(f, a, indent + 1)?;
                writeln!(f, "{pad}}} else {{")?;
                write_block(f, b, indent + 1)?;
                write!(f, "{pad}}}")?;
            }
        }
        if i + 1 < b.len() {
            f.write_str(";")?;
        }
        f.write_str("\n")?;
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_block(f, &self.body, 0)
    }
}

/// Canonical source text; `parse_program(&print_program(p)) == Ok(p)`.
pub fn print_program(p: &Program) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_assignment() {
        let p = parse_program("X0 := X0").unwrap();
        assert_eq!(p, Program::identity());
    }

    #[test]
    fn loop_program() {
        let p = parse_program("while X0 { X0 := tl X0 }").unwrap();
        assert_eq!(
            p,
            Program::new(vec![Stmt::While(
                Expr::var(0),
                vec![Stmt::Assign(Var(0), Expr::tl(Expr::var(0)))].into()
            )])
        );
    }

    #[test]
    fn malformed_cons_reports_position() {
        let e = parse_program("X0 := cons(nil, )").unwrap_err();
        assert_eq!((e.line, e.col), (1, 17));
    }

    #[test]
    fn full_grammar_round_trips() {
        let src = "# swap a pair, then test\n\
                   split X0 into (X1, X2);\n\
                   join (X2, X1) into X0;\n\
                   X3 := quote (() . 2);\n\
                   if eq?(hd X0, X3) { X0 := cons(nil, (X0)) } else { };\n\
                   while X4 { X4 := tl X4 }\n\
                   X5 := nil";
        let p = parse_program(src).unwrap();
        let printed = print_program(&p);
        assert_eq!(parse_program(&printed).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_program("X0 := nil;\n  bogus X1").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(parse_program("X0 := X0 X1").is_err());
        assert!(parse_program("X0 := quote (()").is_err());
        assert!(parse_program("while X0 { X0 := nil").is_err());
    }
}
