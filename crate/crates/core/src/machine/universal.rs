//! The self-interpreter, written in the object language.
//!
//! `U` takes `Cons(⌜F⌝, a)`. It first validates the whole code with an
//! explicit work list, accepting exactly the trees [`decode_program`]
//! accepts, and outputs `Nil` otherwise. It then runs `F` with a control
//! stack of statement lists, a positional store list and an expression
//! work stack. The counting variant also keeps a unary counter bumped by
//! the same rule as the machine's cost model and outputs `Cons(value, count)`.
//!
//! The source below uses `$NAME` placeholders that are numbered in order of
//! appearance; `$IO` is `X0`.
//!
//! [`decode_program`]: super::encode::decode_program

use std::collections::HashMap;
use std::sync::OnceLock;

use super::ast::Program;
use super::encode::tag;
use super::parse::parse_program;
use crate::tree::Tree;

const M_CONS: u64 = 14;
const M_HD: u64 = 15;
const M_TL: u64 = 16;
const M_EQ: u64 = 17;

const K_BLOCK: u64 = 1;
const K_STMT: u64 = 2;
const K_EXPR: u64 = 3;
const K_VAR: u64 = 4;

pub fn universal_program() -> &'static Program {
    static U: OnceLock<Program> = OnceLock::new();
    U.get_or_init(|| build(false))
}

pub fn counting_universal_program() -> &'static Program {
    static U: OnceLock<Program> = OnceLock::new();
    U.get_or_init(|| build(true))
}

/// Source text of the interpreter with variables resolved.
pub fn universal_source(counting: bool) -> String {
    resolve(&template(counting))
}

fn build(counting: bool) -> Program {
    parse_program(&universal_source(counting)).expect("interpreter source parses")
}

fn resolve(src: &str) -> String {
    let mut names: HashMap<String, u32> = HashMap::from([("IO".to_string(), 0)]);
    let mut out = String::with_capacity(src.len());
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '$' {
            out.push(c);
            continue;
        }
        let mut name = String::new();
        while let Some(&d) = chars.peek() {
            if d.is_ascii_alphanumeric() || d == '_' {
                name.push(d);
                chars.next();
            } else {
                break;
            }
        }
        let next = names.len() as u32;
        let k = *names.entry(name).or_insert(next);
        out.push_str(&format!("X{k}"));
    }
    out
}

fn lookup(dst: &str, key: &str) -> String {
    format!(
        "$LK := {key}; $LW := $ST;
         while $LK {{ $LW := tl $LW; $LK := tl $LK }};
         {dst} := hd $LW"
    )
}

fn store(key: &str, val: &str) -> String {
    format!(
        "$SV := {val}; $LK := {key}; $LW := $ST; $LA := nil;
         while $LK {{ $LA := cons(hd $LW, $LA); $LW := tl $LW; $LK := tl $LK }};
         $LW := cons($SV, tl $LW);
         while $LA {{ $LW := cons(hd $LA, $LW); $LA := tl $LA }};
         $ST := $LW"
    )
}

const FAIL: &str = "$OK := nil; $VW := nil";

/// Run `ok` when `$A` has exactly `n` elements, otherwise fail.
fn arity(n: usize, ok: &str) -> String {
    let tl_n = |k: usize| {
        let mut e = "$A".to_string();
        for _ in 0..k {
            e = format!("tl {e}");
        }
        e
    };
    if n == 0 {
        format!("if eq?($A, nil) {{ {ok} }} else {{ {FAIL} }}")
    } else {
        format!(
            "if {} {{ if eq?({}, nil) {{ {ok} }} else {{ {FAIL} }} }} else {{ {FAIL} }}",
            tl_n(n - 1),
            tl_n(n)
        )
    }
}

fn push_check(kind: &str, item: &str) -> String {
    format!("$VW := cons(cons({kind}, {item}), $VW)")
}

/// Nested `if eq?(on, c) { .. } else { .. }` chain ending in `fallback`.
fn dispatch(on: &str, cases: &[(&str, String)], fallback: &str) -> String {
    cases
        .iter()
        .rev()
        .fold(fallback.to_string(), |acc, (c, body)| {
            format!("if eq?({on}, {c}) {{ {body} }} else {{ {acc} }}")
        })
}

fn template(counting: bool) -> String {
    let tick = if counting {
        "$CNT := cons(nil, $CNT)"
    } else {
        ""
    };
    let mut consts = String::new();
    for (name, v) in [
        ("$C1", tag::PROGRAM),
        ("$C2", tag::ASSIGN),
        ("$C3", tag::WHILE),
        ("$C4", tag::IF),
        ("$C5", tag::SPLIT),
        ("$C6", tag::JOIN),
        ("$C7", tag::QUOTE),
        ("$C8", tag::VAR),
        ("$C9", tag::NIL),
        ("$C10", tag::CONS),
        ("$C11", tag::HD),
        ("$C12", tag::TL),
        ("$C13", tag::EQ),
        ("$C14", M_CONS),
        ("$C15", M_HD),
        ("$C16", M_TL),
        ("$C17", M_EQ),
        ("$KB", K_BLOCK),
        ("$KS", K_STMT),
        ("$KE", K_EXPR),
        ("$KV", K_VAR),
    ] {
        consts.push_str(&format!("{name} := quote {};\n", Tree::nat(v)));
    }
    for (name, v) in [
        ("$MCONS", M_CONS),
        ("$MHD", M_HD),
        ("$MTL", M_TL),
        ("$MEQ", M_EQ),
    ] {
        consts.push_str(&format!(
            "{name} := quote {};\n",
            Tree::cons(Tree::nat(v), Tree::NIL)
        ));
    }

    let var = push_check("$KV", "hd $A");
    let var2 = format!("{}; {}", push_check("$KV", "hd tl $A"), var);
    let var3 = format!("{}; {}", push_check("$KV", "hd tl tl $A"), var2);
    let stmt_check = dispatch(
        "$T",
        &[
            (
                "$C2",
                arity(2, &format!("{var}; {}", push_check("$KE", "hd tl $A"))),
            ),
            (
                "$C3",
                arity(
                    2,
                    &format!(
                        "{}; {}",
                        push_check("$KE", "hd $A"),
                        push_check("$KB", "hd tl $A")
                    ),
                ),
            ),
            (
                "$C4",
                arity(
                    3,
                    &format!(
                        "{}; {}; {}",
                        push_check("$KE", "hd $A"),
                        push_check("$KB", "hd tl $A"),
                        push_check("$KB", "hd tl tl $A")
                    ),
                ),
            ),
            ("$C5", arity(3, &var3)),
            ("$C6", arity(3, &var3)),
            ("$C7", arity(2, &var)),
        ],
        FAIL,
    );
    let expr_check = dispatch(
        "$T",
        &[
            ("$C8", arity(1, &var)),
            ("$C9", arity(0, "")),
            (
                "$C10",
                arity(
                    2,
                    &format!(
                        "{}; {}",
                        push_check("$KE", "hd $A"),
                        push_check("$KE", "hd tl $A")
                    ),
                ),
            ),
            ("$C11", arity(1, &push_check("$KE", "hd $A"))),
            ("$C12", arity(1, &push_check("$KE", "hd $A"))),
            (
                "$C13",
                arity(
                    2,
                    &format!(
                        "{}; {}",
                        push_check("$KE", "hd $A"),
                        push_check("$KE", "hd tl $A")
                    ),
                ),
            ),
        ],
        FAIL,
    );
    let validate = format!(
        "$OK := cons(nil, nil);
         $A := tl $CODE;
         if eq?(hd $CODE, $C1) {{ {prog} }} else {{ {FAIL} }};
         while $VW {{
           $I := hd $VW; $VW := tl $VW; $KD := hd $I; $X := tl $I;
           if eq?($KD, $KB) {{
             while $X {{ {push_stmt}; $X := tl $X }}
           }} else {{ if eq?($KD, $KV) {{
             while $X {{ if hd $X {{ {FAIL}; $X := nil }} else {{ $X := tl $X }} }}
           }} else {{
             $T := hd $X; $A := tl $X;
             if eq?($KD, $KS) {{ {stmt_check} }} else {{ {expr_check} }}
           }} }}
         }}",
        prog = arity(1, &push_check("$KB", "hd $A")),
        push_stmt = push_check("$KS", "hd $X"),
    );

    // Evaluate the expression code in $E; the value ends up in $V.
    let eval = format!(
        "$ES := cons($E, nil); $VS := nil;
         while $ES {{
           $I := hd $ES; $ES := tl $ES; $ET := hd $I; $EA := tl $I;
           {dispatch_expr}
         }};
         $V := hd $VS",
        dispatch_expr = dispatch(
            "$ET",
            &[
                (
                    "$C8",
                    format!("{tick}; {}; $VS := cons($V, $VS)", lookup("$V", "hd $EA"))
                ),
                ("$C9", format!("{tick}; $VS := cons(nil, $VS)")),
                (
                    "$C10",
                    format!("{tick}; $ES := cons(hd $EA, cons(hd tl $EA, cons($MCONS, $ES)))")
                ),
                (
                    "$C11",
                    format!("{tick}; $ES := cons(hd $EA, cons($MHD, $ES))")
                ),
                (
                    "$C12",
                    format!("{tick}; $ES := cons(hd $EA, cons($MTL, $ES))")
                ),
                (
                    "$C13",
                    format!("{tick}; $ES := cons(hd $EA, cons(hd tl $EA, cons($MEQ, $ES)))")
                ),
                (
                    "$C14",
                    "$VS := cons(cons(hd tl $VS, hd $VS), tl tl $VS)".to_string()
                ),
                ("$C15", "$VS := cons(hd hd $VS, tl $VS)".to_string()),
                ("$C16", "$VS := cons(tl hd $VS, tl $VS)".to_string()),
            ],
            "$VS := cons(eq?(hd tl $VS, hd $VS), tl tl $VS)",
        ),
    );

    let exec_stmt = dispatch(
        "$ST_TAG",
        &[
            (
                "$C2",
                format!("$CS := cons(tl $B, tl $CS); {tick}; $E := hd tl $SA; {eval}; {}", store("hd $SA", "$V")),
            ),
            (
                "$C3",
                format!(
                    "{tick}; $E := hd $SA; {eval};
                     if $V {{ $CS := cons(hd tl $SA, $CS) }} else {{ $CS := cons(tl $B, tl $CS) }}"
                ),
            ),
            (
                "$C4",
                format!(
                    "$CS := cons(tl $B, tl $CS); {tick}; $E := hd $SA; {eval};
                     if $V {{ $CS := cons(hd tl $SA, $CS) }} else {{ $CS := cons(hd tl tl $SA, $CS) }}"
                ),
            ),
            (
                "$C5",
                format!(
                    "$CS := cons(tl $B, tl $CS); {}; {}; {}; {}",
                    lookup("$P", "hd $SA"),
                    store("hd $SA", "nil"),
                    store("hd tl $SA", "hd $P"),
                    store("hd tl tl $SA", "tl $P")
                ),
            ),
            (
                "$C6",
                format!(
                    "$CS := cons(tl $B, tl $CS); {}; {}; {}; {}; {}",
                    lookup("$L", "hd $SA"),
                    lookup("$R", "hd tl $SA"),
                    store("hd $SA", "nil"),
                    store("hd tl $SA", "nil"),
                    store("hd tl tl $SA", "cons($L, $R)")
                ),
            ),
        ],
        &format!("$CS := cons(tl $B, tl $CS); {}", store("hd $SA", "hd tl $SA")),
    );

    let run = format!(
        "$CS := cons(hd tl $CODE, nil);
         while $CS {{
           $B := hd $CS;
           if $B {{
             $S := hd $B; $ST_TAG := hd $S; $SA := tl $S;
             {exec_stmt}
           }} else {{ $CS := tl $CS }}
         }}"
    );
    let output = if counting {
        "cons(hd $ST, $CNT)"
    } else {
        "hd $ST"
    };

    format!(
        "{consts}
         $CODE := hd $IO; $ST := cons(tl $IO, nil); $IO := nil;
         {validate};
         if $OK {{ {run}; $IO := {output} }} else {{ $IO := nil }}"
    )
}
