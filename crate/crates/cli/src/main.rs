mod corpus;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use moncomp_core::complexity::{
    blum_report, measure, mu_search_effective, mu_search_naive, normal_form_eval, BlumReport,
    Measure,
};
use moncomp_core::diagram::{diagram_from_json, finrel_eval, spider_normalize, FinRel, Interp};
use moncomp_core::grading::{Grade, NatInf};
use moncomp_core::machine::{encode_program, run, Outcome, Trace};
use moncomp_core::suite::{run_suite, SuiteConfig, SuiteName};
use moncomp_core::sweep;
use moncomp_core::Tree;
use serde::Serialize;
use serde_json::Value;

use crate::corpus::{load, parse_tree, read_program, CorpusEntry};

const OK: u8 = 0;
const USAGE: u8 = 1;
const UNDEFINED: u8 = 2;
const VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "moncomp",
    version,
    about = "Fuel-graded WHILE machine, normal forms, complexity measures and data-service diagrams"
)]
struct Cli {
    /// Print JSON on one line instead of pretty-printed.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Time,
    Space,
}

impl From<Kind> for Measure {
    fn from(k: Kind) -> Measure {
        match k {
            Kind::Time => Measure::Time,
            Kind::Space => Measure::Space,
        }
    }
}

fn nat_inf(s: &str) -> Result<NatInf, String> {
    match s {
        "inf" | "∞" => Ok(NatInf::Inf),
        _ => s
            .parse()
            .map(NatInf::Fin)
            .map_err(|e| format!("expected a number or 'inf': {e}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on an input tree.
    Run {
        program: PathBuf,
        input: String,
        #[arg(long, value_parser = nat_inf, default_value = "inf")]
        fuel: NatInf,
    },
    /// Print the trace code of a run.
    Trace {
        program: PathBuf,
        input: String,
        #[arg(long, value_parser = nat_inf, default_value = "inf")]
        fuel: NatInf,
    },
    /// Measure a run through its trace code.
    Measure {
        program: PathBuf,
        input: String,
        #[arg(long, value_enum, default_value = "time")]
        kind: Kind,
        #[arg(long, value_parser = nat_inf, default_value = "inf")]
        cap: NatInf,
    },
    /// μ-search for the trace witnessing a run, naively and by running.
    Mu {
        program: PathBuf,
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        naive_cap: u64,
        #[arg(long, value_parser = nat_inf, default_value = "1000000")]
        cap: NatInf,
    },
    /// Compare normal-form evaluation with direct runs over a corpus.
    NfCheck {
        #[arg(long, env = "MONCOMP_CORPUS")]
        corpus: PathBuf,
        /// Fuel for entries that do not set their own.
        #[arg(long, value_parser = nat_inf, default_value = "1000000")]
        fuel: NatInf,
    },
    /// Check both Blum axioms over a corpus.
    Blum {
        #[arg(long, env = "MONCOMP_CORPUS")]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "time")]
        kind: Kind,
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
    },
    /// String diagrams of the data-service fragment.
    Diagram {
        #[command(subcommand)]
        command: DiagramCommand,
    },
    /// Run a seeded law suite.
    Suite {
        name: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: u64,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Print the spider normal form.
    Normalize { file: PathBuf },
    /// Print the relation a diagram denotes over `0..carrier`.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        carrier: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn emit(cli: &Cli, v: &impl Serialize) -> Result<()> {
    let s = if cli.json {
        serde_json::to_string(v)?
    } else {
        serde_json::to_string_pretty(v)?
    };
    println!("{s}");
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Run {
            program,
            input,
            fuel,
        } => {
            let out = run(&read_program(program)?, parse_tree(input)?, *fuel);
            emit(cli, &OutcomeJson::from(&out))?;
            Ok(if out.is_halted() { OK } else { UNDEFINED })
        }
        Command::Trace {
            program,
            input,
            fuel,
        } => {
            let out = run(&read_program(program)?, parse_tree(input)?, *fuel);
            let trace = out.trace();
            let code = moncomp_core::machine::encode_trace(trace);
            emit(
                cli,
                &serde_json::json!({ "complete": trace.complete, "code": code }),
            )?;
            Ok(if trace.complete { OK } else { UNDEFINED })
        }
        Command::Measure {
            program,
            input,
            kind,
            cap,
        } => {
            let code = encode_program(&read_program(program)?);
            let m = measure((*kind).into(), &code, &parse_tree(input)?, *cap)?;
            emit(cli, &Grade::Nat(m.unwrap_or(NatInf::Inf)))?;
            Ok(if m.is_some() { OK } else { UNDEFINED })
        }
        Command::Mu {
            program,
            input,
            naive_cap,
            cap,
        } => {
            let code = encode_program(&read_program(program)?);
            let a = parse_tree(input)?;
            let effective = mu_search_effective(&code, &a, *cap)?;
            let naive = mu_search_naive(&code, &a, *naive_cap);
            let agree = naive.as_ref().map(|n| Some(n) == effective.as_ref());
            emit(
                cli,
                &serde_json::json!({ "effective": effective, "naive": naive, "agree": agree }),
            )?;
            Ok(match (effective, agree) {
                (_, Some(false)) => VIOLATION,
                (None, _) => UNDEFINED,
                _ => OK,
            })
        }
        Command::NfCheck { corpus, fuel } => nf_check(cli, &load(corpus)?, *fuel),
        Command::Blum { corpus, kind, cap } => blum(cli, &load(corpus)?, (*kind).into(), *cap),
        Command::Diagram { command } => diagram(cli, command),
        Command::Suite { name, seed, cases } => {
            let name: SuiteName = name.parse()?;
            let report = run_suite(name, &SuiteConfig::new(*seed, *cases));
            eprintln!(
                "{:<12} {:<28} {:>7} {:>10}",
                "suite", "law", "cases", "violations"
            );
            for l in &report.laws {
                eprintln!(
                    "{:<12} {:<28} {:>7} {:>10}",
                    l.suite.to_string(),
                    l.law,
                    l.cases,
                    l.violations
                );
            }
            emit(cli, &report)?;
            Ok(if report.ok() { OK } else { VIOLATION })
        }
    }
}

#[derive(Serialize)]
struct EntryJson {
    cost: u64,
    store: Vec<Tree>,
}

#[derive(Serialize)]
struct OutcomeJson {
    halted: bool,
    value: Option<Tree>,
    time: u64,
    space: u64,
    trace: Vec<EntryJson>,
}

impl From<&Outcome> for OutcomeJson {
    fn from(o: &Outcome) -> Self {
        let trace: &Trace = o.trace();
        let entries = trace
            .configs
            .iter()
            .zip(&trace.costs)
            .map(|(c, &cost)| EntryJson {
                cost,
                store: c.store.clone(),
            })
            .collect();
        OutcomeJson {
            halted: o.is_halted(),
            value: o.value().cloned(),
            time: trace.time(),
            space: trace.space(),
            trace: entries,
        }
    }
}

#[derive(Serialize)]
struct NfRow {
    id: String,
    halted: bool,
    normal_form_agrees: bool,
    expected_matches: Option<bool>,
}

fn nf_check(cli: &Cli, entries: &[CorpusEntry], default_fuel: NatInf) -> Result<u8> {
    let rows = sweep::map(entries, |e| -> Result<NfRow> {
        let fuel = e.fuel.unwrap_or(default_fuel);
        let direct = run(&e.program, e.input.clone(), fuel);
        let nf = normal_form_eval(&encode_program(&e.program), &e.input, fuel)?;
        Ok(NfRow {
            id: e.id.clone(),
            halted: direct.is_halted(),
            normal_form_agrees: nf.as_ref() == direct.value(),
            expected_matches: e.expected.as_ref().map(|x| direct.value() == Some(x)),
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    eprintln!(
        "{:<24} {:<8} {:<10} {:<8}",
        "id", "halted", "nf", "expected"
    );
    for r in &rows {
        let exp = r
            .expected_matches
            .map_or("-", |b| if b { "ok" } else { "MISMATCH" });
        let nf = if r.normal_form_agrees {
            "ok"
        } else {
            "MISMATCH"
        };
        eprintln!("{:<24} {:<8} {:<10} {:<8}", r.id, r.halted, nf, exp);
    }
    emit(cli, &rows)?;
    let bad = rows
        .iter()
        .any(|r| !r.normal_form_agrees || r.expected_matches == Some(false));
    Ok(if bad { VIOLATION } else { OK })
}

/// Bounds around the measured value, or a spread when the run diverges.
fn probe_bounds(c: Option<u64>) -> Vec<u64> {
    match c {
        Some(c) => {
            let mut v = vec![0, c / 2, c.saturating_sub(1), c, c + 1, 2 * c + 1];
            v.dedup();
            v
        }
        None => vec![0, 10, 100, 1000],
    }
}

fn blum(cli: &Cli, entries: &[CorpusEntry], m: Measure, cap: u64) -> Result<u8> {
    let reports = sweep::map(entries, |e| -> Result<BlumReport> {
        let code = encode_program(&e.program);
        let c = measure(m, &code, &e.input, NatInf::Fin(cap))?.and_then(NatInf::finite);
        Ok(blum_report(m, &code, &e.input, cap, &probe_bounds(c))?)
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    eprintln!("{:<24} {:<6}", "id", "ok");
    for (e, r) in entries.iter().zip(&reports) {
        eprintln!("{:<24} {:<6}", e.id, r.ok());
    }
    emit(cli, &reports)?;
    Ok(if reports.iter().all(BlumReport::ok) {
        OK
    } else {
        VIOLATION
    })
}

fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A diagram file is either a bare term, or `{"diagram": term, "interp":
/// {name: [[inputs, outputs], ...]}}` binding generator boxes.
fn diagram(cli: &Cli, command: &DiagramCommand) -> Result<u8> {
    match command {
        DiagramCommand::Normalize { file } => {
            let (d, _) = split_diagram_file(&read_json(file)?)?;
            emit(cli, &spider_normalize(&d)?)?;
        }
        DiagramCommand::Eval { file, carrier } => {
            anyhow::ensure!(*carrier > 0, "carrier must be positive");
            let (d, interp) = split_diagram_file(&read_json(file)?)?;
            let mut env = Interp::new();
            for (name, pairs) in interp {
                let Some(g) = find_gen(&d, &name) else {
                    continue;
                };
                let rel = FinRel::new(*carrier, g.0, g.1, pairs).with_context(|| {
                    format!("relation for '{name}' leaves the carrier or has wrong arity")
                })?;
                env.insert(name, rel);
            }
            emit(cli, &finrel_eval(&d, *carrier, &env)?)?;
        }
    }
    Ok(OK)
}

type Pairs = Vec<(Vec<u32>, Vec<u32>)>;

fn split_diagram_file(v: &Value) -> Result<(moncomp_core::diagram::Diagram, Vec<(String, Pairs)>)> {
    match v.get("diagram") {
        None => Ok((diagram_from_json(v)?, Vec::new())),
        Some(term) => {
            let interp: std::collections::BTreeMap<String, Pairs> = match v.get("interp") {
                Some(i) => serde_json::from_value(i.clone()).context("parsing interp")?,
                None => Default::default(),
            };
            Ok((diagram_from_json(term)?, interp.into_iter().collect()))
        }
    }
}

/// Arity of the first generator box called `name`.
fn find_gen(d: &moncomp_core::diagram::Diagram, name: &str) -> Option<(usize, usize)> {
    use moncomp_core::diagram::Term;
    match d.term() {
        Term::Gen { name: n, dom, cod } if n == name => Some((dom.len(), cod.len())),
        Term::Seq(a, b) | Term::Par(a, b) => find_gen(a, name).or_else(|| find_gen(b, name)),
        _ => None,
    }
}
