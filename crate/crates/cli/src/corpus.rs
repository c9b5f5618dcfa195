//! Corpus directories: `manifest.json` next to `programs/*.while` and
//! `inputs/*.tree`. Manifest paths are relative to the corpus directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use moncomp_core::grading::{Grade, NatInf};
use moncomp_core::machine::{parse_program, Program};
use moncomp_core::Tree;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    id: String,
    program: PathBuf,
    /// Tree literal.
    #[serde(default)]
    input: Option<String>,
    /// Or a file holding one.
    #[serde(default)]
    input_path: Option<PathBuf>,
    #[serde(default)]
    expected: Option<String>,
    #[serde(default)]
    fuel: Option<Grade>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub program: Program,
    pub input: Tree,
    pub expected: Option<Tree>,
    pub fuel: Option<NatInf>,
}

pub fn read_program(path: &Path) -> Result<Program> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_program(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_tree(text: &str) -> Result<Tree> {
    Tree::parse(text.trim()).with_context(|| format!("parsing tree literal {text:?}"))
}

pub fn load(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let manifest = dir.join("manifest.json");
    let text =
        fs::read_to_string(&manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", manifest.display()))?;
    entries.into_iter().map(|e| resolve(dir, e)).collect()
}

fn resolve(dir: &Path, e: ManifestEntry) -> Result<CorpusEntry> {
    let program_path = dir.join(&e.program);
    let program = read_program(&program_path)?;
    let input = match (e.input, e.input_path) {
        (Some(lit), None) => parse_tree(&lit)?,
        (None, Some(p)) => {
            let p = dir.join(p);
            parse_tree(
                &fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
            )?
        }
        _ => bail!("entry '{}' needs exactly one of input and input_path", e.id),
    };
    let expected = e.expected.as_deref().map(parse_tree).transpose()?;
    let fuel = match e.fuel {
        None => None,
        Some(g) => match g.as_nat() {
            Some(n) => Some(n),
            None => bail!("entry '{}': fuel must be a nat grade, got {g}", e.id),
        },
    };
    Ok(CorpusEntry {
        id: e.id,
        program,
        input,
        expected,
        fuel,
    })
}
