//! String diagrams over the data services (copy, delete, compare), symmetry
//! and opaque generator boxes.
//!
//! Diagrams are terms with cached boundaries. The δ/ρ/⊤/swap fragment has a
//! decision procedure through spider normal forms ([`spider_normalize`]);
//! everything else is compared through finite-relation semantics.

mod finrel;
mod json;
mod spider;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use finrel::{finrel_eval, is_function, tuples, Env, FinRel, Interp, Tuple};
pub use json::{diagram_from_json, diagram_to_json};
pub use spider::{spider_normalize, spider_rebuild, Port, SpiderNF};

/// Wire types, left to right. Empty is the monoidal unit.
pub type TypeVector = Vec<String>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("boundary mismatch: {left:?} does not match {right:?}")]
    BoundaryMismatch { left: TypeVector, right: TypeVector },
    #[error("generator '{0}' is outside the spider fragment")]
    UnsupportedFragment(String),
    #[error("generator '{0}' has no interpretation")]
    UnboundGenerator(String),
    #[error("interpretation of '{name}' has arity {got:?}, expected {expected:?}")]
    ArityMismatch {
        name: String,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("relation for '{name}' is over carrier {got}, expected {expected}")]
    CarrierMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("ill-formed spider form: {0}")]
    BadSpider(String),
    #[error("invalid diagram json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Id(TypeVector),
    Gen {
        name: String,
        dom: TypeVector,
        cod: TypeVector,
    },
    Copy(String),
    Delete(String),
    Compare(String),
    Swap(String, String),
    Seq(Diagram, Diagram),
    Par(Diagram, Diagram),
}

/// A well-typed diagram. Construct through the functions below, which check
/// boundaries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram(Arc<Inner>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    term: Term,
    dom: TypeVector,
    cod: TypeVector,
}

impl Diagram {
    fn make(term: Term, dom: TypeVector, cod: TypeVector) -> Diagram {
        Diagram(Arc::new(Inner { term, dom, cod }))
    }

    pub fn term(&self) -> &Term {
        &self.0.term
    }

    pub fn dom(&self) -> &[String] {
        &self.0.dom
    }

    pub fn cod(&self) -> &[String] {
        &self.0.cod
    }

    pub fn id(types: TypeVector) -> Diagram {
        Diagram::make(Term::Id(types.clone()), types.clone(), types)
    }

    pub fn id1(base: &str) -> Diagram {
        Diagram::id(vec![base.to_string()])
    }

    pub fn gen(name: &str, dom: TypeVector, cod: TypeVector) -> Diagram {
        Diagram::make(
            Term::Gen {
                name: name.to_string(),
                dom: dom.clone(),
                cod: cod.clone(),
            },
            dom,
            cod,
        )
    }

    /// δ : A → A ⊗ A
    pub fn copy(base: &str) -> Diagram {
        let a = base.to_string();
        Diagram::make(Term::Copy(a.clone()), vec![a.clone()], vec![a.clone(), a])
    }

    /// ⊤ : A → I
    pub fn delete(base: &str) -> Diagram {
        let a = base.to_string();
        Diagram::make(Term::Delete(a.clone()), vec![a], vec![])
    }

    /// ρ : A ⊗ A → A
    pub fn compare(base: &str) -> Diagram {
        let a = base.to_string();
        Diagram::make(
            Term::Compare(a.clone()),
            vec![a.clone(), a.clone()],
            vec![a],
        )
    }

    /// σ : A ⊗ B → B ⊗ A
    pub fn swap(a: &str, b: &str) -> Diagram {
        let (a, b) = (a.to_string(), b.to_string());
        Diagram::make(
            Term::Swap(a.clone(), b.clone()),
            vec![a.clone(), b.clone()],
            vec![b, a],
        )
    }

    /// Number of non-identity leaves.
    pub fn generator_count(&self) -> usize {
        match self.term() {
            Term::Id(_) => 0,
            Term::Seq(a, b) | Term::Par(a, b) => a.generator_count() + b.generator_count(),
            _ => 1,
        }
    }

    /// Whether any opaque `Gen` box occurs.
    pub fn has_gen(&self) -> bool {
        match self.term() {
            Term::Gen { .. } => true,
            Term::Seq(a, b) | Term::Par(a, b) => a.has_gen() || b.has_gen(),
            _ => false,
        }
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&diagram_to_json(self).to_string())
    }
}

/// `d1 ; d2`.
pub fn seq(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    if d1.cod() != d2.dom() {
        return Err(DiagramError::BoundaryMismatch {
            left: d1.cod().to_vec(),
            right: d2.dom().to_vec(),
        });
    }
    Ok(Diagram::make(
        Term::Seq(d1.clone(), d2.clone()),
        d1.dom().to_vec(),
        d2.cod().to_vec(),
    ))
}

/// `d1 ⊗ d2`.
pub fn par(d1: &Diagram, d2: &Diagram) -> Diagram {
    let dom = [d1.dom(), d2.dom()].concat();
    let cod = [d1.cod(), d2.cod()].concat();
    Diagram::make(Term::Par(d1.clone(), d2.clone()), dom, cod)
}

/// Left fold of [`seq`] over a non-empty chain.
pub fn seq_all(ds: &[Diagram]) -> Result<Diagram, DiagramError> {
    let (first, rest) = ds
        .split_first()
        .ok_or_else(|| DiagramError::Json("empty sequence".into()))?;
    rest.iter().try_fold(first.clone(), |acc, d| seq(&acc, d))
}

/// Left fold of [`par`]; the empty product is the identity on the unit.
pub fn par_all(ds: &[Diagram]) -> Diagram {
    match ds.split_first() {
        None => Diagram::id(vec![]),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, d| par(&acc, d)),
    }
}

/// Result of [`diagrams_equal`]. `oracle` is set when the answer comes from
/// finite-relation sampling and is therefore only sound for inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Equality {
    pub equal: bool,
    pub oracle: bool,
}

/// Decide equality in the data-service theory. Generator-free diagrams are
/// compared by spider form. Otherwise both sides are evaluated at carriers
/// 1 to 3 under every assignment of the candidate relations in `env` whose
/// carrier matches.
pub fn diagrams_equal(d1: &Diagram, d2: &Diagram, env: &Env) -> Result<Equality, DiagramError> {
    if d1.dom() != d2.dom() {
        return Err(DiagramError::BoundaryMismatch {
            left: d1.dom().to_vec(),
            right: d2.dom().to_vec(),
        });
    }
    if d1.cod() != d2.cod() {
        return Err(DiagramError::BoundaryMismatch {
            left: d1.cod().to_vec(),
            right: d2.cod().to_vec(),
        });
    }
    if !d1.has_gen() && !d2.has_gen() {
        let equal = spider_normalize(d1)? == spider_normalize(d2)?;
        return Ok(Equality {
            equal,
            oracle: false,
        });
    }
    let mut checked = false;
    for carrier in 1..=3 {
        for assignment in env.assignments(carrier) {
            checked = true;
            if finrel_eval(d1, carrier, &assignment)? != finrel_eval(d2, carrier, &assignment)? {
                return Ok(Equality {
                    equal: false,
                    oracle: true,
                });
            }
        }
    }
    if !checked {
        // Report the first generator that could not be interpreted.
        finrel_eval(d1, 1, &Interp::new())?;
        finrel_eval(d2, 1, &Interp::new())?;
    }
    Ok(Equality {
        equal: true,
        oracle: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_are_checked() {
        let a = Diagram::copy("A");
        assert_eq!(a.dom(), ["A"]);
        assert_eq!(a.cod(), ["A", "A"]);
        assert!(seq(&a, &Diagram::id1("A")).is_err());
        let d = seq(&a, &par(&Diagram::delete("A"), &Diagram::id1("A"))).unwrap();
        assert_eq!(d.cod(), ["A"]);
        assert_eq!(
            par(&Diagram::copy("A"), &Diagram::delete("A")).dom(),
            ["A", "A"]
        );
        assert!(seq(&Diagram::swap("A", "B"), &Diagram::swap("A", "B")).is_err());
    }

    #[test]
    fn counit_law() {
        let d = seq(
            &Diagram::copy("A"),
            &par(&Diagram::delete("A"), &Diagram::id1("A")),
        )
        .unwrap();
        let e = diagrams_equal(&d, &Diagram::id1("A"), &Env::default()).unwrap();
        assert_eq!(
            e,
            Equality {
                equal: true,
                oracle: false
            }
        );
    }

    #[test]
    fn generators_need_interpretations() {
        let f = Diagram::gen("f", vec!["A".into()], vec!["A".into()]);
        assert_eq!(
            diagrams_equal(&f, &f, &Env::default()),
            Err(DiagramError::UnboundGenerator("f".into()))
        );
    }
}
