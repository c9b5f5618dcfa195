use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{Diagram, DiagramError, Term};

pub type Tuple = Vec<u32>;

/// A relation between `carrier^dom_arity` and `carrier^cod_arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinRel {
    pub carrier_size: usize,
    pub dom_arity: usize,
    pub cod_arity: usize,
    pub pairs: BTreeSet<(Tuple, Tuple)>,
}

/// All tuples of length `k` over `0..carrier`, in lexicographic order.
pub fn tuples(carrier: usize, k: usize) -> Vec<Tuple> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..carrier as u32).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

impl FinRel {
    /// Checked constructor; `None` if a tuple has the wrong length or an
    /// entry outside the carrier.
    pub fn new(
        carrier_size: usize,
        dom_arity: usize,
        cod_arity: usize,
        pairs: impl IntoIterator<Item = (Tuple, Tuple)>,
    ) -> Option<FinRel> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        let ok = |t: &Tuple, k| t.len() == k && t.iter().all(|&x| (x as usize) < carrier_size);
        pairs
            .iter()
            .all(|(a, b)| ok(a, dom_arity) && ok(b, cod_arity))
            .then_some(FinRel {
                carrier_size,
                dom_arity,
                cod_arity,
                pairs,
            })
    }

    pub fn identity(carrier: usize, k: usize) -> FinRel {
        let pairs = tuples(carrier, k)
            .into_iter()
            .map(|t| (t.clone(), t))
            .collect();
        FinRel {
            carrier_size: carrier,
            dom_arity: k,
            cod_arity: k,
            pairs,
        }
    }

    pub fn compose(&self, other: &FinRel) -> FinRel {
        let mut by_mid: HashMap<&Tuple, Vec<&Tuple>> = HashMap::new();
        for (m, c) in &other.pairs {
            by_mid.entry(m).or_default().push(c);
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|(a, m)| {
                by_mid
                    .get(m)
                    .into_iter()
                    .flatten()
                    .map(move |c| (a.clone(), (*c).clone()))
            })
            .collect();
        FinRel {
            carrier_size: self.carrier_size,
            dom_arity: self.dom_arity,
            cod_arity: other.cod_arity,
            pairs,
        }
    }

    pub fn product(&self, other: &FinRel) -> FinRel {
        let mut pairs = BTreeSet::new();
        for (a, b) in &self.pairs {
            for (c, d) in &other.pairs {
                pairs.insert(([a.as_slice(), c].concat(), [b.as_slice(), d].concat()));
            }
        }
        FinRel {
            carrier_size: self.carrier_size,
            dom_arity: self.dom_arity + other.dom_arity,
            cod_arity: self.cod_arity + other.cod_arity,
            pairs,
        }
    }
}

/// Single-valued and total on `carrier^dom_arity`.
pub fn is_function(r: &FinRel) -> bool {
    let mut image: BTreeMap<&Tuple, usize> = BTreeMap::new();
    for (a, _) in &r.pairs {
        *image.entry(a).or_default() += 1;
    }
    let total = (r.carrier_size as u128).pow(r.dom_arity as u32);
    image.values().all(|&n| n == 1) && image.len() as u128 == total
}

/// Interpretation of generator boxes.
pub type Interp = BTreeMap<String, FinRel>;

/// Candidate interpretations per generator, possibly over several carriers.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub candidates: BTreeMap<String, Vec<FinRel>>,
}

impl Env {
    pub fn bind(mut self, name: &str, r: FinRel) -> Env {
        self.candidates.entry(name.to_string()).or_default().push(r);
        self
    }

    /// Every interpretation choosing one candidate of carrier `carrier` per name.
    pub fn assignments(&self, carrier: usize) -> Vec<Interp> {
        let mut out = vec![Interp::new()];
        for (name, rs) in &self.candidates {
            let rs: Vec<&FinRel> = rs.iter().filter(|r| r.carrier_size == carrier).collect();
            out = out
                .into_iter()
                .flat_map(|m| {
                    rs.iter().map(move |r| {
                        let mut m = m.clone();
                        m.insert(name.clone(), (*r).clone());
                        m
                    })
                })
                .collect();
        }
        out
    }
}

pub fn finrel_eval(d: &Diagram, carrier: usize, env: &Interp) -> Result<FinRel, DiagramError> {
    let k = carrier as u32;
    let build = |dom, cod, pairs: Vec<(Tuple, Tuple)>| FinRel {
        carrier_size: carrier,
        dom_arity: dom,
        cod_arity: cod,
        pairs: pairs.into_iter().collect(),
    };
    Ok(match d.term() {
        Term::Id(ts) => FinRel::identity(carrier, ts.len()),
        Term::Copy(_) => build(1, 2, (0..k).map(|x| (vec![x], vec![x, x])).collect()),
        Term::Delete(_) => build(1, 0, (0..k).map(|x| (vec![x], vec![])).collect()),
        Term::Compare(_) => build(2, 1, (0..k).map(|x| (vec![x, x], vec![x])).collect()),
        Term::Swap(..) => build(
            2,
            2,
            tuples(carrier, 2)
                .into_iter()
                .map(|t| (t.clone(), vec![t[1], t[0]]))
                .collect(),
        ),
        Term::Seq(a, b) => finrel_eval(a, carrier, env)?.compose(&finrel_eval(b, carrier, env)?),
        Term::Par(a, b) => finrel_eval(a, carrier, env)?.product(&finrel_eval(b, carrier, env)?),
        Term::Gen { name, dom, cod } => {
            let r = env
                .get(name)
                .ok_or_else(|| DiagramError::UnboundGenerator(name.clone()))?;
            if (r.dom_arity, r.cod_arity) != (dom.len(), cod.len()) {
                return Err(DiagramError::ArityMismatch {
                    name: name.clone(),
                    expected: (dom.len(), cod.len()),
                    got: (r.dom_arity, r.cod_arity),
                });
            }
            if r.carrier_size != carrier {
                return Err(DiagramError::CarrierMismatch {
                    name: name.clone(),
                    expected: carrier,
                    got: r.carrier_size,
                });
            }
            r.clone()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::seq;

    #[test]
    fn compare_at_two() {
        let r = finrel_eval(&Diagram::compare("A"), 2, &Interp::new()).unwrap();
        let want = FinRel::new(2, 2, 1, [(vec![0, 0], vec![0]), (vec![1, 1], vec![1])]).unwrap();
        assert_eq!(r, want);
    }

    #[test]
    fn copy_then_compare_is_identity() {
        let d = seq(&Diagram::copy("A"), &Diagram::compare("A")).unwrap();
        assert_eq!(
            finrel_eval(&d, 3, &Interp::new()).unwrap(),
            FinRel::identity(3, 1)
        );
    }

    #[test]
    fn function_check() {
        assert!(is_function(&FinRel::identity(3, 1)));
        assert!(!is_function(
            &FinRel::new(2, 1, 1, [(vec![0], vec![0]), (vec![0], vec![1])]).unwrap()
        ));
        assert!(!is_function(
            &FinRel::new(2, 1, 1, [(vec![0], vec![0])]).unwrap()
        ));
        assert!(FinRel::new(2, 1, 1, [(vec![2], vec![0])]).is_none());
    }

    #[test]
    fn assignments_filter_by_carrier() {
        let env = Env::default()
            .bind("f", FinRel::identity(2, 1))
            .bind("f", FinRel::identity(3, 1))
            .bind("g", FinRel::identity(2, 1))
            .bind("g", FinRel::new(2, 1, 1, []).unwrap());
        assert_eq!(env.assignments(2).len(), 2);
        assert_eq!(env.assignments(3).len(), 0);
        assert_eq!(Env::default().assignments(1).len(), 1);
    }
}
