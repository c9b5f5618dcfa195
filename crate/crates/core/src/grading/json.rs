//! JSON form of grades:
//! `{"monoid":"nat","value":5}`, `{"monoid":"nat","value":"inf"}`,
//! `{"monoid":"multiset","value":["e1","e1"]}`, `{"monoid":"poly+","coeffs":[0,2]}`,
//! `{"monoid":"polyO","coeffs":[0,0,1]}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Extended, Grade, Multiset, NatInf, Poly};

#[derive(Debug, Clone, Copy)]
struct Inf;

impl Serialize for Inf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }
}

impl<'de> Deserialize<'de> for Inf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Inf)
        } else {
            Err(serde::de::Error::custom(format!(
                "expected \"inf\", got {s:?}"
            )))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OrInf<T> {
    Finite(T),
    Inf(Inf),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "monoid", deny_unknown_fields)]
enum Repr {
    #[serde(rename = "nat")]
    Nat { value: OrInf<u64> },
    #[serde(rename = "multiset")]
    Multiset { value: OrInf<Vec<String>> },
    #[serde(rename = "poly+")]
    PolyPlus { coeffs: OrInf<Vec<u64>> },
    #[serde(rename = "polyO")]
    PolyO { coeffs: OrInf<Vec<u64>> },
}

fn poly_repr(p: &Extended<Poly>) -> OrInf<Vec<u64>> {
    match p {
        Extended::Finite(p) => OrInf::Finite(p.coeffs().to_vec()),
        Extended::Infinite => OrInf::Inf(Inf),
    }
}

fn poly_from(c: OrInf<Vec<u64>>) -> Extended<Poly> {
    match c {
        OrInf::Finite(c) => Extended::Finite(Poly::new(c)),
        OrInf::Inf(_) => Extended::Infinite,
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Grade::Nat(NatInf::Fin(n)) => Repr::Nat {
                value: OrInf::Finite(*n),
            },
            Grade::Nat(NatInf::Inf) => Repr::Nat {
                value: OrInf::Inf(Inf),
            },
            Grade::Multiset(Extended::Finite(m)) => Repr::Multiset {
                value: OrInf::Finite(
                    m.iter()
                        .flat_map(|(e, k)| std::iter::repeat_n(e.to_string(), k as usize))
                        .collect(),
                ),
            },
            Grade::Multiset(Extended::Infinite) => Repr::Multiset {
                value: OrInf::Inf(Inf),
            },
            Grade::PolyPlus(p) => Repr::PolyPlus {
                coeffs: poly_repr(p),
            },
            Grade::PolyO(p) => Repr::PolyO {
                coeffs: poly_repr(p),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Grade {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Nat {
                value: OrInf::Finite(n),
            } => Grade::nat(n),
            Repr::Nat {
                value: OrInf::Inf(_),
            } => Grade::Nat(NatInf::Inf),
            Repr::Multiset {
                value: OrInf::Finite(v),
            } => Grade::Multiset(Extended::Finite(v.into_iter().collect::<Multiset>())),
            Repr::Multiset {
                value: OrInf::Inf(_),
            } => Grade::Multiset(Extended::Infinite),
            Repr::PolyPlus { coeffs } => Grade::PolyPlus(poly_from(coeffs)),
            Repr::PolyO { coeffs } => Grade::PolyO(poly_from(coeffs)),
        })
    }
}
