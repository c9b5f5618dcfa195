//! Grading monoids `(M, ⊕, 0, ∞)` with absorbing `∞`, the induced preorder
//! `m ≤ n ⟺ ∃ℓ. ℓ ⊕ m = n`, binary meets, and the two polynomial quotients
//! (`≤+` up to an additive constant, `≤O` up to a multiplicative one).
//!
//! Four instance families are provided:
//!
//! * [`MonoidKind::CompletedNat`]: naturals with `∞`, under `+`.
//! * [`MonoidKind::MultisetExpr`]: finite multisets of expression strings, under union.
//! * [`MonoidKind::PolyPlusClass`] / [`MonoidKind::PolyOClass`]: polynomials with
//!   non-negative integer coefficients, under coefficientwise `+`.
//!
//! The subgroup of invertible grades is trivial, so no group quotient is taken.

mod json;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoidKind {
    CompletedNat,
    MultisetExpr,
    PolyPlusClass,
    PolyOClass,
}

impl MonoidKind {
    pub fn tag(self) -> &'static str {
        match self {
            MonoidKind::CompletedNat => "nat",
            MonoidKind::MultisetExpr => "multiset",
            MonoidKind::PolyPlusClass => "poly+",
            MonoidKind::PolyOClass => "polyO",
        }
    }
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradeError {
    #[error("grades from different monoids: {left} and {right}")]
    MixedMonoid { left: MonoidKind, right: MonoidKind },
    #[error("expected a polynomial grade of kind {expected}, got {got}")]
    NotPolynomial {
        expected: MonoidKind,
        got: MonoidKind,
    },
    #[error("finite grade overflowed u64")]
    Overflow,
}

/// A natural number or `∞`. `Fin(_) < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatInf {
    Fin(u64),
    Inf,
}

impl NatInf {
    pub fn is_finite(self) -> bool {
        matches!(self, NatInf::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            NatInf::Fin(n) => Some(n),
            NatInf::Inf => None,
        }
    }

    pub fn checked_add(self, other: NatInf) -> Option<NatInf> {
        match (self, other) {
            (NatInf::Fin(a), NatInf::Fin(b)) => a.checked_add(b).map(NatInf::Fin),
            _ => Some(NatInf::Inf),
        }
    }

    /// Does a run that consumed `used` fit in this budget?
    pub fn admits(self, used: u64) -> bool {
        match self {
            NatInf::Fin(n) => used <= n,
            NatInf::Inf => true,
        }
    }
}

impl From<u64> for NatInf {
    fn from(n: u64) -> Self {
        NatInf::Fin(n)
    }
}

impl fmt::Display for NatInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatInf::Fin(n) => write!(f, "{n}"),
            NatInf::Inf => f.write_str("inf"),
        }
    }
}

/// A finite value or the absorbing `∞` marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

/// Finite multiset of expression strings; zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(BTreeMap<String, u64>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, e: &str) -> u64 {
        self.0.get(e).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, e: impl Into<String>, times: u64) {
        if times > 0 {
            *self.0.entry(e.into()).or_insert(0) += times;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Multiset {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for e in iter {
            m.insert(e, 1);
        }
        m
    }
}

/// Polynomial with non-negative integer coefficients, index = degree.
/// Trailing zero coefficients are always stripped, so `[]` is the zero
/// polynomial and structural equality is polynomial equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn zip_with(&self, other: &Poly, f: impl Fn(u64, u64) -> Option<u64>) -> Option<Poly> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f(self.coeff(i), other.coeff(i))?);
        }
        Some(Poly::new(out))
    }

    /// Evaluate at `x` in wide arithmetic.
    pub fn eval(&self, x: i128) -> i128 {
        self.0
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * x + c as i128)
    }
}

/// Element of one of the grading monoids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Grade {
    Nat(NatInf),
    Multiset(Extended<Multiset>),
    PolyPlus(Extended<Poly>),
    PolyO(Extended<Poly>),
}

impl Grade {
    pub fn nat(n: u64) -> Self {
        Grade::Nat(NatInf::Fin(n))
    }

    pub fn multiset<S: Into<String>>(items: impl IntoIterator<Item = S>) -> Self {
        Grade::Multiset(Extended::Finite(items.into_iter().collect()))
    }

    pub fn poly_plus(coeffs: Vec<u64>) -> Self {
        Grade::PolyPlus(Extended::Finite(Poly::new(coeffs)))
    }

    pub fn poly_o(coeffs: Vec<u64>) -> Self {
        Grade::PolyO(Extended::Finite(Poly::new(coeffs)))
    }

    pub fn zero(kind: MonoidKind) -> Self {
        match kind {
            MonoidKind::CompletedNat => Grade::nat(0),
            MonoidKind::MultisetExpr => Grade::Multiset(Extended::Finite(Multiset::new())),
            MonoidKind::PolyPlusClass => Grade::PolyPlus(Extended::Finite(Poly::zero())),
            MonoidKind::PolyOClass => Grade::PolyO(Extended::Finite(Poly::zero())),
        }
    }

    pub fn infinity(kind: MonoidKind) -> Self {
        match kind {
            MonoidKind::CompletedNat => Grade::Nat(NatInf::Inf),
            MonoidKind::MultisetExpr => Grade::Multiset(Extended::Infinite),
            MonoidKind::PolyPlusClass => Grade::PolyPlus(Extended::Infinite),
            MonoidKind::PolyOClass => Grade::PolyO(Extended::Infinite),
        }
    }

    pub fn kind(&self) -> MonoidKind {
        match self {
            Grade::Nat(_) => MonoidKind::CompletedNat,
            Grade::Multiset(_) => MonoidKind::MultisetExpr,
            Grade::PolyPlus(_) => MonoidKind::PolyPlusClass,
            Grade::PolyO(_) => MonoidKind::PolyOClass,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(
            self,
            Grade::Nat(NatInf::Inf)
                | Grade::Multiset(Extended::Infinite)
                | Grade::PolyPlus(Extended::Infinite)
                | Grade::PolyO(Extended::Infinite)
        )
    }

    pub fn as_nat(&self) -> Option<NatInf> {
        match self {
            Grade::Nat(n) => Some(*n),
            _ => None,
        }
    }

    fn poly(&self) -> Option<&Extended<Poly>> {
        match self {
            Grade::PolyPlus(p) | Grade::PolyO(p) => Some(p),
            _ => None,
        }
    }

    fn with_poly(&self, p: Extended<Poly>) -> Grade {
        match self {
            Grade::PolyO(_) => Grade::PolyO(p),
            _ => Grade::PolyPlus(p),
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn same_kind(m: &Grade, n: &Grade) -> Result<(), GradeError> {
    if m.kind() == n.kind() {
        Ok(())
    } else {
        Err(GradeError::MixedMonoid {
            left: m.kind(),
            right: n.kind(),
        })
    }
}

/// Monoid sum. `∞` absorbs.
pub fn oplus(m: &Grade, n: &Grade) -> Result<Grade, GradeError> {
    same_kind(m, n)?;
    Ok(match (m, n) {
        (Grade::Nat(a), Grade::Nat(b)) => {
            Grade::Nat(a.checked_add(*b).ok_or(GradeError::Overflow)?)
        }
        (Grade::Multiset(a), Grade::Multiset(b)) => Grade::Multiset(match (a, b) {
            (Extended::Finite(a), Extended::Finite(b)) => {
                let mut sum = a.clone();
                for (e, k) in b.iter() {
                    sum.insert(e, k);
                }
                Extended::Finite(sum)
            }
            _ => Extended::Infinite,
        }),
        _ => {
            let sum = match (m.poly().unwrap(), n.poly().unwrap()) {
                (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(
                    a.zip_with(b, |x, y| x.checked_add(y))
                        .ok_or(GradeError::Overflow)?,
                ),
                _ => Extended::Infinite,
            };
            m.with_poly(sum)
        }
    })
}

/// The monoid preorder `∃ℓ. ℓ ⊕ m = n`.
pub fn leq(m: &Grade, n: &Grade) -> Result<bool, GradeError> {
    Ok(leq_witness(m, n)?.is_some())
}

/// A witness `ℓ` with `ℓ ⊕ m = n`, when one exists.
pub fn leq_witness(m: &Grade, n: &Grade) -> Result<Option<Grade>, GradeError> {
    same_kind(m, n)?;
    let kind = m.kind();
    if n.is_infinite() {
        return Ok(Some(Grade::infinity(kind)));
    }
    if m.is_infinite() {
        return Ok(None);
    }
    Ok(match (m, n) {
        (Grade::Nat(NatInf::Fin(a)), Grade::Nat(NatInf::Fin(b))) => {
            b.checked_sub(*a).map(Grade::nat)
        }
        (Grade::Multiset(Extended::Finite(a)), Grade::Multiset(Extended::Finite(b))) => {
            let mut diff = Multiset::new();
            for (e, k) in a.iter() {
                if b.count(e) < k {
                    return Ok(None);
                }
            }
            for (e, k) in b.iter() {
                diff.insert(e, k - a.count(e));
            }
            Some(Grade::Multiset(Extended::Finite(diff)))
        }
        _ => match (m.poly(), n.poly()) {
            (Some(Extended::Finite(a)), Some(Extended::Finite(b))) => a
                .zip_with(b, |x, y| y.checked_sub(x))
                .map(|d| m.with_poly(Extended::Finite(d))),
            _ => unreachable!("kinds checked and infinities handled"),
        },
    })
}

/// Greatest lower bound. For `PolyOClass` this is the lower-degree canonical
/// class, since the quotient order is total by degree.
pub fn meet(m: &Grade, n: &Grade) -> Result<Grade, GradeError> {
    same_kind(m, n)?;
    if m.is_infinite() {
        return Ok(n.clone());
    }
    if n.is_infinite() {
        return Ok(m.clone());
    }
    Ok(match (m, n) {
        (Grade::Nat(a), Grade::Nat(b)) => Grade::Nat(*a.min(b)),
        (Grade::Multiset(Extended::Finite(a)), Grade::Multiset(Extended::Finite(b))) => {
            let mut out = Multiset::new();
            for (e, k) in a.iter() {
                out.insert(e, k.min(b.count(e)));
            }
            Grade::Multiset(Extended::Finite(out))
        }
        (Grade::PolyPlus(Extended::Finite(a)), Grade::PolyPlus(Extended::Finite(b))) => {
            Grade::PolyPlus(Extended::Finite(
                a.zip_with(b, |x, y| Some(x.min(y))).unwrap(),
            ))
        }
        (Grade::PolyO(_), Grade::PolyO(_)) => {
            let (cm, cn) = (canonicalize(m), canonicalize(n));
            if leq_o(&cm, &cn)? {
                cm
            } else {
                cn
            }
        }
        _ => unreachable!("kinds checked and infinities handled"),
    })
}

fn finite_polys<'a>(
    f: &'a Grade,
    g: &'a Grade,
    expected: MonoidKind,
) -> Result<(&'a Extended<Poly>, &'a Extended<Poly>), GradeError> {
    for x in [f, g] {
        if x.kind() != expected {
            return Err(GradeError::NotPolynomial {
                expected,
                got: x.kind(),
            });
        }
    }
    Ok((f.poly().unwrap(), g.poly().unwrap()))
}

/// `f ≤+ g ⟺ ∃c ∀x. f(x) ≤ c + g(x)`.
///
/// `f - g` is bounded above on ℕ exactly when, at the highest degree `i ≥ 1`
/// where the coefficients differ, `f_i < g_i` (or no such degree exists).
pub fn leq_plus(f: &Grade, g: &Grade) -> Result<bool, GradeError> {
    let (f, g) = finite_polys(f, g, MonoidKind::PolyPlusClass)?;
    Ok(match (f, g) {
        (_, Extended::Infinite) => true,
        (Extended::Infinite, _) => false,
        (Extended::Finite(f), Extended::Finite(g)) => {
            let n = f.coeffs().len().max(g.coeffs().len());
            (1..n)
                .rev()
                .map(|i| f.coeff(i).cmp(&g.coeff(i)))
                .find(|o| *o != Ordering::Equal)
                .is_none_or(|o| o == Ordering::Less)
        }
    })
}

/// `f ≤O g ⟺ ∃c,d ∀x≥d. f(x) ≤ c·g(x)`: degree comparison, where only the
/// zero polynomial is below zero.
pub fn leq_o(f: &Grade, g: &Grade) -> Result<bool, GradeError> {
    let (f, g) = finite_polys(f, g, MonoidKind::PolyOClass)?;
    Ok(match (f, g) {
        (_, Extended::Infinite) => true,
        (Extended::Infinite, _) => false,
        (Extended::Finite(f), Extended::Finite(g)) => match (f.degree(), g.degree()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(df), Some(dg)) => df <= dg,
        },
    })
}

/// Canonical representative of the class of `m` under mutual `≤`.
/// Only the polynomial quotients are non-trivial: `≤+` drops the constant
/// term, `≤O` keeps only the monic leading monomial.
pub fn canonicalize(m: &Grade) -> Grade {
    match m {
        Grade::PolyPlus(Extended::Finite(p)) => {
            let mut c = p.coeffs().to_vec();
            if let Some(c0) = c.first_mut() {
                *c0 = 0;
            }
            Grade::poly_plus(c)
        }
        Grade::PolyO(Extended::Finite(p)) => match p.degree() {
            None => m.clone(),
            Some(d) => {
                let mut c = vec![0; d + 1];
                c[d] = 1;
                Grade::poly_o(c)
            }
        },
        _ => m.clone(),
    }
}
