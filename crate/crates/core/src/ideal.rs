//! Ideals of `ℕ^d` represented as vectors over `ℕ ∪ {ω}`.
//!
//! Every downward-closed, directed subset of `ℕ^d` is `↓v` for a unique
//! `v ∈ ℕ_ω^d`, and inclusion of ideals is the componentwise order on these
//! vectors. A finite union of ideals is kept as an antichain of its maximal
//! members ([`IdealDecomposition`]).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A natural number or the top element `ω`.
///
/// The derived order places every `Fin(n)` below `Omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaNat {
    Fin(u64),
    Omega,
}

impl OmegaNat {
    pub fn is_omega(self) -> bool {
        matches!(self, OmegaNat::Omega)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            OmegaNat::Fin(n) => Some(n),
            OmegaNat::Omega => None,
        }
    }

    /// `ω + k = ω`.
    pub fn saturating_add(self, k: u64) -> OmegaNat {
        match self {
            OmegaNat::Fin(n) => OmegaNat::Fin(n.saturating_add(k)),
            OmegaNat::Omega => OmegaNat::Omega,
        }
    }

    /// `ω − k = ω`; `None` when a finite value would drop below zero.
    pub fn checked_sub(self, k: u64) -> Option<OmegaNat> {
        match self {
            OmegaNat::Fin(n) => n.checked_sub(k).map(OmegaNat::Fin),
            OmegaNat::Omega => Some(OmegaNat::Omega),
        }
    }

    /// Sum of two extended naturals, absorbing at `ω`.
    pub fn plus(self, other: OmegaNat) -> OmegaNat {
        match other {
            OmegaNat::Fin(k) => self.saturating_add(k),
            OmegaNat::Omega => OmegaNat::Omega,
        }
    }
}

impl From<u64> for OmegaNat {
    fn from(n: u64) -> Self {
        OmegaNat::Fin(n)
    }
}

/// `a ≤ b` in `ℕ ∪ {ω}`.
pub fn omega_leq(a: OmegaNat, b: OmegaNat) -> bool {
    a <= b
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Fin(n) => write!(f, "{n}"),
            OmegaNat::Omega => f.write_str("w"),
        }
    }
}

impl FromStr for OmegaNat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "w" | "ω" | "omega" => Ok(OmegaNat::Omega),
            t => t
                .parse::<u64>()
                .map(OmegaNat::Fin)
                .map_err(|_| format!("expected a natural number or 'w', found '{t}'")),
        }
    }
}

impl Serialize for OmegaNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OmegaNat::Fin(n) => s.serialize_u64(*n),
            OmegaNat::Omega => s.serialize_str("w"),
        }
    }
}

impl<'de> Deserialize<'de> for OmegaNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct OmegaVisitor;

        impl Visitor<'_> for OmegaVisitor {
            type Value = OmegaNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a natural number or \"w\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<OmegaNat, E> {
                Ok(OmegaNat::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<OmegaNat, E> {
                u64::try_from(v)
                    .map(OmegaNat::Fin)
                    .map_err(|_| E::custom("negative entry"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<OmegaNat, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(OmegaVisitor)
    }
}

/// Splits `"(a,b,c)"` or `"a,b,c"` into trimmed entries, reporting the
/// 1-based column of each entry.
fn split_vector(text: &str) -> Result<Vec<(usize, &str)>> {
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    let (body, offset) = match (body.strip_prefix('('), body.ends_with(')')) {
        (Some(rest), true) => (&rest[..rest.len() - 1], trimmed_start + 1),
        (Some(_), false) => {
            return Err(Error::Syntax {
                line: 1,
                column: trimmed_start + body.len() + 1,
                message: "missing ')'".into(),
            })
        }
        (None, _) => (body, trimmed_start),
    };
    if body.trim().is_empty() {
        return Err(Error::Syntax {
            line: 1,
            column: offset + 1,
            message: "empty vector".into(),
        });
    }
    let mut out = Vec::new();
    let mut start = 0;
    for part in body.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push((offset + start + lead + 1, part.trim()));
        start += part.len() + 1;
    }
    Ok(out)
}

pub(crate) fn parse_omega_entries(text: &str) -> Result<Vec<OmegaNat>> {
    split_vector(text)?
        .into_iter()
        .map(|(column, entry)| {
            entry.parse().map_err(|message| Error::Syntax {
                line: 1,
                column,
                message,
            })
        })
        .collect()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A concrete state `x ∈ ℕ^d`.
///
/// The derived `Ord` is lexicographic and only serves ordered containers;
/// the coverability order is [`Marking::leq`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(pub Vec<u64>);

impl Marking {
    pub fn new(components: Vec<u64>) -> Self {
        Marking(components)
    }

    pub fn zero(dim: usize) -> Self {
        Marking(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u64] {
        &self.0
    }

    pub fn leq(&self, other: &Marking) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Marking {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = parse_omega_entries(s)?;
        let mut out = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            match e {
                OmegaNat::Fin(n) => out.push(n),
                OmegaNat::Omega => {
                    return Err(Error::Syntax {
                        line: 1,
                        column: i + 1,
                        message: "markings must be finite".into(),
                    })
                }
            }
        }
        Ok(Marking(out))
    }
}

/// The ω-representation of an ideal of `ℕ^d`: `↓v = {x ∈ ℕ^d : x ≤ v}`.
///
/// The derived `Ord` is lexicographic (storage order for deterministic
/// output); ideal inclusion is [`IdealVec::leq`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealVec(Vec<OmegaNat>);

impl IdealVec {
    pub fn new(components: Vec<OmegaNat>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty("ideal vectors need dimension >= 1"));
        }
        Ok(IdealVec(components))
    }

    /// `↓x` for a concrete state.
    pub fn from_marking(x: &Marking) -> Self {
        IdealVec(x.0.iter().copied().map(OmegaNat::Fin).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[OmegaNat] {
        &self.0
    }

    pub fn get(&self, i: usize) -> OmegaNat {
        self.0[i]
    }

    /// Componentwise `≤`, i.e. inclusion of the represented ideals.
    pub fn leq(&self, other: &IdealVec) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &IdealVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Partial-order comparison; `None` when incomparable.
    pub fn compare(&self, other: &IdealVec) -> Result<Option<Ordering>> {
        let le = self.leq(other)?;
        let ge = other.leq_unchecked(self);
        Ok(match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        })
    }

    /// Membership of a concrete state in `↓self`.
    pub fn contains(&self, x: &Marking) -> Result<bool> {
        check_dim(self.dim(), x.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&x.0)
            .all(|(v, &c)| OmegaNat::Fin(c) <= *v))
    }

    /// Number of ω components; the ideal lies in `Lim^n` exactly for
    /// `n ≤ level`.
    pub fn level(&self) -> usize {
        self.0.iter().filter(|c| c.is_omega()).count()
    }

    /// Limit of the chain `base ⊂ grown ⊂ …` for additive growth: coordinates
    /// that grew become `ω`, the others keep their value.
    pub fn lub_accelerate(&self, grown: &IdealVec) -> Result<IdealVec> {
        check_dim(self.dim(), grown.dim())?;
        if !self.leq_unchecked(grown) || self == grown {
            return Err(Error::Precondition(format!(
                "acceleration needs {self} strictly below {grown}"
            )));
        }
        Ok(IdealVec(
            self.0
                .iter()
                .zip(&grown.0)
                .map(|(b, g)| if g > b { OmegaNat::Omega } else { *b })
                .collect(),
        ))
    }
}

/// `u ≤ v` componentwise; errors on dimension mismatch.
pub fn vec_leq(u: &IdealVec, v: &IdealVec) -> Result<bool> {
    u.leq(v)
}

impl fmt::Display for IdealVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for IdealVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdealVec::new(parse_omega_entries(s)?)
    }
}

impl Serialize for IdealVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IdealVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// A finite antichain of ideals of equal dimension, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdealDecomposition {
    ideals: Vec<IdealVec>,
}

impl IdealDecomposition {
    pub fn ideals(&self) -> &[IdealVec] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ideals[0].dim()
    }

    /// Membership of a concrete state in the union of the ideals.
    pub fn contains(&self, x: &Marking) -> Result<bool> {
        for ideal in &self.ideals {
            if ideal.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `v` is included in one of the ideals.
    pub fn covers(&self, v: &IdealVec) -> Result<bool> {
        for ideal in &self.ideals {
            if v.leq(ideal)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for IdealDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ideal) in self.ideals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{ideal}")?;
        }
        Ok(())
    }
}

/// Keeps the ⊆-maximal members of `vs`, dropping duplicates.
pub fn decompose<I>(vs: I) -> Result<IdealDecomposition>
where
    I: IntoIterator<Item = IdealVec>,
{
    let mut all: Vec<IdealVec> = vs.into_iter().collect();
    let Some(first) = all.first() else {
        return Err(Error::Empty("decompose needs at least one ideal"));
    };
    let dim = first.dim();
    for v in &all {
        check_dim(dim, v.dim())?;
    }
    all.sort();
    all.dedup();
    let ideals = all
        .iter()
        .filter(|u| !all.iter().any(|w| w != *u && u.leq_unchecked(w)))
        .cloned()
        .collect();
    Ok(IdealDecomposition { ideals })
}
