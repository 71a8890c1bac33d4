//! The effective-completion contract shared by all instantiations, and the
//! acceleration operator `w^∞` over it.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::ideal::IdealVec;
use crate::net::EffectSummary;

/// A finite sequence of alphabet symbols.
pub type Word<L> = Vec<L>;

/// An ideal representation with decidable inclusion and finitely many
/// levels.
pub trait Ideal: Clone + Eq + Hash + Debug + Display {
    /// Inclusion of ideals. Representations of different shape (dimension,
    /// control state) are never included in each other.
    fn is_subset(&self, other: &Self) -> bool;

    /// Position in the `Lim^n` hierarchy.
    fn level(&self) -> usize;

    /// The limit ideal of a chain `self ⊂ grown ⊂ …` whose growth repeats;
    /// called only with `self ⊂ grown`.
    fn widen(&self, grown: &Self) -> Result<Self>;

    fn is_strict_subset(&self, other: &Self) -> bool {
        self != other && self.is_subset(other)
    }
}

/// A system whose completion is deterministic and effective: a finite
/// alphabet and at most one ideal successor per `(ideal, label)`.
pub trait EffectiveCompletion {
    type Ideal: Ideal;
    type Label: Clone + Eq + Ord + Hash + Debug + Display;

    /// The alphabet, in a fixed order used for child expansion.
    fn alphabet(&self) -> Vec<Self::Label>;

    /// `a(I)`, or `None` when the label is disabled on `I`.
    fn successor(&self, ideal: &Self::Ideal, label: &Self::Label) -> Result<Option<Self::Ideal>>;
}

/// Completions whose labels carry an additive effect, as needed to decide
/// positivity of words.
pub trait PositiveSystem: EffectiveCompletion {
    fn effect(&self, label: &Self::Label) -> Result<EffectSummary>;

    /// Whether a word read from an ideal shaped like `from` can end in a
    /// state comparable with its start when it ends at an ideal shaped like
    /// `to`. Counter systems have no finite control, so any end point works.
    fn same_control(&self, _from: &Self::Ideal, _to: &Self::Ideal) -> bool {
        true
    }
}

impl Ideal for IdealVec {
    fn is_subset(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.leq_unchecked(other)
    }

    fn level(&self) -> usize {
        IdealVec::level(self)
    }

    fn widen(&self, grown: &Self) -> Result<Self> {
        self.lub_accelerate(grown)
    }
}

/// Applies `word` letter by letter; `None` as soon as a step is disabled.
pub fn post_word<S: EffectiveCompletion>(
    sys: &S,
    ideal: &S::Ideal,
    word: &[S::Label],
) -> Result<Option<S::Ideal>> {
    let mut current = ideal.clone();
    for label in word {
        match sys.successor(&current, label)? {
            Some(next) => current = next,
            None => return Ok(None),
        }
    }
    Ok(Some(current))
}

/// `w^∞(I)`: the union of `I ⊂ w(I) ⊂ w²(I) ⊂ …` when `I ⊂ w(I)`, else `I`.
///
/// Computed by saturation: widen towards `w(I)` and repeat until `w` no
/// longer grows the ideal. Each round raises the level, so the loop is
/// bounded by the number of levels.
pub fn accelerate<S: EffectiveCompletion>(
    sys: &S,
    ideal: &S::Ideal,
    word: &[S::Label],
) -> Result<S::Ideal> {
    if word.is_empty() {
        return Err(Error::Precondition(
            "acceleration word must be nonempty".into(),
        ));
    }
    let step = |v: &S::Ideal| -> Result<S::Ideal> {
        post_word(sys, v, word)?
            .ok_or_else(|| Error::Precondition(format!("acceleration word is disabled on {v}")))
    };
    let first = step(ideal)?;
    if !ideal.is_strict_subset(&first) {
        return Ok(ideal.clone());
    }
    let mut current = ideal.clone();
    let mut next = first;
    while !next.is_subset(&current) {
        if !current.is_subset(&next) {
            return Err(Error::Precondition(format!(
                "completion is not monotone along the acceleration word ({current} vs {next})"
            )));
        }
        let widened = current.widen(&next)?;
        if widened.level() <= current.level() {
            return Err(Error::Precondition(format!(
                "acceleration of {current} did not raise the level"
            )));
        }
        current = widened;
        next = step(&current)?;
    }
    Ok(current)
}
