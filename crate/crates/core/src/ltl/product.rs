//! The synchronized product of a Büchi automaton with a net.
//!
//! Product states are pairs of a control state and a marking, ordered by
//! equality on the control and the product order on markings. Labels
//! `(a, r)` fix the successor control state, which keeps the product
//! completion deterministic. Ideals are pairs `(q, I)`.
//!
//! Adding a bottom element below every marking does not change transitions,
//! so the extended system is never built; the target `(q_f, ⊥)` only shows
//! up as the membership rule of [`ProductTarget`].

use std::fmt;

use serde::Serialize;

use super::buchi::BuchiAutomaton;
use crate::error::{Error, Result};
use crate::ideal::IdealVec;
use crate::kernel::{EffectiveCompletion, Ideal, PositiveSystem};
use crate::net::{EffectSummary, NetModel};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductIdeal {
    pub control: usize,
    pub ideal: IdealVec,
}

impl fmt::Display for ProductIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{} {}", self.control, self.ideal)
    }
}

impl Ideal for ProductIdeal {
    fn is_subset(&self, other: &Self) -> bool {
        self.control == other.control && self.ideal.is_subset(&other.ideal)
    }

    fn level(&self) -> usize {
        self.ideal.level()
    }

    fn widen(&self, grown: &Self) -> Result<Self> {
        if self.control != grown.control {
            return Err(Error::Precondition("widening across control states".into()));
        }
        Ok(ProductIdeal {
            control: self.control,
            ideal: self.ideal.widen(&grown.ideal)?,
        })
    }
}

/// A net letter paired with the Büchi state it leads to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductLabel {
    pub letter: String,
    pub target: usize,
}

impl fmt::Display for ProductLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},q{})", self.letter, self.target)
    }
}

#[derive(Clone, Debug)]
pub struct ProductSystem<'a> {
    buchi: &'a BuchiAutomaton,
    net: &'a NetModel,
    labels: Vec<ProductLabel>,
}

/// Fuses `b` with `net`. Every letter of `b` must be a net label; net labels
/// missing from `b` are simply never enabled in the product.
pub fn build_product<'a>(b: &'a BuchiAutomaton, net: &'a NetModel) -> Result<ProductSystem<'a>> {
    if b.alphabet().iter().any(|l| net.transition(l).is_err()) {
        return Err(Error::AlphabetMismatch);
    }
    let mut labels: Vec<ProductLabel> = (0..b.num_states())
        .flat_map(|q| b.transitions_from(q).iter())
        .map(|(l, r)| ProductLabel {
            letter: l.clone(),
            target: *r,
        })
        .collect();
    labels.sort();
    labels.dedup();
    Ok(ProductSystem {
        buchi: b,
        net,
        labels,
    })
}

impl<'a> ProductSystem<'a> {
    pub fn buchi(&self) -> &'a BuchiAutomaton {
        self.buchi
    }

    pub fn net(&self) -> &'a NetModel {
        self.net
    }

    pub fn initial_ideal(&self, x0: IdealVec) -> ProductIdeal {
        ProductIdeal {
            control: self.buchi.initial(),
            ideal: x0,
        }
    }
}

impl EffectiveCompletion for ProductSystem<'_> {
    type Ideal = ProductIdeal;
    type Label = ProductLabel;

    fn alphabet(&self) -> Vec<ProductLabel> {
        self.labels.clone()
    }

    fn successor(
        &self,
        ideal: &ProductIdeal,
        label: &ProductLabel,
    ) -> Result<Option<ProductIdeal>> {
        if ideal.control >= self.buchi.num_states()
            || !self
                .buchi
                .has_transition(ideal.control, &label.letter, label.target)
        {
            return Ok(None);
        }
        Ok(self
            .net
            .post_ideal(&ideal.ideal, &label.letter)?
            .map(|v| ProductIdeal {
                control: label.target,
                ideal: v,
            }))
    }
}

impl PositiveSystem for ProductSystem<'_> {
    fn effect(&self, label: &ProductLabel) -> Result<EffectSummary> {
        self.net.effect_summary(&label.letter)
    }

    /// Product states are comparable only under the same control state.
    fn same_control(&self, from: &ProductIdeal, to: &ProductIdeal) -> bool {
        from.control == to.control
    }
}

/// Ideals of the marking space extended with a bottom element: either the
/// ideal `{⊥}` alone or an ideal of markings with `⊥` added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BottomIdeal {
    Bottom,
    Lifted(IdealVec),
}

/// The product state `(q_f, ⊥)` seen as a covering target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductTarget {
    pub control: usize,
}

pub fn bottom_extend_target(b: &BuchiAutomaton, q_f: usize) -> Result<ProductTarget> {
    if q_f >= b.num_states() {
        return Err(Error::UnknownState(format!("#{q_f}")));
    }
    Ok(ProductTarget { control: q_f })
}

impl ProductTarget {
    /// `⊥` lies in every ideal, so only the control state matters.
    pub fn contains(&self, ideal: &ProductIdeal) -> bool {
        ideal.control == self.control
    }

    pub fn contains_extended(&self, control: usize, _ideal: &BottomIdeal) -> bool {
        control == self.control
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km::{build_ikm_tree, IkmOptions};

    fn loop_buchi() -> BuchiAutomaton {
        "states: q0\nalphabet: a\ninitial: q0\naccepting: q0\nq0 a q0\n"
            .parse()
            .unwrap()
    }

    fn inc() -> NetModel {
        NetModel::vas(1, &[("a", &[1])]).unwrap()
    }

    #[test]
    fn trivial_control_mirrors_net() {
        let b = loop_buchi();
        let net = inc();
        let p = build_product(&b, &net).unwrap();
        let label = ProductLabel {
            letter: "a".into(),
            target: 0,
        };
        assert_eq!(p.alphabet(), vec![label.clone()]);
        let root = p.initial_ideal("(0)".parse().unwrap());
        let next = p.successor(&root, &label).unwrap().unwrap();
        assert_eq!(next.ideal.to_string(), "(1)");
        let tree = build_ikm_tree(&p, root, &IkmOptions::default()).unwrap();
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.node(1).ideal.to_string(), "q0 (w)");
    }

    #[test]
    fn missing_buchi_edge_disables_step() {
        let b: BuchiAutomaton = "states: p q\nalphabet: a\ninitial: p\naccepting: q\np a q\n"
            .parse()
            .unwrap();
        let net = inc();
        let p = build_product(&b, &net).unwrap();
        let at_q = ProductIdeal {
            control: 1,
            ideal: "(0)".parse().unwrap(),
        };
        assert_eq!(
            p.successor(
                &at_q,
                &ProductLabel {
                    letter: "a".into(),
                    target: 1
                }
            )
            .unwrap(),
            None
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let b: BuchiAutomaton = "states: p\nalphabet: b\ninitial: p\naccepting: p\np b p\n"
            .parse()
            .unwrap();
        assert!(matches!(
            build_product(&b, &inc()),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn bottom_targets() {
        let b: BuchiAutomaton = "states: p q\nalphabet: a\ninitial: p\naccepting: q\np a q\n"
            .parse()
            .unwrap();
        let t = bottom_extend_target(&b, 1).unwrap();
        let v: IdealVec = "(3)".parse().unwrap();
        assert!(t.contains(&ProductIdeal {
            control: 1,
            ideal: v.clone()
        }));
        assert!(!t.contains(&ProductIdeal {
            control: 0,
            ideal: v
        }));
        assert!(t.contains_extended(1, &BottomIdeal::Bottom));
        assert!(bottom_extend_target(&b, 2).is_err());
    }
}
