//! LTL model checking over infinite action sequences.
//!
//! `phi` holds from `x0` when no infinite trace of the net satisfies `¬phi`.
//! The check translates `¬phi` into a Büchi automaton `B`, forms the product
//! of `B` with the net and asks whether some accepting control state is
//! repeatedly coverable. Finite maximal runs are not traces, so a net
//! without infinite runs satisfies every formula.

mod buchi;
mod formula;
mod product;

pub use buchi::{ltl_to_buchi, BuchiAutomaton};
pub use formula::LtlFormula;
pub use product::{
    bottom_extend_target, build_product, BottomIdeal, ProductIdeal, ProductLabel, ProductSystem,
    ProductTarget,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{IdealVec, Marking};
use crate::km::{build_ikm_tree, IkmOptions};
use crate::liveness::{find_repeated_cover, PositivityOptions};
use crate::net::{Displacement, NetModel};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LtlOptions {
    pub ikm: IkmOptions,
    pub positivity: PositivityOptions,
}

/// Diagnostic for a violated formula: the run follows `prefix` to a product
/// node whose control state is accepting, then repeats `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LtlViolation {
    pub accepting_state: String,
    pub node_ideal: String,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
    pub justification: Vec<Displacement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LtlVerdict {
    Holds,
    Violated(Box<LtlViolation>),
}

impl LtlVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LtlVerdict::Holds)
    }
}

/// Whether every infinite trace from `x0` satisfies `phi`.
pub fn model_check_ltl(
    net: &NetModel,
    x0: &Marking,
    phi: &LtlFormula,
    options: &LtlOptions,
) -> Result<LtlVerdict> {
    let negated = LtlFormula::not(phi.clone());
    let b = ltl_to_buchi(&negated, net.labels().map(String::from))?;
    check_buchi(net, x0, &b, options)
}

/// Whether no infinite trace from `x0` is accepted by `b`; a violation
/// reports an accepted trace.
pub fn check_buchi(
    net: &NetModel,
    x0: &Marking,
    b: &BuchiAutomaton,
    options: &LtlOptions,
) -> Result<LtlVerdict> {
    if x0.dim() != net.dimension() {
        return Err(Error::DimensionMismatch {
            expected: net.dimension(),
            found: x0.dim(),
        });
    }
    if b.accepting_states().next().is_none() {
        return Ok(LtlVerdict::Holds);
    }
    let product = build_product(b, net)?;
    let root = product.initial_ideal(IdealVec::from_marking(x0));
    let tree = build_ikm_tree(&product, root, &options.ikm)?;
    let targets: Vec<ProductTarget> = b
        .accepting_states()
        .map(|q| bottom_extend_target(b, q))
        .collect::<Result<_>>()?;
    let found = find_repeated_cover(
        &product,
        &tree,
        |ideal| targets.iter().any(|t| t.contains(ideal)),
        &options.positivity,
    )?;
    Ok(match found {
        None => LtlVerdict::Holds,
        Some(w) => LtlVerdict::Violated(Box::new(LtlViolation {
            accepting_state: b.state_name(w.ideal.control).to_string(),
            node_ideal: w.ideal.ideal.to_string(),
            prefix: w.prefix.into_iter().map(|l| l.letter).collect(),
            cycle: w.positive.word.into_iter().map(|l| l.letter).collect(),
            justification: w.positive.justification,
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(net: &NetModel, x0: &str, phi: &str) -> LtlVerdict {
        model_check_ltl(
            net,
            &x0.parse().unwrap(),
            &phi.parse().unwrap(),
            &LtlOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn increment_loop() {
        let net = NetModel::vas(1, &[("a", &[1])]).unwrap();
        assert!(check(&net, "(0)", "G F a").holds());
        match check(&net, "(0)", "F G !a") {
            LtlVerdict::Violated(v) => {
                assert!(v.cycle.iter().all(|l| l == "a"));
                assert!(!v.cycle.is_empty());
            }
            LtlVerdict::Holds => panic!("F G !a must fail on a^ω"),
        }
    }

    #[test]
    fn no_infinite_trace_means_vacuous_truth() {
        let net = NetModel::vas(1, &[("a", &[-1])]).unwrap();
        for phi in ["G F a", "F G !a", "ff", "G !a"] {
            assert!(check(&net, "(3)", phi).holds(), "{phi}");
        }
    }

    #[test]
    fn alternation_needs_control() {
        // the only trace is (a b)^ω
        let net = NetModel::vas(2, &[("a", &[-1, 1]), ("b", &[1, -1])]).unwrap();
        assert!(check(&net, "(1,0)", "G (!a | X b)").holds());
        assert!(check(&net, "(1,0)", "G F b & G F a").holds());
        for phi in ["F G a", "G a", "F G !b", "X a"] {
            match check(&net, "(1,0)", phi) {
                LtlVerdict::Violated(v) => assert_eq!(v.cycle.len() % 2, 0, "{phi}: {v:?}"),
                LtlVerdict::Holds => panic!("{phi} should be violated"),
            }
        }
    }

    #[test]
    fn dimension_checked() {
        let net = NetModel::vas(1, &[("a", &[1])]).unwrap();
        let err = model_check_ltl(
            &net,
            &"(0,0)".parse().unwrap(),
            &"G a".parse().unwrap(),
            &LtlOptions::default(),
        );
        assert!(err.is_err());
        let err = model_check_ltl(
            &net,
            &"(0)".parse().unwrap(),
            &"G c".parse().unwrap(),
            &LtlOptions::default(),
        );
        assert!(matches!(err, Err(Error::UnknownAtom(_))));
    }
}
