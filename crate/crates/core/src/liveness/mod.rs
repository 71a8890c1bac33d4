//! Positive sequences and repeated coverability.
//!
//! A word is positive when every state enabling it reaches a larger state
//! by it. For nets this is a property of the word's displacement: each
//! coordinate either receives an ω output somewhere in the word or has a
//! nonnegative total. A target is repeatedly coverable from `x0` iff some
//! node `c` of the stuttering automaton with the target in its ideal starts
//! a nonempty positive word that stays among nodes with the same
//! acceleration count as `c`.

mod flow;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Display;
use std::hash::Hash;

use serde::Serialize;

use flow::{Bounds, FlowEdge, FlowProblem};

use crate::error::{Error, Result};
use crate::ideal::{IdealVec, Marking};
use crate::kernel::{Ideal, PositiveSystem};
use crate::km::{build_ikm_tree, IkmOptions, IkmTree};
use crate::lang::{EpsKind, EpsNfa};
use crate::net::{Displacement, EffectSummary, NetModel};

/// An automaton whose lettered transitions carry the effect of their label.
#[derive(Clone, Debug)]
pub struct EffectAutomaton<S> {
    nfa: EpsNfa<S>,
    effects: BTreeMap<S, EffectSummary>,
    dim: usize,
}

impl<S: Clone + Ord + Hash + Display> EffectAutomaton<S> {
    /// Attaches `effects[s]` to every transition labeled `s`. Every alphabet
    /// symbol needs an effect of dimension `dim`.
    pub fn new(nfa: EpsNfa<S>, effects: BTreeMap<S, EffectSummary>, dim: usize) -> Result<Self> {
        for symbol in nfa.alphabet() {
            let effect = effects
                .get(symbol)
                .ok_or_else(|| Error::UnknownLabel(symbol.to_string()))?;
            if effect.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: effect.dim(),
                });
            }
        }
        Ok(EffectAutomaton { nfa, effects, dim })
    }

    pub fn nfa(&self) -> &EpsNfa<S> {
        &self.nfa
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effect(&self, symbol: &S) -> Option<&EffectSummary> {
        self.effects.get(symbol)
    }

    /// Summed displacement of a word, coordinate by coordinate.
    pub fn displacement(&self, word: &[S]) -> Result<Vec<Displacement>> {
        let effects = word
            .iter()
            .map(|s| {
                self.effect(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(word_displacement(&effects, self.dim))
    }
}

/// A positive accepted word together with its per-coordinate displacement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityWitness<S> {
    pub word: Vec<S>,
    pub justification: Vec<Displacement>,
}

/// Sums effects; a coordinate touched by an ω output stays `OmegaOutput`.
pub fn word_displacement(effects: &[&EffectSummary], dim: usize) -> Vec<Displacement> {
    (0..dim)
        .map(|i| {
            let mut total = 0i64;
            for e in effects {
                match e.0[i] {
                    Displacement::OmegaOutput => return Displacement::OmegaOutput,
                    Displacement::Finite(v) => total += v,
                }
            }
            Displacement::Finite(total)
        })
        .collect()
}

pub fn displacement_is_positive(displacement: &[Displacement]) -> bool {
    displacement.iter().all(|d| match d {
        Displacement::Finite(v) => *v >= 0,
        Displacement::OmegaOutput => true,
    })
}

/// Whether a nonempty word of net labels is positive.
pub fn is_positive_word(net: &NetModel, word: &[String]) -> Result<bool> {
    if word.is_empty() {
        return Err(Error::Empty("positivity is defined for nonempty words"));
    }
    let effects = word
        .iter()
        .map(|l| net.effect_summary(l))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&EffectSummary> = effects.iter().collect();
    Ok(displacement_is_positive(&word_displacement(
        &refs,
        net.dimension(),
    )))
}

/// Search parameters for [`exists_positive_sequence_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityOptions {
    /// Escalating per-edge bounds on flow counts.
    pub caps: Vec<u64>,
    /// Restrict the search to words of at most this many letters.
    pub max_word_length: Option<u64>,
}

impl Default for PositivityOptions {
    fn default() -> Self {
        PositivityOptions {
            caps: vec![16, 64, 256],
            max_word_length: None,
        }
    }
}

/// A nonempty accepted positive word, if one exists.
pub fn exists_positive_sequence<S: Clone + Ord + Hash + Display>(
    automaton: &EffectAutomaton<S>,
) -> Result<Option<PositivityWitness<S>>> {
    exists_positive_sequence_with(automaton, &PositivityOptions::default())
}

pub fn exists_positive_sequence_with<S: Clone + Ord + Hash + Display>(
    automaton: &EffectAutomaton<S>,
    options: &PositivityOptions,
) -> Result<Option<PositivityWitness<S>>> {
    let nfa = &automaton.nfa;
    if nfa.num_states() == 0 {
        return Ok(None);
    }
    // restrict to states reachable from the initial state
    let mut index = vec![usize::MAX; nfa.num_states()];
    let mut order = vec![nfa.initial()];
    index[nfa.initial()] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        let succ = nfa
            .letter_edges(q)
            .iter()
            .map(|(_, r)| *r)
            .chain(nfa.eps_edges(q).iter().map(|(r, _)| *r));
        for r in succ {
            if index[r] == usize::MAX {
                index[r] = order.len();
                order.push(r);
            }
        }
    }

    let symbols: Vec<S> = nfa.alphabet().iter().cloned().collect();
    let symbol_index: HashMap<&S, usize> =
        symbols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let zero = EffectSummary::zero(automaton.dim);
    let mut edges = Vec::new();
    for &q in &order {
        for (s, r) in nfa.letter_edges(q) {
            edges.push(FlowEdge {
                src: index[q],
                dst: index[*r],
                symbol: Some(symbol_index[s]),
                effect: automaton.effects[s].0.clone(),
            });
        }
        for (r, _) in nfa.eps_edges(q) {
            if index[q] != index[*r] {
                edges.push(FlowEdge {
                    src: index[q],
                    dst: index[*r],
                    symbol: None,
                    effect: zero.0.clone(),
                });
            }
        }
    }
    let problem = FlowProblem {
        num_states: order.len(),
        source: 0,
        sinks: order.iter().map(|&q| nfa.is_accepting(q)).collect(),
        edges,
        dim: automaton.dim,
    };
    if !problem.relaxation_feasible() {
        return Ok(None);
    }

    let attempts: Vec<Bounds> = match options.max_word_length {
        Some(len) => vec![Bounds {
            lettered_cap: len,
            eps_cap: (len + 1) * order.len() as u64,
            max_letters: Some(len),
        }],
        None => options
            .caps
            .iter()
            .map(|&cap| Bounds {
                lettered_cap: cap,
                eps_cap: cap,
                max_letters: None,
            })
            .collect(),
    };
    for bounds in attempts {
        if let Some(counts) = problem.solve(&bounds)? {
            let word: Vec<S> = problem
                .euler_path(&counts)
                .into_iter()
                .filter_map(|e| problem.edges[e].symbol.map(|s| symbols[s].clone()))
                .collect();
            let justification = automaton.displacement(&word)?;
            debug_assert!(displacement_is_positive(&justification));
            return Ok(Some(PositivityWitness {
                word,
                justification,
            }));
        }
    }
    Ok(None)
}

/// A node from which the target is covered again and again: the tree path
/// to the node, then the positive word repeated forever.
#[derive(Clone, Debug)]
pub struct RepeatWitness<I, L> {
    pub node: usize,
    pub ideal: I,
    pub prefix: Vec<L>,
    pub positive: PositivityWitness<L>,
}

/// Searches the stuttering automaton of `tree` for a target node that starts
/// a nonempty positive word within its acceleration class.
pub fn find_repeated_cover<S, F>(
    sys: &S,
    tree: &IkmTree<S::Ideal, S::Label>,
    is_target: F,
    options: &PositivityOptions,
) -> Result<Option<RepeatWitness<S::Ideal, S::Label>>>
where
    S: PositiveSystem,
    F: Fn(&S::Ideal) -> bool,
{
    let stuttering = tree.stuttering_automaton();
    let effects: BTreeMap<S::Label, EffectSummary> = tree
        .alphabet()
        .iter()
        .map(|l| Ok((l.clone(), sys.effect(l)?)))
        .collect::<Result<_>>()?;
    let dim = effects.values().next().map_or(0, EffectSummary::dim);
    let mut tested: HashSet<Vec<(usize, bool)>> = HashSet::new();

    for c in tree.nodes() {
        if !is_target(&c.ideal) {
            continue;
        }
        // Q_c: nodes reachable from c without changing the acceleration count
        let mut members = vec![c.id];
        let mut seen = HashSet::from([c.id]);
        let mut i = 0;
        while i < members.len() {
            let q = members[i];
            i += 1;
            let succ = stuttering
                .letter_edges(q)
                .iter()
                .map(|(_, r)| *r)
                .chain(stuttering.eps_edges(q).iter().map(|(r, _)| *r));
            for r in succ {
                if tree.node(r).numaccel == c.numaccel && seen.insert(r) {
                    members.push(r);
                }
            }
        }
        let accepting: Vec<bool> = members
            .iter()
            .map(|&d| sys.same_control(&c.ideal, &tree.node(d).ideal))
            .collect();
        let key: Vec<(usize, bool)> = members
            .iter()
            .copied()
            .zip(accepting.iter().copied())
            .collect();
        if !tested.insert(key) {
            continue;
        }

        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut sub = EpsNfa::new(tree.alphabet().iter().cloned());
        for (&q, &acc) in members.iter().zip(&accepting) {
            sub.add_state(stuttering.state_name(q), acc);
        }
        for &q in &members {
            for (s, r) in stuttering.letter_edges(q) {
                if let Some(&r) = local.get(r) {
                    sub.add_transition(local[&q], s.clone(), r)?;
                }
            }
            for (r, _) in stuttering.eps_edges(q) {
                if let Some(&r) = local.get(r) {
                    sub.add_eps(local[&q], r, EpsKind::Subsumption)?;
                }
            }
        }
        let automaton = EffectAutomaton::new(sub, effects.clone(), dim)?;
        if let Some(positive) = exists_positive_sequence_with(&automaton, options)? {
            return Ok(Some(RepeatWitness {
                node: c.id,
                ideal: c.ideal.clone(),
                prefix: tree.path_word(c.id),
                positive,
            }));
        }
    }
    Ok(None)
}

/// Builds the tree from `↓x0` and searches for a repeated cover of `y`.
pub fn find_repeated_cover_in_net(
    net: &NetModel,
    x0: &Marking,
    y: &Marking,
    ikm: &IkmOptions,
    options: &PositivityOptions,
) -> Result<Option<RepeatWitness<IdealVec, String>>> {
    for m in [x0, y] {
        if m.dim() != net.dimension() {
            return Err(Error::DimensionMismatch {
                expected: net.dimension(),
                found: m.dim(),
            });
        }
    }
    let tree = build_ikm_tree(net, IdealVec::from_marking(x0), ikm)?;
    find_repeated_cover(net, &tree, |i| i.contains(y).unwrap_or(false), options)
}

/// Whether some infinite run from `x0` covers `y` infinitely often.
pub fn repeatedly_coverable(net: &NetModel, x0: &Marking, y: &Marking) -> Result<bool> {
    Ok(find_repeated_cover_in_net(
        net,
        x0,
        y,
        &IkmOptions::default(),
        &PositivityOptions::default(),
    )?
    .is_some())
}

impl<I: Ideal, L> RepeatWitness<I, L> {
    pub fn level(&self) -> usize {
        self.ideal.level()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(s: &str) -> Marking {
        s.parse().unwrap()
    }

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn loop_automaton(
        effects: &[(&str, Vec<Displacement>)],
        accept_all: bool,
    ) -> EffectAutomaton<String> {
        let mut nfa = EpsNfa::new(effects.iter().map(|(l, _)| l.to_string()));
        let q = nfa.add_state("q", accept_all);
        for (l, _) in effects {
            nfa.add_transition(q, l.to_string(), q).unwrap();
        }
        let dim = effects[0].1.len();
        let map = effects
            .iter()
            .map(|(l, e)| (l.to_string(), EffectSummary(e.clone())))
            .collect();
        EffectAutomaton::new(nfa, map, dim).unwrap()
    }

    #[test]
    fn positive_word_examples() {
        let inc = NetModel::vas(1, &[("t", &[1])]).unwrap();
        assert!(is_positive_word(&inc, &words("t")).unwrap());
        let vas = NetModel::vas(2, &[("a", &[1, -1]), ("b", &[0, -1])]).unwrap();
        assert!(!is_positive_word(&vas, &words("a b")).unwrap());
        let omega: NetModel = "dim 2\nt | 1,0 | 0,w\ns | 0,0 | 2,0\n".parse().unwrap();
        assert!(!is_positive_word(&omega, &words("t t")).unwrap());
        assert!(is_positive_word(&omega, &words("s t")).unwrap());
        assert!(matches!(is_positive_word(&inc, &[]), Err(Error::Empty(_))));
        assert!(matches!(
            is_positive_word(&inc, &words("u")),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn witness_on_increment_loop() {
        let a = loop_automaton(&[("t", vec![Displacement::Finite(1)])], true);
        let w = exists_positive_sequence(&a).unwrap().unwrap();
        assert_eq!(w.word, words("t"));
        assert_eq!(w.justification, vec![Displacement::Finite(1)]);
    }

    #[test]
    fn no_witness_for_single_decrement() {
        let mut nfa = EpsNfa::new(["u".to_string()]);
        let p = nfa.add_state("p", false);
        let q = nfa.add_state("q", true);
        nfa.add_transition(p, "u".into(), q).unwrap();
        let map = BTreeMap::from([(
            "u".to_string(),
            EffectSummary(vec![Displacement::Finite(-1)]),
        )]);
        let a = EffectAutomaton::new(nfa, map, 1).unwrap();
        assert_eq!(exists_positive_sequence(&a).unwrap(), None);
    }

    #[test]
    fn effect_automaton_validation() {
        let mut nfa = EpsNfa::new(["u".to_string()]);
        nfa.add_state("p", true);
        assert!(EffectAutomaton::new(nfa.clone(), BTreeMap::new(), 1).is_err());
        let map = BTreeMap::from([("u".to_string(), EffectSummary::zero(2))]);
        assert!(EffectAutomaton::new(nfa, map, 1).is_err());
    }

    #[test]
    fn repeated_coverability_examples() {
        let inc = NetModel::vas(1, &[("t", &[1])]).unwrap();
        assert!(repeatedly_coverable(&inc, &mk("(0)"), &mk("(5)")).unwrap());
        let dec = NetModel::vas(1, &[("t", &[-1])]).unwrap();
        assert!(!repeatedly_coverable(&dec, &mk("(5)"), &mk("(0)")).unwrap());
        let transfer = NetModel::vas(2, &[("t", &[1, -1])]).unwrap();
        assert!(!repeatedly_coverable(&transfer, &mk("(0,5)"), &mk("(0,0)")).unwrap());
        assert!(repeatedly_coverable(&inc, &mk("(0,0)"), &mk("(0)")).is_err());
    }

    #[test]
    fn conservative_cycle_is_repeatable() {
        let net = NetModel::vas(2, &[("a", &[1, -1]), ("b", &[-1, 1])]).unwrap();
        let w = find_repeated_cover_in_net(
            &net,
            &mk("(0,1)"),
            &mk("(1,0)"),
            &IkmOptions::default(),
            &PositivityOptions::default(),
        )
        .unwrap()
        .unwrap();
        assert!(is_positive_word(&net, &w.positive.word).unwrap());
        assert!(!repeatedly_coverable(&net, &mk("(0,1)"), &mk("(1,1)")).unwrap());
    }
}
