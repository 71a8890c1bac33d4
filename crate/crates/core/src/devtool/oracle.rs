//! Brute-force oracles. Each one works on concrete markings or explicit
//! word enumeration and shares no code with the decision procedures it is
//! compared against.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Display;
use std::hash::Hash;

use crate::ideal::{Marking, OmegaNat};
use crate::lang::EpsNfa;
use crate::liveness::EffectAutomaton;
use crate::ltl::LtlFormula;
use crate::net::{Displacement, NetModel, Transition};

fn fire(t: &Transition, m: &[u64], production: u64) -> Option<Vec<u64>> {
    if m.iter().zip(&t.guard).any(|(a, g)| a < g) {
        return None;
    }
    Some(
        m.iter()
            .zip(&t.guard)
            .zip(&t.output)
            .map(|((a, g), o)| {
                a - g
                    + match o {
                        OmegaNat::Fin(k) => *k,
                        OmegaNat::Omega => production,
                    }
            })
            .collect(),
    )
}

/// Markings reachable from `x0` when every coordinate is clamped at `cap`
/// after each step and ω outputs produce `cap`. Every returned marking is
/// below a truly reachable one, so its downward closure under-approximates
/// the cover; with a cap well above the region of interest it is exact
/// there in practice.
pub fn clamped_reachable(net: &NetModel, x0: &Marking, cap: u64) -> Vec<Marking> {
    let start: Vec<u64> = x0.0.iter().map(|&a| a.min(cap)).collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for t in net.transitions() {
            if let Some(mut next) = fire(t, &m, cap) {
                next.iter_mut().for_each(|a| *a = (*a).min(cap));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<Marking> = seen.into_iter().map(Marking).collect();
    out.sort();
    out
}

/// The ≤-maximal markings of a finite set.
pub fn maximal_elements(markings: &[Marking]) -> Vec<Marking> {
    let mut out: Vec<Marking> = Vec::new();
    for m in markings {
        if out
            .iter()
            .any(|o| m.0.iter().zip(&o.0).all(|(a, b)| a <= b))
        {
            continue;
        }
        out.retain(|o| !o.0.iter().zip(&m.0).all(|(a, b)| a <= b));
        out.push(m.clone());
    }
    out
}

pub fn in_downward_closure(maximal: &[Marking], p: &Marking) -> bool {
    maximal
        .iter()
        .any(|m| p.0.iter().zip(&m.0).all(|(a, b)| a <= b))
}

/// All points of `[0..=bound]^dim`.
pub fn box_points(dim: usize, bound: u64) -> Vec<Marking> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..=bound).map(move |k| {
                    let mut p = p.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Marking).collect()
}

/// Whether `y` is covered by some marking of [`clamped_reachable`].
pub fn clamped_coverable(net: &NetModel, x0: &Marking, y: &Marking, cap: u64) -> bool {
    clamped_reachable(net, x0, cap)
        .iter()
        .any(|m| y.0.iter().zip(&m.0).all(|(a, b)| a <= b))
}

/// Walks every concrete run of length `≤ depth` from `x0` alongside `nfa`
/// (ω outputs produce `production` tokens) and returns the first trace the
/// automaton rejects. Meant for prefix-closed automata.
pub fn first_unaccepted_trace(
    net: &NetModel,
    x0: &Marking,
    depth: usize,
    production: u64,
    nfa: &EpsNfa<String>,
) -> Option<Vec<String>> {
    fn walk(
        net: &NetModel,
        m: &[u64],
        states: &[usize],
        depth: usize,
        production: u64,
        nfa: &EpsNfa<String>,
        trace: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        if !states.iter().any(|&q| nfa.is_accepting(q)) {
            return Some(trace.clone());
        }
        if trace.len() == depth {
            return None;
        }
        for t in net.transitions() {
            if let Some(next) = fire(t, m, production) {
                trace.push(t.label.clone());
                let stepped = nfa.step(states, &t.label);
                let found = walk(net, &next, &stepped, depth, production, nfa, trace);
                trace.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }
    let start = nfa.eps_closure([nfa.initial()]);
    walk(net, &x0.0, &start, depth, production, nfa, &mut Vec::new())
}

/// Whether some concrete run of at most `max_len` steps from `x0` has a
/// trace containing `w` as a subword. Matching each letter as early as
/// possible loses nothing, so the search runs over (marking, matched
/// prefix) pairs.
pub fn has_superword_trace(
    net: &NetModel,
    x0: &Marking,
    w: &[String],
    max_len: usize,
    production: u64,
) -> bool {
    if w.is_empty() {
        return true;
    }
    let mut layer: HashSet<(Vec<u64>, usize)> = HashSet::from([(x0.0.clone(), 0)]);
    let mut seen = layer.clone();
    for _ in 0..max_len {
        let mut next_layer = HashSet::new();
        for (m, i) in &layer {
            for t in net.transitions() {
                if let Some(next) = fire(t, m, production) {
                    let j = if t.label == w[*i] { i + 1 } else { *i };
                    if j == w.len() {
                        return true;
                    }
                    let state = (next, j);
                    if seen.insert(state.clone()) {
                        next_layer.insert(state);
                    }
                }
            }
        }
        layer = next_layer;
    }
    false
}

/// All accepted words of length `≤ max_len`, by explicit subset stepping.
pub fn accepted_words<S: Clone + Ord + Hash + Display>(
    nfa: &EpsNfa<S>,
    max_len: usize,
) -> BTreeSet<Vec<S>> {
    let mut out = BTreeSet::new();
    if nfa.num_states() == 0 {
        return out;
    }
    let symbols: Vec<S> = nfa.alphabet().iter().cloned().collect();
    let mut stack = vec![(nfa.eps_closure([nfa.initial()]), Vec::new())];
    while let Some((states, word)) = stack.pop() {
        if states.iter().any(|&q| nfa.is_accepting(q)) {
            out.insert(word.clone());
        }
        if word.len() == max_len {
            continue;
        }
        for s in &symbols {
            let next = nfa.step(&states, s);
            if !next.is_empty() {
                let mut w = word.clone();
                w.push(s.clone());
                stack.push((next, w));
            }
        }
    }
    out
}

/// Accepted words of a prefix-closed automaton that are either of length
/// `max_len` or cannot be extended; every accepted word of length
/// `≤ max_len` is a prefix of one of them.
pub fn maximal_accepted_words<S: Clone + Ord + Hash + Display>(
    nfa: &EpsNfa<S>,
    max_len: usize,
) -> Vec<Vec<S>> {
    let words = accepted_words(nfa, max_len);
    words
        .iter()
        .filter(|w| {
            w.len() == max_len
                || !nfa.alphabet().iter().any(|s| {
                    let mut ext = (*w).clone();
                    ext.push(s.clone());
                    words.contains(&ext)
                })
        })
        .cloned()
        .collect()
}

/// `u ⪯ v`: `u` is obtained from `v` by deleting letters.
pub fn is_subword<S: PartialEq>(u: &[S], v: &[S]) -> bool {
    let mut it = v.iter();
    u.iter().all(|a| it.any(|b| b == a))
}

/// Whether some accepted word of length `≤ max_v` contains `u` as a subword.
/// Searches (state, matched prefix of `u`) pairs letter by letter; matching
/// as early as possible loses nothing.
pub fn bounded_subword_member<S: Clone + Ord + Hash + Display>(
    nfa: &EpsNfa<S>,
    u: &[S],
    max_v: usize,
) -> bool {
    if nfa.num_states() == 0 {
        return false;
    }
    let close = |layer: &BTreeSet<(usize, usize)>| -> BTreeSet<(usize, usize)> {
        layer
            .iter()
            .flat_map(|&(q, i)| nfa.eps_closure([q]).into_iter().map(move |r| (r, i)))
            .collect()
    };
    let mut layer = close(&BTreeSet::from([(nfa.initial(), 0)]));
    let mut seen = layer.clone();
    for step in 0..=max_v {
        if layer
            .iter()
            .any(|&(q, i)| i == u.len() && nfa.is_accepting(q))
        {
            return true;
        }
        if step == max_v {
            break;
        }
        let mut next = BTreeSet::new();
        for &(q, i) in &layer {
            for (s, r) in nfa.letter_edges(q) {
                let j = if i < u.len() && *s == u[i] { i + 1 } else { i };
                next.insert((*r, j));
            }
        }
        layer = close(&next)
            .into_iter()
            .filter(|x| seen.insert(*x))
            .collect();
    }
    false
}

/// Length of accepted words that suffices to witness `u ⪯ v` for some
/// `v ∈ L`: between two matched letters a shortest path repeats no state.
pub fn subword_witness_bound(states: usize, u_len: usize) -> usize {
    u_len + (u_len + 1) * states.saturating_sub(1)
}

/// A word of length `≤ max_len` accepted by `a` and rejected by `b`.
pub fn bounded_inclusion_counterexample<S: Clone + Ord + Hash + Display>(
    a: &EpsNfa<S>,
    b: &EpsNfa<S>,
    max_len: usize,
) -> Option<Vec<S>> {
    let accepted_b = accepted_words(b, max_len);
    accepted_words(a, max_len)
        .into_iter()
        .find(|w| !accepted_b.contains(w))
}

/// A positive accepted word of length `1..=max_len`, found by exhaustive
/// search over automaton paths.
pub fn brute_force_positive<S: Clone + Ord + Hash + Display>(
    automaton: &EffectAutomaton<S>,
    max_len: usize,
) -> Option<Vec<S>> {
    let nfa = automaton.nfa();
    if nfa.num_states() == 0 {
        return None;
    }
    let dim = automaton.dim();
    // state: (nfa state, displacement, ω flags); explored per length
    type Key = (usize, Vec<i64>, Vec<bool>);
    let mut layer: Vec<(Key, Vec<S>)> = nfa
        .eps_closure([nfa.initial()])
        .into_iter()
        .map(|q| ((q, vec![0; dim], vec![false; dim]), Vec::new()))
        .collect();
    let mut seen: HashSet<Key> = HashSet::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for ((q, disp, omega), word) in &layer {
            for (s, r) in nfa.letter_edges(*q) {
                let effect = automaton.effect(s).expect("effects cover the alphabet");
                let mut d = disp.clone();
                let mut o = omega.clone();
                for (i, e) in effect.0.iter().enumerate() {
                    match e {
                        Displacement::Finite(v) => d[i] += v,
                        Displacement::OmegaOutput => o[i] = true,
                    }
                }
                let mut w = word.clone();
                w.push(s.clone());
                for r in nfa.eps_closure([*r]) {
                    let positive = (0..dim).all(|i| o[i] || d[i] >= 0);
                    if positive && nfa.is_accepting(r) {
                        return Some(w);
                    }
                    let key = (r, d.clone(), o.clone());
                    if seen.insert(key.clone()) {
                        next.push((key, w.clone()));
                    }
                }
            }
        }
        layer = next;
    }
    None
}

/// Explicit reachability graph of a net without ω outputs.
#[derive(Clone, Debug)]
pub struct ReachGraph {
    pub markings: Vec<Marking>,
    /// `(transition index, successor)` pairs.
    pub edges: Vec<Vec<(usize, usize)>>,
}

/// The full reachability graph from `x0`, or `None` when it has more than
/// `limit` markings or the net has ω outputs.
pub fn reachability_graph(net: &NetModel, x0: &Marking, limit: usize) -> Option<ReachGraph> {
    if net.has_omega_outputs() {
        return None;
    }
    let mut index: HashMap<Vec<u64>, usize> = HashMap::from([(x0.0.clone(), 0)]);
    let mut markings = vec![x0.0.clone()];
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut i = 0;
    while i < markings.len() {
        let mut out = Vec::new();
        for (k, t) in net.transitions().iter().enumerate() {
            if let Some(next) = fire(t, &markings[i], 0) {
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if markings.len() == limit {
                            return None;
                        }
                        markings.push(next.clone());
                        index.insert(next, markings.len() - 1);
                        markings.len() - 1
                    }
                };
                out.push((k, id));
            }
        }
        edges.push(out);
        i += 1;
    }
    Some(ReachGraph {
        markings: markings.into_iter().map(Marking).collect(),
        edges,
    })
}

impl ReachGraph {
    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.markings.len()];
        let mut stack: Vec<usize> = self.edges[from].iter().map(|&(_, r)| r).collect();
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                stack.extend(self.edges[v].iter().map(|&(_, r)| r));
            }
        }
        false
    }

    /// Some reachable marking covering `y` lies on a cycle, so a lasso run
    /// covers `y` infinitely often.
    pub fn lasso_covers(&self, y: &Marking) -> bool {
        (0..self.markings.len())
            .filter(|&v| y.0.iter().zip(&self.markings[v].0).all(|(a, b)| a <= b))
            .any(|v| self.reaches(v, v))
    }

    /// Whether the graph has an infinite run at all.
    pub fn has_cycle(&self) -> bool {
        (0..self.markings.len()).any(|v| self.reaches(v, v))
    }
}

/// Direct LTL semantics on the lasso `prefix · cycle^ω`.
pub fn ltl_holds_on_lasso(phi: &LtlFormula, prefix: &[String], cycle: &[String]) -> bool {
    assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
    let word: Vec<&String> = prefix.iter().chain(cycle).collect();
    let n = word.len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { prefix.len() };

    fn eval(f: &LtlFormula, word: &[&String], succ: &dyn Fn(usize) -> usize) -> Vec<bool> {
        let n = word.len();
        // fixpoint iteration: n rounds suffice on a lasso of n positions
        let iterate = |init: bool, step: &dyn Fn(usize, &[bool]) -> bool| {
            let mut v = vec![init; n];
            for _ in 0..=n {
                v = (0..n).map(|i| step(i, &v)).collect();
            }
            v
        };
        match f {
            LtlFormula::True => vec![true; n],
            LtlFormula::False => vec![false; n],
            LtlFormula::Atom(a) => word.iter().map(|w| *w == a).collect(),
            LtlFormula::Not(g) => eval(g, word, succ).into_iter().map(|b| !b).collect(),
            LtlFormula::And(a, b) => {
                let (x, y) = (eval(a, word, succ), eval(b, word, succ));
                (0..n).map(|i| x[i] && y[i]).collect()
            }
            LtlFormula::Or(a, b) => {
                let (x, y) = (eval(a, word, succ), eval(b, word, succ));
                (0..n).map(|i| x[i] || y[i]).collect()
            }
            LtlFormula::Next(g) => {
                let x = eval(g, word, succ);
                (0..n).map(|i| x[succ(i)]).collect()
            }
            LtlFormula::Until(a, b) => {
                let (x, y) = (eval(a, word, succ), eval(b, word, succ));
                iterate(false, &|i, v| y[i] || (x[i] && v[succ(i)]))
            }
            LtlFormula::Release(a, b) => {
                let (x, y) = (eval(a, word, succ), eval(b, word, succ));
                iterate(true, &|i, v| y[i] && (x[i] || v[succ(i)]))
            }
            LtlFormula::Eventually(g) => {
                let y = eval(g, word, succ);
                iterate(false, &|i, v| y[i] || v[succ(i)])
            }
            LtlFormula::Globally(g) => {
                let y = eval(g, word, succ);
                iterate(true, &|i, v| y[i] && v[succ(i)])
            }
        }
    }
    eval(phi, &word, &succ)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn lasso_semantics() {
        let f = |s: &str| s.parse::<LtlFormula>().unwrap();
        assert!(ltl_holds_on_lasso(&f("G F a"), &w("b b"), &w("a b")));
        assert!(!ltl_holds_on_lasso(&f("G F a"), &w("a a"), &w("b")));
        assert!(ltl_holds_on_lasso(&f("a U b"), &w("a a b"), &w("c")));
        assert!(!ltl_holds_on_lasso(&f("a U b"), &[], &w("a")));
        assert!(ltl_holds_on_lasso(&f("X X c"), &w("a b"), &w("c")));
        assert!(ltl_holds_on_lasso(&f("b R a"), &[], &w("a")));
    }

    #[test]
    fn subwords() {
        assert!(is_subword(&w("a c"), &w("a b c")));
        assert!(!is_subword(&w("c a"), &w("a b c")));
        assert!(is_subword::<String>(&[], &[]));
    }

    #[test]
    fn clamped_reachability_of_increment() {
        let net = NetModel::vas(1, &[("t", &[1])]).unwrap();
        let r = clamped_reachable(&net, &Marking(vec![0]), 5);
        assert_eq!(r.len(), 6);
        assert!(clamped_coverable(
            &net,
            &Marking(vec![0]),
            &Marking(vec![5]),
            5
        ));
    }

    #[test]
    fn reachability_graph_lassos() {
        let dec = NetModel::vas(1, &[("t", &[-1])]).unwrap();
        let g = reachability_graph(&dec, &Marking(vec![5]), 100).unwrap();
        assert_eq!(g.markings.len(), 6);
        assert!(!g.has_cycle());
        let swap = NetModel::vas(2, &[("a", &[1, -1]), ("b", &[-1, 1])]).unwrap();
        let g = reachability_graph(&swap, &Marking(vec![0, 1]), 100).unwrap();
        assert!(g.lasso_covers(&Marking(vec![1, 0])));
        assert!(!g.lasso_covers(&Marking(vec![1, 1])));
    }

    #[test]
    fn superword_search_pumps() {
        // b needs three tokens, a makes one
        let net = NetModel::vas(1, &[("a", &[1]), ("b", &[-3])]).unwrap();
        let x0 = Marking(vec![0]);
        assert!(has_superword_trace(&net, &x0, &w("a b"), 4, 0));
        assert!(!has_superword_trace(&net, &x0, &w("a b"), 3, 0));
    }
}
