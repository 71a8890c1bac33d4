//! Finite automata with ε-transitions and the language operations behind
//! downward trace inclusion.

mod format;

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Debug, Display, Write as _};
use std::hash::Hash;

pub use format::parse_automaton;

use crate::error::{Error, Result};
use crate::kernel::EffectiveCompletion;
use crate::km::{build_ikm_tree, IkmOptions};

/// Default cap on the number of subsets explored by [`included`].
pub const DEFAULT_SUBSET_LIMIT: usize = 1 << 16;

/// Provenance of an ε-transition, used only for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsKind {
    Plain,
    /// Leaf back to an ancestor carrying the same ideal.
    Subsumption,
    /// Accelerated node back to the ancestor that triggered it.
    Acceleration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsNfa<S> {
    names: Vec<String>,
    alphabet: BTreeSet<S>,
    letters: Vec<Vec<(S, usize)>>,
    eps: Vec<Vec<(usize, EpsKind)>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl<S: Clone + Ord + Hash + Display> EpsNfa<S> {
    /// An automaton with no states; the first added state becomes initial.
    pub fn new(alphabet: impl IntoIterator<Item = S>) -> Self {
        EpsNfa {
            names: Vec::new(),
            alphabet: alphabet.into_iter().collect(),
            letters: Vec::new(),
            eps: Vec::new(),
            initial: 0,
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, accepting: bool) -> usize {
        self.names.push(name.into());
        self.letters.push(Vec::new());
        self.eps.push(Vec::new());
        self.accepting.push(accepting);
        self.names.len() - 1
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(q.to_string()))
        }
    }

    pub fn set_initial(&mut self, q: usize) -> Result<()> {
        self.check_state(q)?;
        self.initial = q;
        Ok(())
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) -> Result<()> {
        self.check_state(q)?;
        self.accepting[q] = accepting;
        Ok(())
    }

    pub fn add_transition(&mut self, from: usize, symbol: S, to: usize) -> Result<()> {
        self.check_state(from)?;
        self.check_state(to)?;
        if !self.alphabet.contains(&symbol) {
            return Err(Error::UnknownSymbol(symbol.to_string()));
        }
        if !self.letters[from]
            .iter()
            .any(|(s, q)| *s == symbol && *q == to)
        {
            self.letters[from].push((symbol, to));
        }
        Ok(())
    }

    pub fn add_eps(&mut self, from: usize, to: usize, kind: EpsKind) -> Result<()> {
        self.check_state(from)?;
        self.check_state(to)?;
        if !self.eps[from].iter().any(|(q, _)| *q == to) {
            self.eps[from].push((to, kind));
        }
        Ok(())
    }

    /// Adds symbols to the alphabet; the language is unchanged.
    pub fn extend_alphabet(&mut self, symbols: impl IntoIterator<Item = S>) {
        self.alphabet.extend(symbols);
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet(&self) -> &BTreeSet<S> {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    /// Lettered transitions leaving `q`.
    pub fn letter_edges(&self, q: usize) -> &[(S, usize)] {
        &self.letters[q]
    }

    /// ε-transitions leaving `q`.
    pub fn eps_edges(&self, q: usize) -> &[(usize, EpsKind)] {
        &self.eps[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, &S, usize)> + '_ {
        self.letters
            .iter()
            .enumerate()
            .flat_map(|(p, out)| out.iter().map(move |(s, q)| (p, s, *q)))
    }

    pub fn eps_transitions(&self) -> impl Iterator<Item = (usize, usize, EpsKind)> + '_ {
        self.eps
            .iter()
            .enumerate()
            .flat_map(|(p, out)| out.iter().map(move |(q, k)| (p, *q, *k)))
    }

    /// Sorted ε-closure of a set of states.
    pub fn eps_closure(&self, states: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = states.into_iter().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(r, _) in &self.eps[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(q, &s)| s.then_some(q))
            .collect()
    }

    /// ε-closure of the states reachable from `set` by one `symbol`.
    pub fn step(&self, set: &[usize], symbol: &S) -> Vec<usize> {
        let moved = set.iter().flat_map(|&p| {
            self.letters[p]
                .iter()
                .filter(move |(s, _)| s == symbol)
                .map(|(_, q)| *q)
        });
        self.eps_closure(moved.collect::<Vec<_>>())
    }

    pub fn accepts(&self, word: &[S]) -> Result<bool> {
        if self.num_states() == 0 {
            return Ok(false);
        }
        if let Some(bad) = word.iter().find(|s| !self.alphabet.contains(s)) {
            return Err(Error::UnknownSymbol(bad.to_string()));
        }
        let mut current = self.eps_closure([self.initial]);
        for symbol in word {
            if current.is_empty() {
                return Ok(false);
            }
            current = self.step(&current, symbol);
        }
        Ok(current.iter().any(|&q| self.accepting[q]))
    }

    /// Automaton for `{u : u ⪯ v for some accepted v}`: every lettered
    /// transition gets a parallel ε-transition.
    pub fn subword_closure(&self) -> EpsNfa<S> {
        let mut out = self.clone();
        for p in 0..self.num_states() {
            for (_, q) in &self.letters[p] {
                if !out.eps[p].iter().any(|(r, _)| r == q) {
                    out.eps[p].push((*q, EpsKind::Plain));
                }
            }
        }
        out
    }

    /// Graphviz rendering. Subsumption ε-edges are dotted, acceleration
    /// ε-edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out =
            String::from("digraph automaton {\n  rankdir=TB;\n  __start [shape=point];\n");
        for (q, name) in self.names.iter().enumerate() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(
                out,
                "  q{q} [label=\"{}\", shape={shape}];",
                dot_escape(name)
            );
        }
        if self.num_states() > 0 {
            let _ = writeln!(out, "  __start -> q{};", self.initial);
        }
        for (p, s, q) in self.transitions() {
            let _ = writeln!(
                out,
                "  q{p} -> q{q} [label=\"{}\"];",
                dot_escape(&s.to_string())
            );
        }
        for (p, q, kind) in self.eps_transitions() {
            let style = match kind {
                EpsKind::Plain => "solid",
                EpsKind::Subsumption => "dotted",
                EpsKind::Acceleration => "dashed",
            };
            let _ = writeln!(out, "  q{p} -> q{q} [label=\"ε\", style={style}];");
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

struct SubsetInterner {
    ids: HashMap<Vec<usize>, usize>,
    sets: Vec<Vec<usize>>,
    limit: usize,
}

impl SubsetInterner {
    fn intern(&mut self, set: Vec<usize>) -> Result<usize> {
        if let Some(&id) = self.ids.get(&set) {
            return Ok(id);
        }
        if self.sets.len() >= self.limit {
            return Err(Error::StateLimit(self.limit));
        }
        self.sets.push(set.clone());
        self.ids.insert(set, self.sets.len() - 1);
        Ok(self.sets.len() - 1)
    }
}

/// A word in `L(a) \ L(b)`, if any. Explores `a × det(b)` breadth-first on
/// the fly; the subset construction is capped at `subset_limit` subsets.
pub fn inclusion_counterexample<S: Clone + Ord + Hash + Display>(
    a: &EpsNfa<S>,
    b: &EpsNfa<S>,
    subset_limit: usize,
) -> Result<Option<Vec<S>>> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    if a.num_states() == 0 {
        return Ok(None);
    }
    let mut subsets = SubsetInterner {
        ids: HashMap::new(),
        sets: Vec::new(),
        limit: subset_limit,
    };
    let b_start = if b.num_states() == 0 {
        Vec::new()
    } else {
        b.eps_closure([b.initial])
    };
    let start_b = subsets.intern(b_start)?;
    // (state of a, subset id of b) -> (predecessor, symbol read)
    type Pair = (usize, usize);
    let mut parent: HashMap<Pair, Option<(Pair, Option<S>)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for qa in a.eps_closure([a.initial]) {
        parent.insert((qa, start_b), None);
        queue.push_back((qa, start_b));
    }
    let mut successor_cache: HashMap<(usize, S), usize> = HashMap::new();
    while let Some((qa, sb)) = queue.pop_front() {
        if a.accepting[qa] && !subsets.sets[sb].iter().any(|&q| b.accepting[q]) {
            let mut word = Vec::new();
            let mut cur = (qa, sb);
            while let Some(Some((prev, sym))) = parent.get(&cur) {
                if let Some(s) = sym {
                    word.push(s.clone());
                }
                cur = *prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for &(ra, _) in &a.eps[qa] {
            if let Entry::Vacant(e) = parent.entry((ra, sb)) {
                e.insert(Some(((qa, sb), None)));
                queue.push_front((ra, sb));
            }
        }
        for (symbol, ra) in &a.letters[qa] {
            let key = (sb, symbol.clone());
            let next_b = match successor_cache.get(&key) {
                Some(&id) => id,
                None => {
                    let stepped = b.step(&subsets.sets[sb], symbol);
                    let id = subsets.intern(stepped)?;
                    successor_cache.insert(key, id);
                    id
                }
            };
            if let Entry::Vacant(e) = parent.entry((*ra, next_b)) {
                e.insert(Some(((qa, sb), Some(symbol.clone()))));
                queue.push_back((*ra, next_b));
            }
        }
    }
    Ok(None)
}

/// `L(a) ⊆ L(b)`.
pub fn included<S: Clone + Ord + Hash + Display>(a: &EpsNfa<S>, b: &EpsNfa<S>) -> Result<bool> {
    Ok(inclusion_counterexample(a, b, DEFAULT_SUBSET_LIMIT)?.is_none())
}

/// A word in `↓Traces(S1, I1) \ ↓Traces(S2, I2)`, if any. Both trace
/// languages are read off the Karp-Miller automata of the two trees and
/// closed under subwords; alphabets are widened to their union first.
pub fn traces_dc_counterexample<A, B, L>(
    sys1: &A,
    x1: A::Ideal,
    sys2: &B,
    x2: B::Ideal,
    options: &IkmOptions,
) -> Result<Option<Vec<L>>>
where
    A: EffectiveCompletion<Label = L>,
    B: EffectiveCompletion<Label = L>,
    L: Clone + Eq + Ord + Hash + Debug + Display,
{
    let mut a = build_ikm_tree(sys1, x1, options)?
        .km_automaton()
        .subword_closure();
    let mut b = build_ikm_tree(sys2, x2, options)?
        .km_automaton()
        .subword_closure();
    let union: Vec<L> = a.alphabet.union(&b.alphabet).cloned().collect();
    a.extend_alphabet(union.iter().cloned());
    b.extend_alphabet(union);
    inclusion_counterexample(&a, &b, DEFAULT_SUBSET_LIMIT)
}

/// `↓Traces(S1, I1) ⊆ ↓Traces(S2, I2)` under the subword order.
pub fn traces_dc_included<A, B, L>(
    sys1: &A,
    x1: A::Ideal,
    sys2: &B,
    x2: B::Ideal,
    options: &IkmOptions,
) -> Result<bool>
where
    A: EffectiveCompletion<Label = L>,
    B: EffectiveCompletion<Label = L>,
    L: Clone + Eq + Ord + Hash + Debug + Display,
{
    Ok(traces_dc_counterexample(sys1, x1, sys2, x2, options)?.is_none())
}

impl fmt::Display for EpsNfa<String> {
    /// The textual automaton format understood by [`parse_automaton`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_automaton(self, f)
    }
}
