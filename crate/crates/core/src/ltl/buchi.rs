//! Büchi automata and the tableau translation from LTL.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use super::formula::LtlFormula;
use crate::error::{Error, Result};
use crate::lang::{parse_automaton, EpsNfa};

/// A nondeterministic Büchi automaton over string letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuchiAutomaton {
    names: Vec<String>,
    alphabet: BTreeSet<String>,
    delta: Vec<Vec<(String, usize)>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl BuchiAutomaton {
    pub fn new(alphabet: impl IntoIterator<Item = String>) -> Self {
        BuchiAutomaton {
            names: Vec::new(),
            alphabet: alphabet.into_iter().collect(),
            delta: Vec::new(),
            initial: 0,
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, accepting: bool) -> usize {
        self.names.push(name.into());
        self.delta.push(Vec::new());
        self.accepting.push(accepting);
        self.names.len() - 1
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    pub fn set_initial(&mut self, q: usize) -> Result<()> {
        self.check_state(q)?;
        self.initial = q;
        Ok(())
    }

    pub fn add_transition(&mut self, from: usize, letter: String, to: usize) -> Result<()> {
        self.check_state(from)?;
        self.check_state(to)?;
        if !self.alphabet.contains(&letter) {
            return Err(Error::UnknownSymbol(letter));
        }
        if !self.delta[from]
            .iter()
            .any(|(l, q)| *l == letter && *q == to)
        {
            self.delta[from].push((letter, to));
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn transitions_from(&self, q: usize) -> &[(String, usize)] {
        &self.delta[q]
    }

    pub fn has_transition(&self, from: usize, letter: &str, to: usize) -> bool {
        self.delta[from]
            .iter()
            .any(|(l, q)| l == letter && *q == to)
    }

    fn step(&self, set: &BTreeSet<usize>, letter: &str) -> BTreeSet<usize> {
        set.iter()
            .flat_map(|&q| {
                self.delta[q]
                    .iter()
                    .filter(|(l, _)| l == letter)
                    .map(|(_, r)| *r)
            })
            .collect()
    }

    /// Whether `prefix · cycle^ω` is accepted. `cycle` must be nonempty.
    pub fn accepts_lasso(&self, prefix: &[String], cycle: &[String]) -> Result<bool> {
        if cycle.is_empty() {
            return Err(Error::Empty("the cycle of a lasso must be nonempty"));
        }
        for letter in prefix.iter().chain(cycle) {
            if !self.alphabet.contains(letter) {
                return Err(Error::UnknownSymbol(letter.clone()));
            }
        }
        if self.names.is_empty() {
            return Ok(false);
        }
        let mut current = BTreeSet::from([self.initial]);
        for letter in prefix {
            current = self.step(&current, letter);
        }
        // graph over (state, position in cycle)
        let n = cycle.len();
        let succ = |(q, i): (usize, usize)| -> Vec<(usize, usize)> {
            self.delta[q]
                .iter()
                .filter(|(l, _)| *l == cycle[i])
                .map(|&(_, r)| (r, (i + 1) % n))
                .collect()
        };
        let reach = |starts: Vec<(usize, usize)>| -> BTreeSet<(usize, usize)> {
            let mut seen: BTreeSet<_> = BTreeSet::new();
            let mut queue: VecDeque<_> = starts.into_iter().collect();
            while let Some(v) = queue.pop_front() {
                for w in succ(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let starts: Vec<(usize, usize)> = current.iter().map(|&q| (q, 0)).collect();
        let mut reachable = reach(starts.clone());
        reachable.extend(starts);
        Ok(reachable
            .iter()
            .filter(|(q, _)| self.accepting[*q])
            .any(|&v| reach(vec![v]).contains(&v)))
    }

    /// The automaton as an ε-free NFA sharing the textual format.
    pub fn to_nfa(&self) -> EpsNfa<String> {
        let mut nfa = EpsNfa::new(self.alphabet.iter().cloned());
        for (q, name) in self.names.iter().enumerate() {
            nfa.add_state(name.clone(), self.accepting[q]);
        }
        if !self.names.is_empty() {
            nfa.set_initial(self.initial).expect("initial state exists");
        }
        for (q, edges) in self.delta.iter().enumerate() {
            for (l, r) in edges {
                nfa.add_transition(q, l.clone(), *r)
                    .expect("letters are in the alphabet");
            }
        }
        nfa
    }

    /// Reads a Büchi automaton from an ε-free automaton.
    pub fn from_nfa(nfa: &EpsNfa<String>) -> Result<Self> {
        if nfa.eps_transitions().next().is_some() {
            return Err(Error::Precondition(
                "Büchi automata cannot have eps transitions".into(),
            ));
        }
        let mut b = BuchiAutomaton::new(nfa.alphabet().iter().cloned());
        for q in 0..nfa.num_states() {
            b.add_state(nfa.state_name(q), nfa.is_accepting(q));
        }
        if nfa.num_states() > 0 {
            b.set_initial(nfa.initial())?;
        }
        for (p, l, q) in nfa.transitions() {
            b.add_transition(p, l.clone(), q)?;
        }
        Ok(b)
    }

    /// Keeps only states that are reachable and from which an accepting
    /// cycle is reachable; the initial state always survives.
    pub fn trim(&self) -> BuchiAutomaton {
        let n = self.num_states();
        if n == 0 {
            return self.clone();
        }
        let forward = |from: usize| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = vec![from];
            while let Some(q) = stack.pop() {
                for &(_, r) in &self.delta[q] {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
            seen
        };
        let mut reachable = forward(self.initial);
        reachable[self.initial] = true;
        let mut useful: Vec<bool> = (0..n)
            .map(|q| self.accepting[q] && reachable[q] && forward(q)[q])
            .collect();
        // backward closure
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !useful[q] && reachable[q] && self.delta[q].iter().any(|&(_, r)| useful[r]) {
                    useful[q] = true;
                    changed = true;
                }
            }
        }
        let mut out = BuchiAutomaton::new(self.alphabet.iter().cloned());
        let mut map = BTreeMap::new();
        let init = self.initial;
        map.insert(
            init,
            out.add_state(
                self.names[init].clone(),
                self.accepting[init] && useful[init],
            ),
        );
        for (q, &keep) in useful.iter().enumerate() {
            if keep && q != self.initial {
                map.insert(q, out.add_state(self.names[q].clone(), self.accepting[q]));
            }
        }
        for (&q, &nq) in &map {
            if !useful[q] {
                continue;
            }
            for (l, r) in &self.delta[q] {
                if useful[*r] {
                    out.add_transition(nq, l.clone(), map[r])
                        .expect("states exist");
                }
            }
        }
        out.initial = 0;
        out
    }
}

impl fmt::Display for BuchiAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_nfa())
    }
}

impl FromStr for BuchiAutomaton {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        BuchiAutomaton::from_nfa(&parse_automaton(text)?)
    }
}

// Tableau expansion. A tableau state is the set of obligations for the
// current position; expanding it under a concrete letter yields the
// obligations for the next position and the set of untils postponed.
type Obligations = BTreeSet<LtlFormula>;

struct Expansion {
    next: Obligations,
    postponed: BTreeSet<LtlFormula>,
}

fn expand(
    letter: &str,
    todo: Vec<LtlFormula>,
    next: Obligations,
    postponed: BTreeSet<LtlFormula>,
    out: &mut Vec<Expansion>,
) {
    let mut todo = todo;
    let Some(f) = todo.pop() else {
        out.push(Expansion { next, postponed });
        return;
    };
    match &f {
        LtlFormula::True => expand(letter, todo, next, postponed, out),
        LtlFormula::False => {}
        LtlFormula::Atom(a) => {
            if a == letter {
                expand(letter, todo, next, postponed, out);
            }
        }
        LtlFormula::Not(g) => match g.as_ref() {
            LtlFormula::Atom(a) if a != letter => expand(letter, todo, next, postponed, out),
            LtlFormula::Atom(_) => {}
            _ => unreachable!("formula is in negation normal form"),
        },
        LtlFormula::And(a, b) => {
            todo.push((**a).clone());
            todo.push((**b).clone());
            expand(letter, todo, next, postponed, out);
        }
        LtlFormula::Or(a, b) => {
            let mut left = todo.clone();
            left.push((**a).clone());
            expand(letter, left, next.clone(), postponed.clone(), out);
            todo.push((**b).clone());
            expand(letter, todo, next, postponed, out);
        }
        LtlFormula::Next(g) => {
            let mut next = next;
            next.insert((**g).clone());
            expand(letter, todo, next, postponed, out);
        }
        LtlFormula::Until(a, b) => {
            let mut now = todo.clone();
            now.push((**b).clone());
            expand(letter, now, next.clone(), postponed.clone(), out);
            todo.push((**a).clone());
            let (mut next, mut postponed) = (next, postponed);
            next.insert(f.clone());
            postponed.insert(f.clone());
            expand(letter, todo, next, postponed, out);
        }
        LtlFormula::Release(a, b) => {
            let mut both = todo.clone();
            both.push((**a).clone());
            both.push((**b).clone());
            expand(letter, both, next.clone(), postponed.clone(), out);
            todo.push((**b).clone());
            let mut next = next;
            next.insert(f.clone());
            expand(letter, todo, next, postponed, out);
        }
        LtlFormula::Eventually(_) | LtlFormula::Globally(_) => {
            unreachable!("formula is in negation normal form")
        }
    }
}

fn untils(f: &LtlFormula, out: &mut BTreeSet<LtlFormula>) {
    match f {
        LtlFormula::True | LtlFormula::False | LtlFormula::Atom(_) => {}
        LtlFormula::Not(g)
        | LtlFormula::Next(g)
        | LtlFormula::Eventually(g)
        | LtlFormula::Globally(g) => untils(g, out),
        LtlFormula::And(a, b) | LtlFormula::Or(a, b) | LtlFormula::Release(a, b) => {
            untils(a, out);
            untils(b, out);
        }
        LtlFormula::Until(a, b) => {
            out.insert(f.clone());
            untils(a, out);
            untils(b, out);
        }
    }
}

/// Translates `phi` into a Büchi automaton over `alphabet` accepting exactly
/// the infinite words satisfying `phi`.
pub fn ltl_to_buchi(
    phi: &LtlFormula,
    alphabet: impl IntoIterator<Item = String>,
) -> Result<BuchiAutomaton> {
    let alphabet: BTreeSet<String> = alphabet.into_iter().collect();
    if let Some(a) = phi.atoms().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(Error::UnknownAtom(a));
    }
    let phi = phi.nnf();
    let mut all_untils = BTreeSet::new();
    untils(&phi, &mut all_untils);
    let untils: Vec<LtlFormula> = all_untils.into_iter().collect();
    let k = untils.len();

    // generalized automaton with transition-based acceptance
    // `tt` carries no obligation, so {tt} and {} are the same state
    let normalize = |mut set: Obligations| {
        set.remove(&LtlFormula::True);
        set
    };
    let mut states: Vec<Obligations> = vec![normalize(BTreeSet::from([phi]))];
    let mut index: BTreeMap<Obligations, usize> = BTreeMap::from([(states[0].clone(), 0)]);
    // (letter, target, acceptance bitset over untils)
    let mut edges: Vec<Vec<(String, usize, Vec<bool>)>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut out = Vec::new();
        for letter in &alphabet {
            let mut expansions = Vec::new();
            expand(
                letter,
                states[i].iter().cloned().collect(),
                BTreeSet::new(),
                BTreeSet::new(),
                &mut expansions,
            );
            for mut e in expansions {
                e.next = normalize(e.next);
                let target = *index.entry(e.next.clone()).or_insert_with(|| {
                    states.push(e.next.clone());
                    states.len() - 1
                });
                let acc: Vec<bool> = untils.iter().map(|u| !e.postponed.contains(u)).collect();
                out.push((letter.clone(), target, acc));
            }
        }
        out.sort();
        out.dedup();
        edges.push(out);
        i += 1;
    }

    // degeneralize with a counter j in 0..=k; j == k marks acceptance
    let mut b = BuchiAutomaton::new(alphabet);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    ids.insert((0, 0), b.add_state("s0.0", k == 0));
    while let Some((s, j)) = queue.pop_front() {
        let from = ids[&(s, j)];
        for (letter, t, acc) in &edges[s] {
            let mut nj = if j == k { 0 } else { j };
            while nj < k && acc[nj] {
                nj += 1;
            }
            let to = *ids.entry((*t, nj)).or_insert_with(|| {
                queue.push_back((*t, nj));
                b.add_state(format!("s{t}.{nj}"), nj == k)
            });
            b.add_transition(from, letter.clone(), to)?;
        }
    }
    Ok(b.trim())
}

impl From<&BuchiAutomaton> for EpsNfa<String> {
    fn from(b: &BuchiAutomaton) -> Self {
        b.to_nfa()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn ab() -> Vec<String> {
        w("a b")
    }

    #[test]
    fn true_is_universal() {
        let b = ltl_to_buchi(&"tt".parse().unwrap(), ab()).unwrap();
        assert_eq!(b.num_states(), 1);
        assert!(b.is_accepting(0));
        assert_eq!(b.transitions_from(0).len(), 2);
    }

    #[test]
    fn globally_a() {
        let b = ltl_to_buchi(&"G a".parse().unwrap(), ab()).unwrap();
        assert!(b.accepts_lasso(&[], &w("a")).unwrap());
        assert!(!b.accepts_lasso(&w("b"), &w("a")).unwrap());
        assert!(!b.accepts_lasso(&w("a a"), &w("a b")).unwrap());
    }

    #[test]
    fn infinitely_often() {
        let gf = ltl_to_buchi(&"G F a".parse().unwrap(), ab()).unwrap();
        let fg = ltl_to_buchi(&"F G !a".parse().unwrap(), ab()).unwrap();
        for (u, v, expected) in [
            ("", "a", true),
            ("a a", "b", false),
            ("b", "a b", true),
            ("", "b", false),
        ] {
            assert_eq!(
                gf.accepts_lasso(&w(u), &w(v)).unwrap(),
                expected,
                "{u} ({v})"
            );
            assert_eq!(fg.accepts_lasso(&w(u), &w(v)).unwrap(), !expected);
        }
    }

    #[test]
    fn false_is_empty() {
        let b = ltl_to_buchi(&"ff".parse().unwrap(), ab()).unwrap();
        assert!(!b.accepts_lasso(&[], &w("a")).unwrap());
        assert_eq!(b.num_states(), 1);
    }

    #[test]
    fn unknown_atom() {
        assert!(matches!(
            ltl_to_buchi(&"F c".parse().unwrap(), ab()),
            Err(Error::UnknownAtom(a)) if a == "c"
        ));
    }

    #[test]
    fn text_format() {
        let text = "states: p q\nalphabet: a b\ninitial: p\naccepting: q\np a q\nq b p\n";
        let b: BuchiAutomaton = text.parse().unwrap();
        assert!(b.accepts_lasso(&[], &w("a b")).unwrap());
        assert!(!b.accepts_lasso(&[], &w("a")).unwrap());
        assert_eq!(b.to_string(), text);
        assert!("states: p\ninitial: p\np eps p\n"
            .parse::<BuchiAutomaton>()
            .is_err());
        assert!(b.accepts_lasso(&[], &w("c")).is_err());
    }
}
