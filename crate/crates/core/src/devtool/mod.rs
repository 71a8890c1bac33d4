//! Seeded generators and brute-force oracles used by the test suites and
//! the `devtool` CLI subcommand. Everything here is deterministic in the
//! seed.

pub mod check;
pub mod oracle;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ideal::{Marking, OmegaNat};
use crate::lang::{EpsKind, EpsNfa};
use crate::liveness::EffectAutomaton;
use crate::ltl::LtlFormula;
use crate::net::{Displacement, EffectSummary, NetModel, Transition};

pub type DevRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DevRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly generated nets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetParams {
    pub max_dim: usize,
    pub max_transitions: usize,
    pub max_entry: u64,
    /// Allow ω outputs; at least one is then present.
    pub omega_outputs: bool,
    /// Force `Σ output ≤ Σ guard` on every transition so the token count
    /// never grows and every reachability set is finite.
    pub conservative: bool,
}

impl NetParams {
    pub const PETRI: NetParams = NetParams {
        max_dim: 4,
        max_transitions: 5,
        max_entry: 3,
        omega_outputs: false,
        conservative: false,
    };

    pub const OMEGA: NetParams = NetParams {
        omega_outputs: true,
        ..NetParams::PETRI
    };

    pub const BOUNDED: NetParams = NetParams {
        conservative: true,
        ..NetParams::PETRI
    };
}

pub fn random_net(rng: &mut DevRng, params: &NetParams) -> NetModel {
    let dim = rng.gen_range(1..=params.max_dim);
    let count = rng.gen_range(1..=params.max_transitions);
    let mut transitions: Vec<Transition> = (0..count)
        .map(|i| {
            let guard: Vec<u64> = (0..dim)
                .map(|_| rng.gen_range(0..=params.max_entry))
                .collect();
            let mut output: Vec<u64> = (0..dim)
                .map(|_| rng.gen_range(0..=params.max_entry))
                .collect();
            if params.conservative {
                let budget: u64 = guard.iter().sum();
                while output.iter().sum::<u64>() > budget {
                    let i = rng.gen_range(0..dim);
                    output[i] = output[i].saturating_sub(1);
                }
            }
            let output = output
                .into_iter()
                .map(|k| {
                    if params.omega_outputs && rng.gen_bool(0.15) {
                        OmegaNat::Omega
                    } else {
                        OmegaNat::Fin(k)
                    }
                })
                .collect();
            Transition {
                label: format!("t{i}"),
                guard,
                output,
            }
        })
        .collect();
    if params.omega_outputs && !transitions.iter().any(Transition::has_omega_output) {
        let t = rng.gen_range(0..count);
        let i = rng.gen_range(0..dim);
        transitions[t].output[i] = OmegaNat::Omega;
    }
    NetModel::new(dim, transitions).expect("generated nets are well formed")
}

pub fn random_marking(rng: &mut DevRng, dim: usize, max_entry: u64) -> Marking {
    Marking((0..dim).map(|_| rng.gen_range(0..=max_entry)).collect())
}

/// A random ε-NFA with `1..=max_states` states over `alphabet`; state 0 is
/// initial.
pub fn random_nfa(rng: &mut DevRng, max_states: usize, alphabet: &[&str]) -> EpsNfa<String> {
    let n = rng.gen_range(1..=max_states);
    let mut nfa = EpsNfa::new(alphabet.iter().map(|s| s.to_string()));
    for q in 0..n {
        nfa.add_state(format!("q{q}"), rng.gen_bool(0.4));
    }
    for p in 0..n {
        for s in alphabet {
            for q in 0..n {
                if rng.gen_bool(0.3 / n as f64 + 0.1) {
                    nfa.add_transition(p, s.to_string(), q).expect("valid");
                }
            }
        }
        for q in 0..n {
            if p != q && rng.gen_bool(0.1) {
                nfa.add_eps(p, q, EpsKind::Plain).expect("valid");
            }
        }
    }
    nfa
}

/// A random effect automaton with `|Q| ≤ max_states`, dimension
/// `≤ max_dim` and small displacements; ω outputs appear occasionally.
pub fn random_effect_automaton(
    rng: &mut DevRng,
    max_states: usize,
    max_dim: usize,
) -> EffectAutomaton<String> {
    let letters = ["a", "b", "c"];
    let alphabet = &letters[..rng.gen_range(1..=3)];
    let dim = rng.gen_range(1..=max_dim);
    let nfa = random_nfa(rng, max_states, alphabet);
    let effects: BTreeMap<String, EffectSummary> = alphabet
        .iter()
        .map(|s| {
            let e = (0..dim)
                .map(|_| {
                    if rng.gen_bool(0.08) {
                        Displacement::OmegaOutput
                    } else {
                        Displacement::Finite(rng.gen_range(-2..=2))
                    }
                })
                .collect();
            (s.to_string(), EffectSummary(e))
        })
        .collect();
    EffectAutomaton::new(nfa, effects, dim).expect("effects cover the alphabet")
}

/// A random formula with at most `max_size` nodes over `atoms`.
pub fn random_formula(rng: &mut DevRng, max_size: usize, atoms: &[&str]) -> LtlFormula {
    let size = rng.gen_range(1..=max_size.max(1));
    formula_of_size(rng, size, atoms)
}

fn formula_of_size(rng: &mut DevRng, size: usize, atoms: &[&str]) -> LtlFormula {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => LtlFormula::True,
            1 => LtlFormula::False,
            _ => LtlFormula::atom(*atoms.choose(rng).expect("nonempty atoms")),
        };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let inner = formula_of_size(rng, size - 1, atoms);
        return match rng.gen_range(0..4) {
            0 => LtlFormula::not(inner),
            1 => LtlFormula::next(inner),
            2 => LtlFormula::eventually(inner),
            _ => LtlFormula::globally(inner),
        };
    }
    let left = rng.gen_range(1..size - 1);
    let a = formula_of_size(rng, left, atoms);
    let b = formula_of_size(rng, size - 1 - left, atoms);
    match rng.gen_range(0..4) {
        0 => LtlFormula::and(a, b),
        1 => LtlFormula::or(a, b),
        2 => LtlFormula::until(a, b),
        _ => LtlFormula::release(a, b),
    }
}

/// A lasso `u · v^ω` with `|u| ≤ max_len` and `1 ≤ |v| ≤ max_len`.
pub fn random_lasso(
    rng: &mut DevRng,
    alphabet: &[&str],
    max_len: usize,
) -> (Vec<String>, Vec<String>) {
    let u_len = rng.gen_range(0..=max_len);
    let v_len = rng.gen_range(1..=max_len.max(1));
    let mut word = |len: usize| -> Vec<String> {
        (0..len)
            .map(|_| alphabet.choose(rng).expect("nonempty alphabet").to_string())
            .collect()
    };
    let u = word(u_len);
    let v = word(v_len);
    (u, v)
}
