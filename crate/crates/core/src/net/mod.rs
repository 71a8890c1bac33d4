//! Labeled vector addition systems, Petri nets and ω-Petri nets.
//!
//! A transition consumes its guard and produces its output; an `ω` output
//! produces arbitrarily many tokens. Labels are unique, which makes the
//! ideal completion deterministic.

mod backward;
mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use backward::backward_coverable;
pub use format::load_net;

use crate::error::{Error, Result};
use crate::ideal::{IdealVec, Marking, OmegaNat};
use crate::kernel::{EffectiveCompletion, PositiveSystem};

/// Default production bound used when enumerating concrete ω outputs.
pub const DEFAULT_OMEGA_BOUND: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub label: String,
    pub guard: Vec<u64>,
    pub output: Vec<OmegaNat>,
}

impl Transition {
    pub fn has_omega_output(&self) -> bool {
        self.output.iter().any(|o| o.is_omega())
    }
}

/// Per-coordinate effect of one transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Displacement {
    /// `output − guard`.
    Finite(i64),
    /// The transition produces ω on this coordinate.
    OmegaOutput,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EffectSummary(pub Vec<Displacement>);

impl EffectSummary {
    pub fn zero(dim: usize) -> Self {
        EffectSummary(vec![Displacement::Finite(0); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetModel {
    dimension: usize,
    transitions: Vec<Transition>,
    index: HashMap<String, usize>,
}

impl NetModel {
    /// Validates and builds a net; all violations are reported together.
    pub fn new(dimension: usize, transitions: Vec<Transition>) -> Result<Self> {
        let mut problems = Vec::new();
        if dimension == 0 {
            problems.push("dimension must be at least 1".to_string());
        }
        let mut index = HashMap::new();
        for (i, t) in transitions.iter().enumerate() {
            if t.label.is_empty() {
                problems.push(format!("transition {}: empty label", i + 1));
            }
            if index.insert(t.label.clone(), i).is_some() {
                problems.push(format!("labels must be unique (\"{}\" repeated)", t.label));
            }
            if t.guard.len() != dimension {
                problems.push(format!(
                    "transition \"{}\": guard has length {}, expected {dimension}",
                    t.label,
                    t.guard.len()
                ));
            }
            if t.output.len() != dimension {
                problems.push(format!(
                    "transition \"{}\": output has length {}, expected {dimension}",
                    t.label,
                    t.output.len()
                ));
            }
        }
        if problems.is_empty() {
            Ok(NetModel {
                dimension,
                transitions,
                index,
            })
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// A VAS given by displacement vectors `t ∈ ℤ^d`: guard `max(−t, 0)`,
    /// output `guard + t`.
    pub fn vas(dimension: usize, effects: &[(&str, &[i64])]) -> Result<Self> {
        let transitions = effects
            .iter()
            .map(|(label, t)| {
                let guard: Vec<u64> = t.iter().map(|&c| (-c).max(0) as u64).collect();
                let output = guard
                    .iter()
                    .zip(t.iter())
                    .map(|(&g, &c)| OmegaNat::Fin((g as i64 + c) as u64))
                    .collect();
                Transition {
                    label: label.to_string(),
                    guard,
                    output,
                }
            })
            .collect();
        NetModel::new(dimension, transitions)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Labels in declaration order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.transitions.iter().map(|t| t.label.as_str())
    }

    pub fn has_omega_outputs(&self) -> bool {
        self.transitions.iter().any(Transition::has_omega_output)
    }

    pub fn transition(&self, label: &str) -> Result<&Transition> {
        self.index
            .get(label)
            .map(|&i| &self.transitions[i])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn check_marking(&self, x: &Marking) -> Result<()> {
        if x.dim() == self.dimension {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.dim(),
            })
        }
    }

    /// Concrete successors of `x` under `label`. Every ω output is replaced
    /// by each production in `0..=bound`.
    pub fn post_concrete(&self, x: &Marking, label: &str, bound: u64) -> Result<BTreeSet<Marking>> {
        let t = self.transition(label)?;
        self.check_marking(x)?;
        let mut out = BTreeSet::new();
        if x.0.iter().zip(&t.guard).any(|(a, g)| a < g) {
            return Ok(out);
        }
        let base: Vec<u64> = x.0.iter().zip(&t.guard).map(|(a, g)| a - g).collect();
        let mut partial = vec![base];
        for (i, o) in t.output.iter().enumerate() {
            match o {
                OmegaNat::Fin(k) => partial.iter_mut().for_each(|m| m[i] += k),
                OmegaNat::Omega => {
                    partial = partial
                        .into_iter()
                        .flat_map(|m| {
                            (0..=bound).map(move |k| {
                                let mut m = m.clone();
                                m[i] += k;
                                m
                            })
                        })
                        .collect();
                }
            }
        }
        out.extend(partial.into_iter().map(Marking));
        Ok(out)
    }

    /// The ideal successor `a(↓v)`, or `None` when the guard is not met.
    pub fn post_ideal(&self, v: &IdealVec, label: &str) -> Result<Option<IdealVec>> {
        let t = self.transition(label)?;
        if v.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: v.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.dimension);
        for ((&c, &g), &o) in v.components().iter().zip(&t.guard).zip(&t.output) {
            match c.checked_sub(g) {
                Some(rest) => out.push(rest.plus(o)),
                None => return Ok(None),
            }
        }
        Ok(Some(IdealVec::new(out)?))
    }

    pub fn effect_summary(&self, label: &str) -> Result<EffectSummary> {
        let t = self.transition(label)?;
        Ok(EffectSummary(
            t.guard
                .iter()
                .zip(&t.output)
                .map(|(&g, o)| match o {
                    OmegaNat::Fin(k) => Displacement::Finite(*k as i64 - g as i64),
                    OmegaNat::Omega => Displacement::OmegaOutput,
                })
                .collect(),
        ))
    }
}

impl EffectiveCompletion for NetModel {
    type Ideal = IdealVec;
    type Label = String;

    fn alphabet(&self) -> Vec<String> {
        self.labels().map(String::from).collect()
    }

    fn successor(&self, ideal: &IdealVec, label: &String) -> Result<Option<IdealVec>> {
        self.post_ideal(ideal, label)
    }
}

impl PositiveSystem for NetModel {
    fn effect(&self, label: &String) -> Result<EffectSummary> {
        self.effect_summary(label)
    }
}

fn write_vec<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Renders the line-based net format accepted by [`load_net`].
impl fmt::Display for NetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dimension)?;
        for t in &self.transitions {
            write!(f, "{} | ", t.label)?;
            write_vec(f, &t.guard)?;
            f.write_str(" | ")?;
            write_vec(f, &t.output)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
