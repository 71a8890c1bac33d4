//! Integer flow feasibility for positive paths.
//!
//! The Parikh image of the paths of an automaton from its initial state to
//! some accepting state is described by integer edge counts with unit flow
//! out of the source, unit flow into one sink, conservation elsewhere, and a
//! support that is connected to the source. Positivity adds one linear
//! constraint per coordinate. We search for such counts with a depth-first
//! branch-and-bound over LP relaxations, adding connectivity cuts lazily, and
//! turn a solution into a concrete path with Hierholzer's algorithm.

use std::collections::{BTreeMap, VecDeque};

use minilp::{ComparisonOp, Error as LpError, OptimizationDirection, Problem, Solution, Variable};

use crate::error::{Error, Result};
use crate::net::Displacement;

const EPS: f64 = 1e-6;
const NODE_LIMIT: usize = 200_000;

#[derive(Clone, Debug)]
pub(crate) struct FlowEdge {
    pub src: usize,
    pub dst: usize,
    /// Index into the caller's symbol table; `None` for ε.
    pub symbol: Option<usize>,
    pub effect: Vec<Displacement>,
}

#[derive(Clone, Debug)]
pub(crate) struct FlowProblem {
    pub num_states: usize,
    pub source: usize,
    pub sinks: Vec<bool>,
    pub edges: Vec<FlowEdge>,
    pub dim: usize,
}

/// A connectivity cut `x_f ≤ k · Σ_{e ∈ entering} x_e`.
#[derive(Clone, Debug)]
struct Cut {
    edge: usize,
    entering: Vec<usize>,
}

struct Model {
    problem: Problem,
    flows: Vec<Variable>,
    sinks: Vec<(usize, Variable)>,
}

/// Per-edge upper bounds and an optional bound on the number of lettered
/// edges taken.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bounds {
    pub lettered_cap: u64,
    pub eps_cap: u64,
    pub max_letters: Option<u64>,
}

impl Bounds {
    fn cap(&self, edge: &FlowEdge) -> u64 {
        if edge.symbol.is_some() {
            self.lettered_cap
        } else {
            self.eps_cap
        }
    }

    fn max_cap(&self) -> u64 {
        self.lettered_cap.max(self.eps_cap)
    }
}

impl FlowProblem {
    fn lettered(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.symbol.is_some())
            .map(|(i, _)| i)
    }

    /// Weight standing in for an ω production: larger than any negative
    /// total reachable under the given bounds.
    fn omega_weight(&self, bounds: &Bounds) -> f64 {
        let worst: u64 = self
            .edges
            .iter()
            .map(|e| {
                let most = e
                    .effect
                    .iter()
                    .map(|d| match d {
                        Displacement::Finite(v) => v.unsigned_abs(),
                        Displacement::OmegaOutput => 0,
                    })
                    .max()
                    .unwrap_or(0);
                most.saturating_mul(bounds.cap(e))
            })
            .fold(0u64, u64::saturating_add);
        worst as f64 + 1.0
    }

    /// `None` bounds give the uncapped relaxation, in which coordinates fed
    /// by some ω output are left unconstrained.
    fn model(&self, bounds: Option<&Bounds>, cuts: &[Cut]) -> Model {
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let flows: Vec<Variable> = self
            .edges
            .iter()
            .map(|e| {
                let max = bounds.map_or(f64::INFINITY, |b| b.cap(e) as f64);
                problem.add_var(1.0, (0.0, max))
            })
            .collect();
        let sinks: Vec<(usize, Variable)> = (0..self.num_states)
            .filter(|&s| self.sinks[s])
            .map(|s| (s, problem.add_var(0.0, (0.0, 1.0))))
            .collect();

        // conservation: out − in + sink = [s = source]
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.num_states];
        for (i, e) in self.edges.iter().enumerate() {
            *rows[e.src].entry(i).or_default() += 1.0;
            *rows[e.dst].entry(i).or_default() -= 1.0;
        }
        let sink_of: BTreeMap<usize, Variable> = sinks.iter().copied().collect();
        for (s, row) in rows.iter().enumerate() {
            let mut expr: Vec<(Variable, f64)> = row
                .iter()
                .filter(|(_, c)| **c != 0.0)
                .map(|(&i, &c)| (flows[i], c))
                .collect();
            if let Some(&y) = sink_of.get(&s) {
                expr.push((y, 1.0));
            }
            let rhs = if s == self.source { 1.0 } else { 0.0 };
            if expr.is_empty() {
                if rhs != 0.0 {
                    // isolated source with no sink: infeasible row
                    let v = problem.add_var(0.0, (0.0, 0.0));
                    problem.add_constraint([(v, 1.0)], ComparisonOp::Eq, rhs);
                }
                continue;
            }
            problem.add_constraint(expr, ComparisonOp::Eq, rhs);
        }
        let all_sinks: Vec<(Variable, f64)> = sinks.iter().map(|&(_, y)| (y, 1.0)).collect();
        if all_sinks.is_empty() {
            let v = problem.add_var(0.0, (0.0, 0.0));
            problem.add_constraint([(v, 1.0)], ComparisonOp::Eq, 1.0);
        } else {
            problem.add_constraint(all_sinks, ComparisonOp::Eq, 1.0);
        }

        let letters: Vec<(Variable, f64)> = self.lettered().map(|i| (flows[i], 1.0)).collect();
        problem.add_constraint(letters.clone(), ComparisonOp::Ge, 1.0);
        if let Some(max) = bounds.and_then(|b| b.max_letters) {
            problem.add_constraint(letters, ComparisonOp::Le, max as f64);
        }

        let omega = bounds.map(|b| self.omega_weight(b));
        for coord in 0..self.dim {
            let has_omega = self
                .edges
                .iter()
                .any(|e| matches!(e.effect[coord], Displacement::OmegaOutput));
            if has_omega && omega.is_none() {
                continue;
            }
            let expr: Vec<(Variable, f64)> = self
                .edges
                .iter()
                .enumerate()
                .filter_map(|(i, e)| {
                    let c = match e.effect[coord] {
                        Displacement::Finite(v) => v as f64,
                        Displacement::OmegaOutput => omega.unwrap_or(0.0),
                    };
                    (c != 0.0).then_some((flows[i], c))
                })
                .collect();
            if !expr.is_empty() {
                problem.add_constraint(expr, ComparisonOp::Ge, 0.0);
            }
        }

        if let Some(b) = bounds {
            let k = b.max_cap() as f64;
            for cut in cuts {
                let mut expr = vec![(flows[cut.edge], 1.0)];
                expr.extend(cut.entering.iter().map(|&e| (flows[e], -k)));
                problem.add_constraint(expr, ComparisonOp::Le, 0.0);
            }
        }
        Model {
            problem,
            flows,
            sinks,
        }
    }

    /// Whether the LP relaxation without caps or connectivity is feasible.
    /// Infeasibility proves that no positive path exists.
    pub fn relaxation_feasible(&self) -> bool {
        self.lettered().next().is_some() && self.model(None, &[]).problem.solve().is_ok()
    }

    /// Integer edge counts of a connected positive path within `bounds`.
    pub fn solve(&self, bounds: &Bounds) -> Result<Option<Vec<u64>>> {
        if self.lettered().next().is_none() {
            return Ok(None);
        }
        let mut cuts = Vec::new();
        loop {
            let model = self.model(Some(bounds), &cuts);
            let Some(counts) = self.branch_and_bound(&model, bounds)? else {
                return Ok(None);
            };
            let new_cuts = self.connectivity_cuts(&counts);
            if new_cuts.is_empty() {
                return Ok(Some(counts));
            }
            cuts.extend(new_cuts);
        }
    }

    fn branch_and_bound(&self, model: &Model, bounds: &Bounds) -> Result<Option<Vec<u64>>> {
        let root = match model.problem.solve() {
            Ok(sol) => sol,
            Err(LpError::Infeasible) | Err(LpError::Unbounded) => return Ok(None),
        };
        let vars: Vec<Variable> = model
            .flows
            .iter()
            .copied()
            .chain(model.sinks.iter().map(|&(_, y)| y))
            .collect();
        let mut stack: Vec<Solution> = vec![root];
        let mut explored = 0;
        while let Some(sol) = stack.pop() {
            explored += 1;
            if explored > NODE_LIMIT {
                return Err(Error::SolverLimit(NODE_LIMIT));
            }
            let branch = vars
                .iter()
                .map(|&v| (v, *sol.var_value(v)))
                .filter(|(_, x)| (x - x.round()).abs() > EPS)
                .max_by(|a, b| {
                    let fa = (a.1 - a.1.floor() - 0.5).abs();
                    let fb = (b.1 - b.1.floor() - 0.5).abs();
                    fb.partial_cmp(&fa).unwrap_or(std::cmp::Ordering::Equal)
                });
            match branch {
                None => {
                    let counts: Vec<u64> = model
                        .flows
                        .iter()
                        .map(|&v| sol.var_value(v).round().max(0.0) as u64)
                        .collect();
                    if self.check_counts(&counts, bounds) {
                        return Ok(Some(counts));
                    }
                }
                Some((var, value)) => {
                    // explore the rounded-down side first
                    let up =
                        sol.clone()
                            .add_constraint([(var, 1.0)], ComparisonOp::Ge, value.ceil());
                    let down = sol.add_constraint([(var, 1.0)], ComparisonOp::Le, value.floor());
                    stack.extend(up.ok());
                    stack.extend(down.ok());
                }
            }
        }
        Ok(None)
    }

    /// Exact re-check of a rounded LP solution, connectivity aside.
    fn check_counts(&self, counts: &[u64], bounds: &Bounds) -> bool {
        let mut balance = vec![0i128; self.num_states];
        for (e, &c) in self.edges.iter().zip(counts) {
            if c > bounds.cap(e) {
                return false;
            }
            balance[e.src] += c as i128;
            balance[e.dst] -= c as i128;
        }
        balance[self.source] -= 1;
        let sinks: Vec<usize> = (0..self.num_states).filter(|&s| balance[s] != 0).collect();
        let balanced = match sinks.as_slice() {
            [s] => balance[*s] == -1 && self.sinks[*s],
            _ => false,
        };
        let letters: u64 = self.lettered().map(|i| counts[i]).sum();
        balanced
            && letters >= 1
            && bounds.max_letters.is_none_or(|m| letters <= m)
            && positive_counts(&self.edges, counts, self.dim)
    }

    fn connectivity_cuts(&self, counts: &[u64]) -> Vec<Cut> {
        let mut reached = vec![false; self.num_states];
        reached[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(s) = queue.pop_front() {
            for (e, &c) in self.edges.iter().zip(counts) {
                if c > 0 && e.src == s && !reached[e.dst] {
                    reached[e.dst] = true;
                    queue.push_back(e.dst);
                }
            }
        }
        let entering: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| reached[e.src] && !reached[e.dst])
            .map(|(i, _)| i)
            .collect();
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, e)| counts[*i] > 0 && !reached[e.src])
            .map(|(edge, _)| Cut {
                edge,
                entering: entering.clone(),
            })
            .collect()
    }

    /// Orders the edge multiset of a connected, balanced solution into a path
    /// from the source.
    pub fn euler_path(&self, counts: &[u64]) -> Vec<usize> {
        let mut remaining = counts.to_vec();
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); self.num_states];
        for (i, e) in self.edges.iter().enumerate() {
            if counts[i] > 0 {
                out_edges[e.src].push(i);
            }
        }
        let mut cursor = vec![0usize; self.num_states];
        let mut stack: Vec<(usize, Option<usize>)> = vec![(self.source, None)];
        let mut path = Vec::new();
        while let Some(&(state, via)) = stack.last() {
            let outs = &out_edges[state];
            while cursor[state] < outs.len() && remaining[outs[cursor[state]]] == 0 {
                cursor[state] += 1;
            }
            if cursor[state] < outs.len() {
                let e = outs[cursor[state]];
                remaining[e] -= 1;
                stack.push((self.edges[e].dst, Some(e)));
            } else {
                stack.pop();
                path.extend(via);
            }
        }
        path.reverse();
        debug_assert!(
            remaining.iter().all(|&r| r == 0),
            "solution was not connected"
        );
        path
    }
}

/// Positivity of an edge multiset: each coordinate is fed by an ω output or
/// has a nonnegative finite total.
pub(crate) fn positive_counts(edges: &[FlowEdge], counts: &[u64], dim: usize) -> bool {
    (0..dim).all(|coord| {
        let mut total: i128 = 0;
        for (e, &c) in edges.iter().zip(counts) {
            if c == 0 {
                continue;
            }
            match e.effect[coord] {
                Displacement::OmegaOutput => return true,
                Displacement::Finite(v) => total += v as i128 * c as i128,
            }
        }
        total >= 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(src: usize, dst: usize, symbol: Option<usize>, effect: &[i64]) -> FlowEdge {
        FlowEdge {
            src,
            dst,
            symbol,
            effect: effect.iter().map(|&v| Displacement::Finite(v)).collect(),
        }
    }

    const BOUNDS: Bounds = Bounds {
        lettered_cap: 16,
        eps_cap: 16,
        max_letters: None,
    };

    #[test]
    fn needs_a_loop_to_pay_for_a_prefix() {
        // 0 -(-3)-> 1, loop at 1 with +1, all states accepting
        let p = FlowProblem {
            num_states: 2,
            source: 0,
            sinks: vec![true, true],
            edges: vec![edge(0, 1, Some(0), &[-3]), edge(1, 1, Some(1), &[1])],
            dim: 1,
        };
        let counts = p.solve(&BOUNDS).unwrap().unwrap();
        assert_eq!(counts, vec![1, 3]);
        assert_eq!(p.euler_path(&counts), vec![0, 1, 1, 1]);
    }

    #[test]
    fn disconnected_cycles_are_cut() {
        // the +5 loop at 2 is unreachable from 0; only 0 -(-1)-> 1 is usable
        let p = FlowProblem {
            num_states: 3,
            source: 0,
            sinks: vec![true, true, true],
            edges: vec![edge(0, 1, Some(0), &[-1]), edge(2, 2, Some(1), &[5])],
            dim: 1,
        };
        assert!(p.relaxation_feasible());
        assert_eq!(p.solve(&BOUNDS).unwrap(), None);
    }

    #[test]
    fn omega_feeds_a_coordinate() {
        let p = FlowProblem {
            num_states: 1,
            source: 0,
            sinks: vec![true],
            edges: vec![FlowEdge {
                src: 0,
                dst: 0,
                symbol: Some(0),
                effect: vec![Displacement::Finite(0), Displacement::OmegaOutput],
            }],
            dim: 2,
        };
        assert_eq!(p.solve(&BOUNDS).unwrap(), Some(vec![1]));
    }

    #[test]
    fn letter_budget() {
        let p = FlowProblem {
            num_states: 2,
            source: 0,
            sinks: vec![true, true],
            edges: vec![edge(0, 1, Some(0), &[-3]), edge(1, 1, Some(1), &[1])],
            dim: 1,
        };
        let tight = Bounds {
            max_letters: Some(3),
            ..BOUNDS
        };
        assert_eq!(p.solve(&tight).unwrap(), None);
    }
}
