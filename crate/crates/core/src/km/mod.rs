//! The Ideal Karp-Miller tree, its clover, and the stuttering and
//! Karp-Miller automata read off the finished tree.

mod export;

use std::collections::VecDeque;
use std::fmt::Display;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use export::{NodeExport, TreeExport};

use crate::error::{Error, Result};
use crate::ideal::{decompose, IdealDecomposition, IdealVec, Marking};
use crate::kernel::{accelerate, EffectiveCompletion, Ideal};
use crate::lang::{EpsKind, EpsNfa};

/// Default node budget; overridable with `WSTS_VERIFY_BUDGET` in the CLI.
pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Order in which unexplored nodes are popped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Worklist {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IkmOptions {
    pub worklist: Worklist,
    pub node_budget: usize,
}

impl Default for IkmOptions {
    fn default() -> Self {
        IkmOptions {
            worklist: Worklist::Fifo,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IkmNode<I, L> {
    /// Creation index; the root is 0.
    pub id: usize,
    pub ideal: I,
    pub parent: Option<usize>,
    /// Label of the arc from the parent; `None` at the root.
    pub in_label: Option<L>,
    /// Accelerations on the root path, this node included.
    pub numaccel: usize,
    pub children: Vec<usize>,
    /// Ancestor carrying the same ideal; such nodes are leaves.
    pub subsumed_by: Option<usize>,
    /// Ancestor whose strictly smaller ideal triggered this node's acceleration.
    pub accelerated_from: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub accelerations: usize,
    pub max_level: usize,
}

#[derive(Clone, Debug)]
pub struct IkmTree<I, L> {
    nodes: Vec<IkmNode<I, L>>,
    alphabet: Vec<L>,
    stats: TreeStats,
}

/// Runs the Ideal Karp-Miller procedure from `root`.
///
/// Each popped node scans its ancestors from the parent upwards. An equal
/// ancestor stops exploration of the node. Otherwise the first strictly
/// smaller ancestor with the same acceleration count triggers `w^∞` along
/// the path labels, and the scan ends. Nodes that are not subsumed get one
/// child per enabled label.
pub fn build_ikm_tree<S: EffectiveCompletion>(
    sys: &S,
    root: S::Ideal,
    options: &IkmOptions,
) -> Result<IkmTree<S::Ideal, S::Label>> {
    let alphabet = sys.alphabet();
    let mut nodes = vec![IkmNode {
        id: 0,
        ideal: root,
        parent: None,
        in_label: None,
        numaccel: 0,
        children: Vec::new(),
        subsumed_by: None,
        accelerated_from: None,
    }];
    let mut accelerations = 0;
    let mut work = VecDeque::from([0usize]);

    loop {
        let next = match options.worklist {
            Worklist::Fifo => work.pop_front(),
            Worklist::Lifo => work.pop_back(),
        };
        let Some(c) = next else { break };

        let mut expand = true;
        // labels from the current ancestor down to c, innermost first
        let mut reversed_word: Vec<S::Label> = nodes[c].in_label.iter().cloned().collect();
        let mut ancestor = nodes[c].parent;
        while let Some(a) = ancestor {
            if nodes[a].ideal == nodes[c].ideal {
                nodes[c].subsumed_by = Some(a);
                expand = false;
                break;
            }
            if nodes[a].ideal.is_strict_subset(&nodes[c].ideal)
                && nodes[a].numaccel == nodes[c].numaccel
            {
                let word: Vec<S::Label> = reversed_word.iter().rev().cloned().collect();
                let widened = accelerate(sys, &nodes[c].ideal, &word)?;
                let node = &mut nodes[c];
                node.ideal = widened;
                node.numaccel += 1;
                node.accelerated_from = Some(a);
                accelerations += 1;
                break;
            }
            reversed_word.extend(nodes[a].in_label.iter().cloned());
            ancestor = nodes[a].parent;
        }

        if expand {
            for label in &alphabet {
                let Some(ideal) = sys.successor(&nodes[c].ideal, label)? else {
                    continue;
                };
                if nodes.len() >= options.node_budget {
                    return Err(Error::BudgetExhausted(options.node_budget));
                }
                let id = nodes.len();
                let numaccel = nodes[c].numaccel;
                nodes.push(IkmNode {
                    id,
                    ideal,
                    parent: Some(c),
                    in_label: Some(label.clone()),
                    numaccel,
                    children: Vec::new(),
                    subsumed_by: None,
                    accelerated_from: None,
                });
                nodes[c].children.push(id);
                work.push_back(id);
            }
        }
    }

    let stats = TreeStats {
        nodes: nodes.len(),
        accelerations,
        max_level: nodes.iter().map(|n| n.ideal.level()).max().unwrap_or(0),
    };
    Ok(IkmTree {
        nodes,
        alphabet,
        stats,
    })
}

impl<I: Ideal, L: Clone + Ord + Hash + Display> IkmTree<I, L> {
    pub fn root(&self) -> &IkmNode<I, L> {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[IkmNode<I, L>] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &IkmNode<I, L> {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alphabet(&self) -> &[L] {
        &self.alphabet
    }

    pub fn stats(&self) -> TreeStats {
        self.stats
    }

    /// Labels on the tree path from the root to `id`.
    pub fn path_word(&self, id: usize) -> Vec<L> {
        let mut word = Vec::new();
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            word.extend(self.nodes[cur].in_label.iter().cloned());
            cur = p;
        }
        word.reverse();
        word
    }

    /// The ⊆-maximal node ideals, in creation order.
    pub fn maximal_ideals(&self) -> Vec<I> {
        let mut out: Vec<I> = Vec::new();
        for node in &self.nodes {
            if out.iter().any(|m| node.ideal.is_subset(m)) {
                continue;
            }
            out.retain(|m| !m.is_subset(&node.ideal));
            out.push(node.ideal.clone());
        }
        out
    }

    /// All nodes as automaton states (`n<id>`), all accepting, tree arcs as
    /// lettered transitions, plus ε from each subsumed leaf to its equal
    /// ancestor.
    pub fn stuttering_automaton(&self) -> EpsNfa<L> {
        let mut nfa = EpsNfa::new(self.alphabet.iter().cloned());
        for node in &self.nodes {
            nfa.add_state(format!("n{}", node.id), true);
        }
        for node in &self.nodes {
            if let (Some(p), Some(l)) = (node.parent, &node.in_label) {
                nfa.add_transition(p, l.clone(), node.id)
                    .expect("tree labels belong to the alphabet");
            }
            if let Some(a) = node.subsumed_by {
                nfa.add_eps(node.id, a, EpsKind::Subsumption)
                    .expect("ancestor is a node");
            }
        }
        nfa
    }

    /// The stuttering automaton plus ε from each accelerated node back to
    /// the ancestor that triggered the acceleration.
    pub fn km_automaton(&self) -> EpsNfa<L> {
        let mut nfa = self.stuttering_automaton();
        for node in &self.nodes {
            if let Some(a) = node.accelerated_from {
                nfa.add_eps(node.id, a, EpsKind::Acceleration)
                    .expect("ancestor is a node");
            }
        }
        nfa
    }
}

impl<L: Clone + Ord + Hash + Display> IkmTree<IdealVec, L> {
    /// The ideal decomposition of the cover `↓Post*(I0)`.
    pub fn clover(&self) -> IdealDecomposition {
        decompose(self.nodes.iter().map(|n| n.ideal.clone())).expect("tree has a root")
    }

    /// Whether some node ideal contains `y`.
    pub fn coverable(&self, y: &Marking) -> Result<bool> {
        for node in &self.nodes {
            if node.ideal.contains(y)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Free-function form of [`IkmTree::clover`].
pub fn clover<L: Clone + Ord + Hash + Display>(tree: &IkmTree<IdealVec, L>) -> IdealDecomposition {
    tree.clover()
}

/// Free-function form of [`IkmTree::coverable`].
pub fn coverable<L: Clone + Ord + Hash + Display>(
    tree: &IkmTree<IdealVec, L>,
    y: &Marking,
) -> Result<bool> {
    tree.coverable(y)
}
