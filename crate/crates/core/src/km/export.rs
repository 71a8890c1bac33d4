use std::fmt::{Display, Write as _};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{IkmTree, TreeStats};
use crate::kernel::Ideal;
use crate::lang::dot_escape;

/// Structured form of one tree node, ideals and labels rendered as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeExport {
    pub id: usize,
    pub ideal: String,
    pub parent: Option<usize>,
    pub label: Option<String>,
    pub numaccel: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subsumed_by: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub accelerated_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeExport {
    pub stats: TreeStats,
    /// Nodes in creation order.
    pub nodes: Vec<NodeExport>,
}

impl<I: Ideal, L: Clone + Ord + Hash + Display> IkmTree<I, L> {
    pub fn export(&self) -> TreeExport {
        TreeExport {
            stats: self.stats,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeExport {
                    id: n.id,
                    ideal: n.ideal.to_string(),
                    parent: n.parent,
                    label: n.in_label.as_ref().map(|l| l.to_string()),
                    numaccel: n.numaccel,
                    subsumed_by: n.subsumed_by,
                    accelerated_from: n.accelerated_from,
                })
                .collect(),
        }
    }

    /// Graphviz rendering: nodes show `ideal / numaccel`; subsumption edges
    /// are dotted and acceleration edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ikm {\n  node [shape=box];\n");
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "  n{} [label=\"{} / {}\"];",
                n.id,
                dot_escape(&n.ideal.to_string()),
                n.numaccel
            );
        }
        for n in &self.nodes {
            if let (Some(p), Some(l)) = (n.parent, &n.in_label) {
                let _ = writeln!(
                    out,
                    "  n{p} -> n{} [label=\"{}\"];",
                    n.id,
                    dot_escape(&l.to_string())
                );
            }
            if let Some(a) = n.subsumed_by {
                let _ = writeln!(out, "  n{} -> n{a} [label=\"ε\", style=dotted];", n.id);
            }
            if let Some(a) = n.accelerated_from {
                let _ = writeln!(out, "  n{} -> n{a} [label=\"ε\", style=dashed];", n.id);
            }
        }
        out.push_str("}\n");
        out
    }
}
