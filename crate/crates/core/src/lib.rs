//! Ideal Karp-Miller trees for very well-structured transition systems.
//!
//! The crate works over vector addition systems, Petri nets and ω-Petri
//! nets. From a net and an initial marking it computes the finite ideal
//! decomposition of the cover (the *clover*), decides coverability and
//! repeated coverability, compares downward closures of trace languages,
//! and model checks action-based LTL.
//!
//! ```
//! use wsts_core::{build_ikm_tree, IdealVec, IkmOptions, NetModel};
//!
//! let net: NetModel = "dim 1\nt | 0 | 1\n".parse().unwrap();
//! let root: IdealVec = "(0)".parse().unwrap();
//! let tree = build_ikm_tree(&net, root, &IkmOptions::default()).unwrap();
//! assert_eq!(tree.clover().to_string(), "(w)");
//! ```

pub mod devtool;
pub mod error;
pub mod ideal;
pub mod kernel;
pub mod km;
pub mod lang;
pub mod liveness;
pub mod ltl;
pub mod net;

pub use error::{Error, Result};
pub use ideal::{decompose, omega_leq, vec_leq, IdealDecomposition, IdealVec, Marking, OmegaNat};
pub use kernel::{accelerate, post_word, EffectiveCompletion, Ideal, PositiveSystem, Word};
pub use km::{
    build_ikm_tree, clover, coverable, IkmNode, IkmOptions, IkmTree, TreeStats, Worklist,
    DEFAULT_NODE_BUDGET,
};
pub use lang::{
    included, inclusion_counterexample, parse_automaton, traces_dc_included, EpsKind, EpsNfa,
};
pub use liveness::{
    exists_positive_sequence, is_positive_word, repeatedly_coverable, EffectAutomaton,
    PositivityWitness, RepeatWitness,
};
pub use ltl::{
    ltl_to_buchi, model_check_ltl, BuchiAutomaton, LtlFormula, LtlVerdict, ProductSystem,
};
pub use net::{backward_coverable, load_net, Displacement, EffectSummary, NetModel, Transition};
