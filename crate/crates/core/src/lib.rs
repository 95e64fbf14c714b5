//! Locally optimal rule induction: one best rule per training example,
//! counted with PPC-tree N-lists, filtered, and applied through a prefix
//! tree over rule bodies.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod heuristic;
pub mod learner;
pub mod nlist;
pub mod persistence;
pub mod ppc_tree;
pub mod rtree;

pub use error::{Error, Result};
pub use heuristic::{compare_rules, m_estimate, Rule};
pub use learner::{train, LearnerConfig, Model, RuleSet, Variant};
