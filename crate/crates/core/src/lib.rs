//! Exact reconstruction of hidden directed graphs from path queries.

pub mod graph;
pub mod oracle;
pub mod generators;
pub mod error;
pub mod tree_learn;
pub mod dag_learn;
pub mod multitree_learn;
pub mod bench;
