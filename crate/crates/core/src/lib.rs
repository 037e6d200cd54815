//! Relational learning with graph kernels.
//!
//! The pipeline: a domain declaration ([`schema`]) plus relational facts
//! ([`dataset`]) are closed under intensional rules ([`rules`]), turned into
//! bipartite labeled graphs ([`graph`]), mapped to sparse NSPDK feature
//! vectors ([`kernel`]) and fed to linear learners ([`learn`]) that are
//! scored by [`eval`].

pub mod atom;
pub mod dataset;
pub mod eval;
pub mod graph;
pub mod kernel;
pub mod learn;
pub mod lexer;
pub mod rules;
pub mod schema;
pub mod synth;

pub use atom::{Atom, AtomSet, Constant};
