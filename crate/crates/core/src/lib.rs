//! Reversible two-way finite-state transducers.
//!
//! The crate provides a data model for two-way transducers over endmarked
//! words, property checks, a brute-force run enumerator used as ground
//! truth, and the reversibilizing constructions: the tree outline of
//! co-deterministic weakly branching one-way machines, polynomial
//! composition, one-way pipelines, uniformization and the conversion of
//! copyless streaming string transducers.

pub mod cli;
pub mod compose;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod letter;
pub mod machine;
pub mod oneway;
pub mod oracle;
pub mod random;
pub mod sst;
pub mod tree_outline;
pub mod uniformize;

pub use error::{Error, Result};
pub use letter::{Letter, Word};
pub use machine::{Polarity, Transducer, TransducerBuilder};
