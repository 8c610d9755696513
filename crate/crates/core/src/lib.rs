//! Distance methods for phylogeny reconstruction on reversible substitution
//! models, including depth-limited distance averaging that stays accurate
//! with short sequences.

pub mod error;
pub mod metric;
pub mod newick;
pub mod restrict;
pub mod splits;
pub mod tree;

pub use error::{Error, Result};
