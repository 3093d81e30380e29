//! Double shuffle machinery for alternating Euler sums.

pub mod error;
pub mod fixtures;
pub mod identities;
pub mod lincomb;
pub mod linalg;
pub mod numeval;
pub mod products;
pub mod regularize;
pub mod relations;
pub mod words;

pub use error::{Error, Result};
pub use lincomb::{LinComb, Rational, TPoly};
pub use words::{CompositeLetter, CompositeWord, Kind, Letter, SignedEntry, SignedIndex, Word};
