pub mod abstract_reduction;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod kripke;
pub mod lattice;
pub mod modal_flatten;
pub mod modal_unary;
pub mod semantics;
pub mod suite;
pub mod syntax;
pub mod verdict;

pub use error::{Error, Result};
