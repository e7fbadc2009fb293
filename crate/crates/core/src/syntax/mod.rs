//! Programs, formulas, the surface parser and the grounder.

mod ast;
mod ground;
mod parser;

pub use ast::*;
pub use ground::{ground, ground_rule};
pub use parser::{parse_formula, parse_mv_formula, parse_program, parse_program_with, parse_thesis, ParseOptions};
