//! Declares a three-element chain with an extra connective and evaluates a
//! program over it.

use mvred::lattice::{check_lattice, parse_lattice_decl};
use mvred::semantics::compute_model;
use mvred::syntax::{parse_program_with, ParseOptions};

const DECL: &str = "lattice three {
  elements: lo mid hi;
  leq: lo <= mid; mid <= hi;
  neg: lo -> hi; mid -> mid; hi -> lo;
  op half/1: lo -> lo; mid -> lo; hi -> mid;
}";

fn main() -> mvred::Result<()> {
    let l = parse_lattice_decl(DECL)?;
    println!("{l}");
    println!("axiom violations: {}", check_lattice(&l).len());
    let src = "lattice three.\na <- @mid.\nb <- @hi.\nc :- a, ~b.\nd :- ~a.\n";
    let p = parse_program_with(src, ParseOptions { lattice: Some(("three".into(), l.into_shared())), ..Default::default() })?;
    println!("{}", compute_model(&p)?);
    Ok(())
}
