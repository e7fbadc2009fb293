//! Parses a program with variables and prints its ground instances.

use mvred::syntax::{ground, parse_program};

const SOURCE: &str = "lattice fuzzy:5.
edge(a, b) <- @0.75.
edge(b, c) <- @0.5.
reach(X, Y) :- edge(X, Y).
reach(X, Y) :- reach(X, Z), edge(Z, Y).
";

fn main() -> mvred::Result<()> {
    let p = parse_program(SOURCE)?;
    println!("{} rules over constants {:?}", p.rules.len(), p.constants);
    let g = ground(&p)?;
    println!("{} ground rules:\n{g}", g.rules.len());
    Ok(())
}
