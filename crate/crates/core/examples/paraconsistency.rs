//! An inconsistent fact does not make everything true: `p(a)` is both true
//! and false, yet `unrelated(b)` keeps its own value.

use mvred::modal_unary::transform_unary;
use mvred::semantics::compute_model;
use mvred::syntax::{parse_program, Pretty};

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("paraconsistency.mv").unwrap())?;
    let m = compute_model(&p)?;
    println!("{m}");
    let unary = transform_unary(&p)?;
    let true_atoms = unary.least_model();
    println!("{} m-atoms are derived by the two-valued program:", true_atoms.len());
    for a in &true_atoms {
        println!("  {}", a.to_formula().show(&p.lattice));
    }
    Ok(())
}
