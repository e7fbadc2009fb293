//! Many-valued consequence decided by enumerating valuations, and the same
//! question asked of the two-valued Suszko model.

use std::sync::Arc;

use mvred::abstract_reduction::{consequence, verify_suszko, SuszkoModel, ValuationSpace, DEFAULT_VALUATION_BUDGET};
use mvred::lattice::{builtin_lattice, LatticeSelector};
use mvred::suite::thesis_suite;
use mvred::syntax::{parse_thesis, Atom};

fn main() -> mvred::Result<()> {
    let l = Arc::new(builtin_lattice(&LatticeSelector::Belnap4)?);
    let atoms: Vec<Atom> = ["p", "q"].iter().map(|p| Atom::ground(p, Vec::<String>::new())).collect();
    let space = ValuationSpace::new(l.clone(), atoms.clone());
    let gamma = vec![parse_thesis("p <- @t", &l)?, parse_thesis("q :- p", &l)?];
    for goal in ["q <- @t", "q <- @top", "~q <- @t", "p :- q"] {
        let t = parse_thesis(goal, &l)?;
        println!("{{p <- @t, q :- p}} |= {goal}: {}", consequence(&gamma, &t, &space, None, DEFAULT_VALUATION_BUDGET)?);
    }
    let model = SuszkoModel::new(gamma, space, None, DEFAULT_VALUATION_BUDGET)?;
    println!("{} of {} valuations are models", model.models().len(), model.space().size());
    let suite = thesis_suite(&atoms, &l, 1, 1);
    let v = verify_suszko(&model, &suite, DEFAULT_VALUATION_BUDGET)?;
    println!("lemma: {} over {} theses", if v.pass { "pass" } else { "FAIL" }, v.formulas_checked);
    Ok(())
}
