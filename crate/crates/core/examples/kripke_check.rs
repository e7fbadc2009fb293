//! Evaluates modal formulas in the unary Kripke model: every formula holds
//! at all worlds or at none.

use mvred::kripke::Semantics;
use mvred::modal_unary::build_kripke_unary;
use mvred::semantics::compute_model;
use mvred::syntax::{parse_formula, parse_program};

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("belnap_sample.mv").unwrap())?;
    let m = compute_model(&p)?;
    let k = build_kripke_unary(&p, &m);
    for text in ["[t]p(a)", "[f]p(a)", "[top]u(a) and not [t]s(a)", "[bot]q(a) -> [t]p(a)"] {
        let phi = parse_formula(text, &p.lattice)?;
        let e = k.extent(&phi)?;
        println!("{text:<24} holds at {}/{} worlds", e.count(), e.universe());
    }
    Ok(())
}
