//! Rewrites a many-valued program into a positive program over m-atoms
//! `[alpha]p(c)` and checks that both have the same model.

use mvred::modal_unary::{transform_unary, verify_invariance};
use mvred::semantics::compute_model;
use mvred::syntax::parse_program;

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("belnap_sample.mv").unwrap())?;
    let unary = transform_unary(&p)?;
    println!("{unary}");
    let m = compute_model(&p)?;
    for v in verify_invariance(&p, &m)? {
        println!("{}: {} ({} checked)", v.check, if v.pass { "pass" } else { "FAIL" }, v.checked);
    }
    Ok(())
}
