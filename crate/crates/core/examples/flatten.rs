//! Flattens a program into the binary-modal form and checks the diamond
//! readings of its clause bodies.

use mvred::modal_flatten::{flatten_program, reflect, verify_flat};
use mvred::semantics::compute_model;
use mvred::syntax::parse_program;

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("belnap_sample.mv").unwrap())?;
    let m = compute_model(&p)?;
    println!("{}", flatten_program(&p, &reflect(&p, &m))?);
    for full in [false, true] {
        println!("full implication: {full}");
        for v in verify_flat(&p, &m, full, 200, 1)? {
            println!("  {}: {} ({} checked)", v.check, if v.pass { "pass" } else { "FAIL" }, v.checked);
        }
    }
    Ok(())
}
