//! Computes the least model of a stratified program, showing every round.

use mvred::semantics::compute_model_traced;
use mvred::syntax::parse_program;

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("belnap_sample.mv").unwrap())?;
    let mut round = 0;
    let m = compute_model_traced(&p, |i| {
        round += 1;
        println!("round {round}: {}", i.to_string().replace('\n', ", "));
    })?;
    println!("least model:\n{m}");
    Ok(())
}
