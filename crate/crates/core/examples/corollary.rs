//! Relates the flat model to the unary one: `p_F(c, alpha)` holds exactly
//! where `[alpha]p(c)` does.

use mvred::modal_flatten::verify_corollary;
use mvred::semantics::compute_model;
use mvred::syntax::parse_program;

fn main() -> mvred::Result<()> {
    for name in ["belnap_reach", "fuzzy_layers", "interval_sensor"] {
        let p = parse_program(mvred::corpus::source(&format!("{name}.mv")).unwrap())?;
        let m = compute_model(&p)?;
        let v = verify_corollary(&p, &m)?;
        println!("{name}: {} over {} pairs", if v.pass { "pass" } else { "FAIL" }, v.checked);
    }
    Ok(())
}
