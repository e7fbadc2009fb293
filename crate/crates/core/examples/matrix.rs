//! The matrix reduction: a formula is designated iff `dia_d` of it holds.

use mvred::abstract_reduction::{verify_matrix, Matrix, MatrixModel};
use mvred::semantics::compute_model;
use mvred::suite::enumerate_formulas;
use mvred::syntax::{parse_program, Atom};

fn main() -> mvred::Result<()> {
    let p = parse_program(mvred::corpus::source("belnap_sample.mv").unwrap())?;
    let m = compute_model(&p)?;
    let atoms: Vec<Atom> = m.atoms().take(3).cloned().collect();
    let suite = enumerate_formulas(&atoms, &p.lattice, 2, true);
    for d in ["top", "t,top", "bot,top"] {
        let matrix = Matrix::parse(p.lattice.clone(), d)?;
        let model = MatrixModel::new(matrix, &m, false);
        let v = verify_matrix(&model, &m, &suite)?;
        println!("D = {{{d}}}: {} over {} formulas", if v.pass { "pass" } else { "FAIL" }, v.formulas_checked);
    }
    Ok(())
}
