//! Prints Belnap's four-valued lattice and a few of its operations.

use mvred::lattice::{builtin_lattice, check_lattice, LatticeSelector};

fn main() -> mvred::Result<()> {
    let l = builtin_lattice(&LatticeSelector::Belnap4)?;
    println!("{l}");
    let (top, bot) = (l.value("top").unwrap(), l.value("bot").unwrap());
    println!("top and bot = {}", l.name_of(l.meet(top, bot)));
    println!("top or bot  = {}", l.name_of(l.join(top, bot)));
    for a in l.values() {
        let row: Vec<&str> = l.values().map(|b| l.name_of(l.implies(a, b))).collect();
        println!("{:>3} -> [{}]", l.name_of(a), row.join(" "));
    }
    println!("violations: {}", check_lattice(&l).len());
    Ok(())
}
