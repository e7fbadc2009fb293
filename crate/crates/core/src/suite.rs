//! Formula suites: exhaustive bounded-depth enumeration for the lemma
//! checks, and seeded random modal formulas for the two-valuedness check.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kripke::Semantics;
use crate::lattice::{Connective, LatticeSpec, TruthValue};
use crate::modal_unary::UnaryModel;
use crate::syntax::{Atom, ModalFormula, MvFormula, Pretty, Thesis};
use crate::verdict::CheckVerdict;

/// Every formula of depth at most `depth` over `atoms`, built with `~`,
/// `and`, `or`, `->` and, if `extras` is set, the lattice's extra
/// connectives. Shallower formulas come first; the order is deterministic.
///
/// Three atoms give 33 formulas at depth 1 and 3303 distinct ones at depth 2.
pub fn enumerate_formulas(atoms: &[Atom], lattice: &LatticeSpec, depth: usize, extras: bool) -> Vec<MvFormula> {
    let mut unary: Vec<Box<dyn Fn(MvFormula) -> MvFormula>> = vec![Box::new(MvFormula::not)];
    let mut binary: Vec<Box<dyn Fn(MvFormula, MvFormula) -> MvFormula>> = vec![
        Box::new(MvFormula::and),
        Box::new(MvFormula::or),
        Box::new(MvFormula::implies),
    ];
    if extras {
        for (name, c) in lattice.extras() {
            let name = name.clone();
            match c {
                Connective::Unary(_) => unary.push(Box::new(move |x| MvFormula::Op1(name.clone(), Box::new(x)))),
                Connective::Binary(_) => binary.push(Box::new(move |x, y| {
                    MvFormula::Op2(name.clone(), Box::new(x), Box::new(y))
                })),
            }
        }
    }

    let mut all: Vec<MvFormula> = atoms.iter().cloned().map(MvFormula::Atom).collect();
    let mut seen: HashSet<MvFormula> = all.iter().cloned().collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut push = |f: MvFormula| {
            if seen.insert(f.clone()) {
                all.push(f);
            }
        };
        for op in &unary {
            for x in &prev {
                push(op(x.clone()));
            }
        }
        for op in &binary {
            for x in &prev {
                for y in &prev {
                    push(op(x.clone(), y.clone()));
                }
            }
        }
    }
    all
}

/// Theses for the consequence lemma: `phi <- @alpha` for every formula up to
/// `annotated_depth` and every value, then `head :- body` for every pair of
/// formulas up to `rule_depth`.
pub fn thesis_suite(atoms: &[Atom], lattice: &LatticeSpec, annotated_depth: usize, rule_depth: usize) -> Vec<Thesis> {
    let mut out = Vec::new();
    for phi in enumerate_formulas(atoms, lattice, annotated_depth, false) {
        for alpha in lattice.values() {
            out.push(Thesis::Annotated(phi.clone(), alpha));
        }
    }
    let small = enumerate_formulas(atoms, lattice, rule_depth, false);
    for h in &small {
        for b in &small {
            out.push(Thesis::Rule(h.clone(), b.clone()));
        }
    }
    out
}

/// A random formula over modal atoms `[alpha]p(c)` and the classical
/// connectives, of depth at most `depth`.
pub fn random_modal_formula(rng: &mut impl Rng, base: &[Atom], lattice: &LatticeSpec, depth: usize) -> ModalFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        let atom = base.choose(rng).cloned().unwrap_or_else(|| Atom::ground("p", Vec::<String>::new()));
        return ModalFormula::Modal(TruthValue::new(rng.gen_range(0..lattice.len())), atom);
    }
    let op = rng.gen_range(0..4);
    let x = random_modal_formula(rng, base, lattice, depth - 1);
    match op {
        0 => x.not(),
        1 => x.and(random_modal_formula(rng, base, lattice, depth - 1)),
        2 => x.or(random_modal_formula(rng, base, lattice, depth - 1)),
        _ => x.implies(random_modal_formula(rng, base, lattice, depth - 1)),
    }
}

/// For `count` random formulas of depth at most `depth`:
///
/// * `twovalued/extent`: `|phi|` is empty or every world;
/// * `twovalued/laws`: the extent of a compound is the complement,
///   intersection or union of its parts' extents.
pub fn verify_two_valued(
    model: &UnaryModel,
    base: &[Atom],
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<CheckVerdict>> {
    let l = model.lattice.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extent = CheckVerdict::new("twovalued/extent");
    let mut laws = CheckVerdict::new("twovalued/laws");
    for _ in 0..count {
        let phi = random_modal_formula(&mut rng, base, &l, depth);
        let e = model.extent(&phi)?;
        extent.record(e.is_empty() || e.is_full(), || {
            format!("|{}| = {e:?}", phi.show(&l))
        });
        let by_parts = match &phi {
            ModalFormula::Not(x) => Some(model.extent(x)?.complement()),
            ModalFormula::And(x, y) => Some(model.extent(x)?.intersection(&model.extent(y)?)),
            ModalFormula::Or(x, y) => Some(model.extent(x)?.union(&model.extent(y)?)),
            ModalFormula::Implies(x, y) => Some(model.extent(x)?.complement().union(&model.extent(y)?)),
            _ => None,
        };
        if let Some(expected) = by_parts {
            laws.record(e == expected, || {
                format!("|{}| = {e:?}, parts give {expected:?}", phi.show(&l))
            });
        }
    }
    Ok(vec![extent, laws])
}
