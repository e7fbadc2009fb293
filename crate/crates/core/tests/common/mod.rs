//! Shared helpers for the integration tests: random stratified programs and
//! a small independent evaluator used as an oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use mvred::lattice::{builtin_lattice, LatticeSelector, LatticeSpec, TruthValue};
use mvred::syntax::{parse_program, Atom, MvFormula, Program};
use rand::Rng;

pub fn belnap() -> Arc<LatticeSpec> {
    Arc::new(builtin_lattice(&LatticeSelector::Belnap4).unwrap())
}

pub fn fuzzy(k: usize) -> Arc<LatticeSpec> {
    Arc::new(builtin_lattice(&LatticeSelector::Fuzzy(k)).unwrap())
}

pub fn val(l: &LatticeSpec, name: &str) -> TruthValue {
    l.value(name).unwrap_or_else(|| panic!("no element {name}"))
}

/// Every bundled sample program, parsed.
pub fn corpus() -> Vec<(String, Program)> {
    mvred::corpus::CORPUS
        .iter()
        .map(|(name, src)| (name.to_string(), parse_program(src).unwrap()))
        .collect()
}

/// Shape limits for [`random_program`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_constants: usize,
    pub max_clauses: usize,
    pub max_body: usize,
    pub predicates: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_constants: 4,
            max_clauses: 6,
            max_body: 2,
            predicates: 4,
        }
    }
}

const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];
const VARS: [&str; 2] = ["X", "Y"];

/// Source text of a random stratified program over `decl`.
///
/// Predicate `pK` sits in stratum `K`: positive literals may use the same
/// or a lower stratum, negative ones only a lower stratum. Body variables
/// always occur in the head and each predicate heads at most two rules,
/// which keeps the unary transform small.
pub fn random_program_text(rng: &mut impl Rng, decl: &str, lattice: &LatticeSpec, shape: Shape) -> String {
    attempt(rng, decl, lattice, shape)
}

fn attempt(rng: &mut impl Rng, decl: &str, lattice: &LatticeSpec, shape: Shape) -> String {
    let n_const = rng.gen_range(1..=shape.max_constants.min(CONSTANTS.len()));
    let consts = &CONSTANTS[..n_const];
    let arities: Vec<usize> = (0..shape.predicates).map(|_| rng.gen_range(0..=2)).collect();
    let mut rules_per_head = vec![0; shape.predicates];
    let mut out = format!("lattice {decl}.\n");

    let value = |rng: &mut dyn rand::RngCore| lattice.name_of(TruthValue::new(rng.gen_range(0..lattice.len()))).to_string();
    let atom = |pred: usize, args: &[String]| {
        if args.is_empty() {
            format!("p{pred}")
        } else {
            format!("p{pred}({})", args.join(", "))
        }
    };

    let n_clauses = rng.gen_range(1..=shape.max_clauses);
    for _ in 0..n_clauses {
        let pred = rng.gen_range(0..shape.predicates);
        let is_fact = pred == 0 || rules_per_head[pred] >= 2 || rng.gen_bool(0.35);
        if is_fact {
            let args: Vec<String> = (0..arities[pred])
                .map(|_| consts[rng.gen_range(0..n_const)].to_string())
                .collect();
            out += &format!("{} <- @{}.\n", atom(pred, &args), value(rng));
            continue;
        }
        rules_per_head[pred] += 1;
        let head_args: Vec<String> = (0..arities[pred])
            .map(|i| {
                if rng.gen_bool(0.8) {
                    VARS[i].to_string()
                } else {
                    consts[rng.gen_range(0..n_const)].to_string()
                }
            })
            .collect();
        let head_vars: Vec<String> = head_args.iter().filter(|a| a.starts_with(char::is_uppercase)).cloned().collect();
        let literal = |rng: &mut dyn rand::RngCore| {
            let negated = rng.gen_bool(0.4);
            let top = if negated { pred } else { pred + 1 };
            let q = rng.gen_range(0..top.max(1));
            let negated = negated && q < pred;
            let args: Vec<String> = (0..arities[q])
                .map(|_| {
                    if !head_vars.is_empty() && rng.gen_bool(0.7) {
                        head_vars[rng.gen_range(0..head_vars.len())].clone()
                    } else {
                        consts[rng.gen_range(0..n_const)].to_string()
                    }
                })
                .collect();
            format!("{}{}", if negated { "~" } else { "" }, atom(q, &args))
        };
        let n_body = rng.gen_range(1..=shape.max_body);
        let lits: Vec<String> = (0..n_body).map(|_| literal(rng)).collect();
        let sep = if n_body > 1 && rng.gen_bool(0.3) { "; " } else { ", " };
        out += &format!("{} :- {}.\n", atom(pred, &head_args), lits.join(sep));
    }
    out
}

/// A random program that grounds: rules with variables always come with
/// at least one constant.
pub fn random_program(rng: &mut impl Rng, decl: &str, lattice: &LatticeSpec, shape: Shape) -> (String, Program) {
    loop {
        let text = random_program_text(rng, decl, lattice, shape);
        let p = parse_program(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        if mvred::syntax::ground(&p).is_ok() {
            return (text, p);
        }
    }
}

/// Many-valued evaluation written against the raw lattice operations, kept
/// separate from the library's own valuation.
pub fn oracle_value(l: &LatticeSpec, values: &BTreeMap<Atom, TruthValue>, phi: &MvFormula) -> TruthValue {
    let ev = |x: &MvFormula| oracle_value(l, values, x);
    match phi {
        MvFormula::Atom(a) if a.predicate == "=" => {
            let c = a.constants();
            if c[0] == c[1] { l.top() } else { l.bottom() }
        }
        MvFormula::Atom(a) if a.predicate == "<=" => {
            let c = a.constants();
            if c[0] <= c[1] { l.top() } else { l.bottom() }
        }
        MvFormula::Atom(a) => values[a],
        MvFormula::Neg(x) => l.neg(ev(x)),
        MvFormula::And(x, y) => l.meet(ev(x), ev(y)),
        MvFormula::Or(x, y) => l.join(ev(x), ev(y)),
        MvFormula::Implies(x, y) => {
            let (a, b) = (ev(x), ev(y));
            // Residuum by enumeration.
            l.join_all(l.values().filter(|&c| l.leq(l.meet(c, a), b)))
        }
        MvFormula::Op1(op, x) => l.apply_unary(op, ev(x)).unwrap(),
        MvFormula::Op2(op, x, y) => l.apply_binary(op, ev(x), ev(y)).unwrap(),
    }
}

/// All maps from `atoms` to the carrier, first atom most significant.
pub fn all_valuations(l: &LatticeSpec, atoms: &[Atom]) -> Vec<BTreeMap<Atom, TruthValue>> {
    let mut out = vec![BTreeMap::new()];
    for a in atoms {
        out = out
            .into_iter()
            .flat_map(|m| {
                l.values().map(move |v| {
                    let mut m = m.clone();
                    m.insert(a.clone(), v);
                    m
                })
            })
            .collect();
    }
    out
}

pub fn prop_atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|p| Atom::ground(p, Vec::<String>::new())).collect()
}
