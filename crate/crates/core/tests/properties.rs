mod common;

use std::collections::BTreeMap;

use common::*;
use mvred::modal_flatten::{decapsulate, encapsulate, reflect};
use mvred::modal_unary::{build_kripke_unary, verify_invariance};
use mvred::semantics::{body_value, compute_model, satisfies_rule};
use mvred::suite::{enumerate_formulas, verify_two_valued};
use mvred::syntax::{ground, parse_program, Atom, MvFormula, Pretty, Program, RuleBody};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn program(seed: u64) -> Program {
    let l = belnap();
    random_program(&mut ChaCha8Rng::seed_from_u64(seed), "belnap4", &l, Shape::default()).1
}

fn fuzzy_program(seed: u64) -> Program {
    let l = fuzzy(5);
    random_program(&mut ChaCha8Rng::seed_from_u64(seed), "fuzzy:5", &l, Shape::default()).1
}

/// Both lattices, chosen by the low bit of the seed.
fn any_program(seed: u64) -> Program {
    if seed & 1 == 0 {
        program(seed)
    } else {
        fuzzy_program(seed)
    }
}

/// Facts only at bottom or top and every rule body evaluated classically,
/// predicate by predicate (the generator puts `pK` in stratum `K`).
fn classical_model(p: &Program) -> BTreeMap<Atom, bool> {
    let l = &p.lattice;
    let g = ground(p).unwrap();
    let mut truth: BTreeMap<Atom, bool> = g.herbrand_base().into_iter().map(|a| (a, false)).collect();
    let mut preds: Vec<&String> = p.predicates.keys().collect();
    preds.sort_by_key(|s| s[1..].parse::<usize>().unwrap());
    for pred in preds {
        loop {
            let mut changed = false;
            for r in g.rules.iter().filter(|r| &r.head.predicate == pred) {
                let holds = match &r.body {
                    RuleBody::Fact(v) => *v == l.top(),
                    RuleBody::Body(blocks) => blocks
                        .iter()
                        .any(|b| b.iter().all(|lit| truth[&lit.atom] != lit.negated)),
                };
                if holds && !truth[&r.head] {
                    truth.insert(r.head.clone(), true);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    truth
}

/// Replaces every fact annotation by bottom or top.
fn crisp(p: &Program, seed: u64) -> Program {
    let mut p = p.clone();
    let (bot, top) = (p.lattice.bottom(), p.lattice.top());
    for (i, r) in p.rules.iter_mut().enumerate() {
        if let RuleBody::Fact(v) = &mut r.body {
            *v = if (seed >> (i % 64)) & 1 == 1 { top } else { bot };
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let p = any_program(seed);
        let text = p.to_string();
        let again = parse_program(&text).unwrap();
        prop_assert_eq!(again.to_string(), text);
        let g = ground(&p).unwrap().to_string();
        prop_assert_eq!(ground(&parse_program(&g).unwrap()).unwrap().to_string(), g);
    }

    #[test]
    fn grounding_instantiates_every_substitution(seed in any::<u64>()) {
        let p = any_program(seed);
        let g = ground(&p).unwrap();
        let c = p.constants.len();
        let expected: usize = p.rules.iter().map(|r| c.pow(r.variables().len() as u32)).sum();
        prop_assert_eq!(g.rules.len(), expected);
        prop_assert!(g.rules.iter().all(|r| r.is_ground()));
    }

    #[test]
    fn model_is_a_supported_model(seed in any::<u64>()) {
        let p = any_program(seed);
        let l = p.lattice.clone();
        let m = compute_model(&p).unwrap();
        let g = ground(&p).unwrap();
        for r in &g.rules {
            prop_assert!(satisfies_rule(&m, r).unwrap(), "{} violated", r.show(&l));
        }
        // Each atom sits exactly at the join of what its rules give it.
        for (atom, rules) in g.rules_by_head() {
            let support = l.join_all(rules.iter().map(|r| match &r.body {
                RuleBody::Fact(v) => *v,
                RuleBody::Body(b) => body_value(&m, b).unwrap(),
            }));
            prop_assert_eq!(m.value_of(atom).unwrap(), support);
        }
        for atom in g.herbrand_base() {
            if !g.rules.iter().any(|r| r.head == atom) {
                prop_assert_eq!(m.value_of(&atom).unwrap(), l.bottom());
            }
        }
    }

    #[test]
    fn crisp_programs_agree_with_classical_semantics(seed in any::<u64>(), bits in any::<u64>()) {
        let p = crisp(&program(seed), bits);
        let l = p.lattice.clone();
        let m = compute_model(&p).unwrap();
        for (atom, truth) in classical_model(&p) {
            let v = m.value_of(&atom).unwrap();
            prop_assert_eq!(v, if truth { l.top() } else { l.bottom() }, "{}", atom);
        }
    }

    #[test]
    fn unary_model_is_two_valued(seed in any::<u64>()) {
        let p = any_program(seed);
        let m = compute_model(&p).unwrap();
        let k = build_kripke_unary(&p, &m);
        let base: Vec<Atom> = m.atoms().cloned().collect();
        for v in verify_two_valued(&k, &base, 50, 4, seed).unwrap() {
            prop_assert!(v.pass, "{:?}", v);
        }
        for v in verify_invariance(&p, &m).unwrap() {
            prop_assert!(v.pass, "{:?}", v);
        }
    }

    #[test]
    fn encapsulation_round_trips(seed in any::<u64>()) {
        let p = any_program(seed);
        let m = compute_model(&p).unwrap();
        let k = reflect(&p, &m);
        let atoms: Vec<Atom> = m.atoms().take(2).cloned().collect();
        for phi in enumerate_formulas(&atoms, &p.lattice, 1, false) {
            let e = encapsulate(&phi, &k).unwrap();
            prop_assert_eq!(decapsulate(&e), Some(phi));
        }
    }
}

#[test]
fn encapsulation_rejects_extra_connectives() {
    let p = program(7);
    let m = compute_model(&p).unwrap();
    let k = reflect(&p, &m);
    let a = MvFormula::Atom(m.atoms().next().unwrap().clone());
    let phi = MvFormula::Op1("conflation".into(), Box::new(a));
    assert!(encapsulate(&phi, &k).is_err());
}
