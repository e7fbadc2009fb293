//! Reduction to a positive program over modal atoms `[alpha]p(c)`, and its
//! Kripke model with one relation `R_alpha = W x {alpha}` per value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kripke::{Extent, KripkeModel, Relation, Semantics, Valuation, Worlds};
use crate::lattice::{LatticeSpec, TruthValue};
use crate::semantics::Interpretation;
use crate::syntax::{ground, tuples, Atom, Literal, ModalFormula, Pretty, Program, RuleBody};
use crate::verdict::CheckVerdict;

/// Default cap on clauses per transformed head and on enumerated valuations.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// `[alpha]p(c)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModalAtom {
    pub value: TruthValue,
    pub atom: Atom,
}

impl ModalAtom {
    pub fn new(value: TruthValue, atom: Atom) -> Self {
        ModalAtom { value, atom }
    }

    pub fn to_formula(&self) -> ModalFormula {
        ModalFormula::Modal(self.value, self.atom.clone())
    }
}

impl Pretty for ModalAtom {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]{}", l.name_of(self.value), self.atom)
    }
}

/// A clause of the positive program. An empty body is a fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModalClause {
    pub head: ModalAtom,
    /// Classical disjunction of conjunctions.
    pub body: Vec<Vec<ModalAtom>>,
}

impl ModalClause {
    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Truth of the body when exactly the atoms in `true_atoms` hold.
    pub fn body_holds(&self, true_atoms: impl Fn(&ModalAtom) -> bool) -> bool {
        self.is_fact() || self.body.iter().any(|b| b.iter().all(&true_atoms))
    }
}

impl Pretty for ModalClause {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head.show(l))?;
        if !self.is_fact() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                for (k, m) in b.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", m.show(l))?;
                }
            }
        }
        f.write_str(".")
    }
}

/// `P_mm`: a positive two-valued program over modal atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalProgram {
    pub lattice: Arc<LatticeSpec>,
    pub clauses: Vec<ModalClause>,
}

impl ModalProgram {
    /// The least set of modal atoms closed under the clauses.
    pub fn least_model(&self) -> BTreeSet<ModalAtom> {
        self.least_model_from(BTreeSet::new())
    }

    /// The least closed set containing `seed`.
    pub fn least_model_from(&self, seed: BTreeSet<ModalAtom>) -> BTreeSet<ModalAtom> {
        let mut model = seed;
        let mut pending: Vec<&ModalClause> = self.clauses.iter().collect();
        loop {
            let before = model.len();
            pending.retain(|c| {
                if model.contains(&c.head) {
                    return false;
                }
                if c.body_holds(|m| model.contains(m)) {
                    model.insert(c.head.clone());
                    false
                } else {
                    true
                }
            });
            if model.len() == before {
                return model;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let l = &self.lattice;
        let atom = |m: &ModalAtom| json!({ "op": l.name_of(m.value), "atom": m.atom.to_string() });
        Value::Array(
            self.clauses
                .iter()
                .map(|c| {
                    json!({
                        "head": atom(&c.head),
                        "body": c.body.iter().map(|b| b.iter().map(atom).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for ModalProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", c.show(&self.lattice))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnaryOptions {
    /// Largest number of clauses one head may expand into.
    pub budget: usize,
    /// Keep the body as a disjunction over the original blocks instead of
    /// one conjunction over every literal position.
    pub disjunctive_bodies: bool,
}

impl Default for UnaryOptions {
    fn default() -> Self {
        UnaryOptions {
            budget: DEFAULT_BUDGET,
            disjunctive_bodies: false,
        }
    }
}

/// Transforms a program into `P_mm` with default options.
pub fn transform_unary(program: &Program) -> Result<ModalProgram> {
    transform_unary_with(program, UnaryOptions::default())
}

/// Transforms a program into `P_mm`.
///
/// Ground rules sharing a head are merged first. A head with facts only
/// yields `[alpha]p(c).` with alpha the join of the annotations. Otherwise
/// each literal position gets its own variable, and every assignment of
/// values to those variables yields one clause whose head value is the
/// lattice value of the body under that assignment, joined with any fact
/// annotations of the head.
pub fn transform_unary_with(program: &Program, opts: UnaryOptions) -> Result<ModalProgram> {
    let program = ground(program)?;
    let l = program.lattice.clone();
    let n = l.len();
    let mut clauses = Vec::new();

    for (head, rules) in program.rules_by_head() {
        let mut facts = l.bottom();
        let mut blocks: Vec<&Vec<Literal>> = Vec::new();
        for r in rules {
            match &r.body {
                RuleBody::Fact(v) => facts = l.join(facts, *v),
                RuleBody::Body(bs) => blocks.extend(bs),
            }
        }
        if blocks.is_empty() {
            clauses.push(ModalClause {
                head: ModalAtom::new(facts, head.clone()),
                body: Vec::new(),
            });
            continue;
        }
        let m: usize = blocks.iter().map(|b| b.len()).sum();
        match n.checked_pow(m as u32) {
            Some(count) if count <= opts.budget => {}
            _ => {
                return Err(Error::BudgetExceeded {
                    what: "the unary transform",
                    required: format!("{n}^{m} clauses for head {head}"),
                    budget: opts.budget,
                })
            }
        }
        for g in tuples(n, m) {
            let mut beta = facts;
            let mut body = Vec::with_capacity(blocks.len());
            let mut slot = 0;
            for b in &blocks {
                let mut meet = l.top();
                let mut atoms = Vec::with_capacity(b.len());
                for lit in b.iter() {
                    let alpha = TruthValue::new(g[slot]);
                    slot += 1;
                    meet = l.meet(meet, if lit.negated { l.neg(alpha) } else { alpha });
                    atoms.push(ModalAtom::new(alpha, lit.atom.clone()));
                }
                beta = l.join(beta, meet);
                body.push(atoms);
            }
            if !opts.disjunctive_bodies {
                body = vec![body.concat()];
            }
            clauses.push(ModalClause {
                head: ModalAtom::new(beta, head.clone()),
                body,
            });
        }
    }
    Ok(ModalProgram { lattice: l, clauses })
}

/// The Kripke model `M_I` of the transformed program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryModel {
    pub kripke: KripkeModel,
    pub lattice: Arc<LatticeSpec>,
}

/// Name of the relation for the operator `[alpha]`.
pub fn relation_name(l: &LatticeSpec, alpha: TruthValue) -> String {
    format!("R_{}", l.name_of(alpha))
}

/// Worlds are the carrier, `R_alpha = W x {alpha}`, and `V(w, p)(c)` holds
/// iff `w = I(p(c))`.
pub fn build_kripke_unary(program: &Program, interp: &Interpretation) -> UnaryModel {
    let l = interp.lattice().clone();
    let n = l.len();
    let relations = l
        .values()
        .map(|alpha| {
            (
                relation_name(&l, alpha),
                Relation::Product {
                    domain: Extent::full(n),
                    codomain: vec![alpha.index()],
                },
            )
        })
        .collect();
    let valuation = interp
        .iter()
        .map(|(a, v)| ((a.predicate.clone(), a.constants()), BTreeSet::from([v.index()])))
        .collect();
    UnaryModel {
        kripke: KripkeModel {
            worlds: Worlds::Values(l.clone()),
            relations,
            constants: program.constants.iter().cloned().collect(),
            predicates: program.predicates.clone(),
            valuation: Valuation::Sparse(valuation),
        },
        lattice: l,
    }
}

fn ground_args(a: &Atom) -> Result<Vec<String>> {
    if a.is_ground() {
        Ok(a.constants())
    } else {
        Err(Error::UnknownAtom(a.to_string()))
    }
}

impl Semantics for UnaryModel {
    const MODE: &'static str = "unary";

    fn kripke(&self) -> &KripkeModel {
        &self.kripke
    }

    fn eval_modal(&self, phi: &ModalFormula, w: usize) -> Result<bool> {
        match phi {
            ModalFormula::Plain(a) => self.kripke.holds(w, &a.predicate, &ground_args(a)?),
            ModalFormula::Modal(alpha, a) => {
                let args = ground_args(a)?;
                let r = self.kripke.relation(&relation_name(&self.lattice, *alpha))?;
                for y in r.successors(w) {
                    if !self.kripke.holds(y, &a.predicate, &args)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Self::wrong_mode(phi),
        }
    }
}

impl UnaryModel {
    /// Modal atoms over `base` that are true at every world.
    pub fn true_modal_atoms<'a>(
        &self,
        base: impl IntoIterator<Item = &'a Atom>,
    ) -> Result<BTreeSet<ModalAtom>> {
        let mut out = BTreeSet::new();
        for a in base {
            for alpha in self.lattice.values() {
                let m = ModalAtom::new(alpha, a.clone());
                if self.is_true(&m.to_formula())? {
                    out.insert(m);
                }
            }
        }
        Ok(out)
    }
}

/// `S_T`: the modal atoms `[I(p(c))]p(c)`.
pub fn expected_true_atoms(interp: &Interpretation) -> BTreeSet<ModalAtom> {
    interp
        .iter()
        .map(|(a, v)| ModalAtom::new(v, a.clone()))
        .collect()
}

/// Checks that `interp` is the model of the transformed program.
///
/// * `invariance/clauses`: every clause holds when `[alpha]p(c)` is read as
///   `alpha = I(p(c))`.
/// * `invariance/true-atoms`: the modal atoms true in `M_I` are exactly
///   `S_T`.
/// * `invariance/least-model`: for programs without recursion, the least
///   model of the clauses, plus `[bottom]q` for atoms no clause defines,
///   is `S_T`. Omitted for recursive programs.
pub fn verify_invariance(program: &Program, interp: &Interpretation) -> Result<Vec<CheckVerdict>> {
    verify_invariance_with(program, interp, UnaryOptions::default())
}

pub fn verify_invariance_with(
    program: &Program,
    interp: &Interpretation,
    opts: UnaryOptions,
) -> Result<Vec<CheckVerdict>> {
    let l = interp.lattice().clone();
    let pmm = transform_unary_with(program, opts)?;
    let reading = |m: &ModalAtom| interp.get(&m.atom) == Some(m.value);

    let mut clauses = CheckVerdict::new("invariance/clauses");
    for c in &pmm.clauses {
        let ok = !c.body_holds(reading) || reading(&c.head);
        clauses.record(ok, || c.show(&l).to_string());
    }

    let model = build_kripke_unary(program, interp);
    let expected = expected_true_atoms(interp);
    let actual = model.true_modal_atoms(interp.atoms())?;
    let mut true_atoms = CheckVerdict::new("invariance/true-atoms");
    for m in expected.symmetric_difference(&actual) {
        let why = if actual.contains(m) { "true but not in S_T" } else { "in S_T but not true" };
        true_atoms.record(false, || format!("{} is {why}", m.show(&l)));
    }
    true_atoms.checked = expected.len().max(actual.len());

    let mut out = vec![clauses, true_atoms];
    if !is_recursive(program)? {
        let defined: BTreeSet<&Atom> = pmm.clauses.iter().map(|c| &c.head.atom).collect();
        let undefined = interp
            .atoms()
            .filter(|a| !defined.contains(a))
            .map(|a| ModalAtom::new(l.bottom(), a.clone()))
            .collect();
        let least = pmm.least_model_from(undefined);
        let mut v = CheckVerdict::new("invariance/least-model");
        for m in expected.symmetric_difference(&least) {
            let why = if least.contains(m) { "derived but not in S_T" } else { "in S_T but not derived" };
            v.record(false, || format!("{} is {why}", m.show(&l)));
        }
        v.checked = expected.len();
        out.push(v);
    }
    Ok(out)
}

/// Whether some ground atom depends on itself.
pub fn is_recursive(program: &Program) -> Result<bool> {
    let g = ground(program)?;
    let mut deps: BTreeMap<&Atom, BTreeSet<&Atom>> = BTreeMap::new();
    for r in &g.rules {
        deps.entry(&r.head)
            .or_default()
            .extend(r.literals().map(|l| &l.atom));
    }
    // Depth-first search for a back edge.
    fn visit<'a>(
        a: &'a Atom,
        deps: &BTreeMap<&'a Atom, BTreeSet<&'a Atom>>,
        state: &mut BTreeMap<&'a Atom, bool>,
    ) -> bool {
        match state.get(a) {
            Some(false) => return true,
            Some(true) => return false,
            None => {}
        }
        state.insert(a, false);
        if let Some(ds) = deps.get(a) {
            for d in ds {
                if visit(d, deps, state) {
                    return true;
                }
            }
        }
        state.insert(a, true);
        false
    }
    let mut state = BTreeMap::new();
    Ok(deps.keys().any(|a| visit(a, &deps, &mut state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::compute_model;
    use crate::syntax::{parse_formula, parse_program};

    fn setup(src: &str) -> (Program, Interpretation, UnaryModel) {
        let p = parse_program(src).unwrap();
        let i = compute_model(&p).unwrap();
        let m = build_kripke_unary(&p, &i);
        (p, i, m)
    }

    fn listing(src: &str) -> Vec<String> {
        let p = parse_program(src).unwrap();
        transform_unary(&p)
            .unwrap()
            .clauses
            .iter()
            .map(|c| c.show(&p.lattice).to_string())
            .collect()
    }

    #[test]
    fn fact_becomes_a_modal_fact() {
        assert_eq!(listing("lattice belnap4.\np(a) <- @t."), ["[t]p(a)."]);
    }

    #[test]
    fn single_literal_rule_has_one_clause_per_value() {
        assert_eq!(
            listing("lattice belnap4.\np(a) :- r(a)."),
            [
                "[f]p(a) :- [f]r(a).",
                "[t]p(a) :- [t]r(a).",
                "[bot]p(a) :- [bot]r(a).",
                "[top]p(a) :- [top]r(a).",
            ]
        );
    }

    #[test]
    fn negated_literal_flips_the_head_value() {
        let out = listing("lattice belnap4.\np(a) :- ~r(a).");
        assert!(out.contains(&"[f]p(a) :- [t]r(a).".to_string()), "{out:?}");
        assert!(out.contains(&"[bot]p(a) :- [bot]r(a).".to_string()), "{out:?}");
    }

    #[test]
    fn clause_count_is_exponential_in_literal_positions() {
        let p = parse_program("lattice fuzzy:3.\np :- q, r; ~s.\np :- q.").unwrap();
        assert_eq!(transform_unary(&p).unwrap().clauses.len(), 3usize.pow(4));
    }

    #[test]
    fn budget_is_enforced() {
        let p = parse_program("lattice belnap4.\np :- q, r, s.").unwrap();
        let opts = UnaryOptions { budget: 63, ..UnaryOptions::default() };
        match transform_unary_with(&p, opts) {
            Err(Error::BudgetExceeded { required, .. }) => assert!(required.starts_with("4^3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn relations_are_products_onto_one_value() {
        let (_, _, m) = setup("lattice belnap4.\np(a) <- @t.");
        assert_eq!(m.kripke.relations.len(), 4);
        let r = m.kripke.relation("R_top").unwrap();
        let top = m.lattice.value("top").unwrap().index();
        for x in 0..4 {
            assert_eq!(r.successors(x), [top]);
        }
    }

    #[test]
    fn modal_atoms_are_global() {
        let (_, _, m) = setup("lattice belnap4.\np(a) <- @t.");
        let l = m.lattice.clone();
        let f = |s: &str| parse_formula(s, &l).unwrap();
        assert!(m.extent(&f("[t]p(a)")).unwrap().is_full());
        assert!(m.extent(&f("[f]p(a)")).unwrap().is_empty());
        let plain = m.extent(&f("p(a)")).unwrap();
        assert_eq!(plain.iter().collect::<Vec<_>>(), [l.value("t").unwrap().index()]);
    }

    #[test]
    fn distinct_values_give_distinct_singletons() {
        let (_, _, m) = setup("lattice belnap4.\np(a) <- @t.\np(b) <- @top.");
        let l = m.lattice.clone();
        let a = m.extent(&parse_formula("p(a)", &l).unwrap()).unwrap();
        let b = m.extent(&parse_formula("p(b)", &l).unwrap()).unwrap();
        assert_eq!(a.count(), 1);
        assert_eq!(b.count(), 1);
        assert_ne!(a, b);
    }

    #[test]
    fn invariance_passes_on_a_sample() {
        let (p, i, _) = setup(
            "lattice belnap4.\nr(a) <- @top.\ns(a) <- @t.\ns(b) <- @bot.\n\
             p(X) :- r(X), ~s(X).\nq(X) :- p(X); s(X).",
        );
        let report = verify_invariance(&p, &i).unwrap();
        assert_eq!(report.len(), 3);
        assert!(report.iter().all(|v| v.pass), "{report:?}");
    }

    #[test]
    fn perturbed_model_fails_with_a_clause() {
        let (p, mut i, _) = setup("lattice belnap4.\nr(a) <- @top.\np(X) :- r(X).");
        i.set(&Atom::ground("p", ["a"]), p.lattice.value("t").unwrap()).unwrap();
        let report = verify_invariance(&p, &i).unwrap();
        assert!(!report[0].pass);
        assert_eq!(report[0].counterexample.as_deref(), Some("[top]p(a) :- [top]r(a)."));
    }

    #[test]
    fn empty_program_passes_vacuously() {
        let (p, i, _) = setup("lattice belnap4.\n");
        let report = verify_invariance(&p, &i).unwrap();
        assert!(report.iter().all(|v| v.pass && v.checked == 0));
    }

    #[test]
    fn literal_disjunctive_bodies_break_invariance() {
        // One block matches the model while the other does not: the body is
        // true but the head value mixes in the wrong assignment.
        let (p, i, _) = setup("lattice belnap4.\nr <- @t.\ns <- @f.\np :- r; s.");
        let opts = UnaryOptions { disjunctive_bodies: true, ..UnaryOptions::default() };
        let report = verify_invariance_with(&p, &i, opts).unwrap();
        assert!(!report[0].pass);
        assert!(verify_invariance(&p, &i).unwrap()[0].pass);
    }

    #[test]
    fn least_model_check_is_skipped_for_recursion() {
        let (p, i, _) = setup("lattice belnap4.\ne(a) <- @t.\np(X) :- e(X); p(X).");
        assert!(is_recursive(&p).unwrap());
        let report = verify_invariance(&p, &i).unwrap();
        assert_eq!(report.len(), 2);
        assert!(report.iter().all(|v| v.pass));
    }

    #[test]
    fn modal_operators_are_not_normal() {
        // [bot] applied to a value-top atom: the atom is as true as it gets,
        // yet the modal atom is false everywhere.
        let (_, _, m) = setup("lattice belnap4.\np <- @t.");
        let l = m.lattice.clone();
        assert_eq!(l.top(), l.value("t").unwrap());
        assert!(m.is_true(&parse_formula("[t]p", &l).unwrap()).unwrap());
        assert!(m.extent(&parse_formula("[bot]p", &l).unwrap()).unwrap().is_empty());
        // Raising the value of p from f to t turns [bot]p from true to false.
        let (_, _, low) = setup("lattice belnap4.\np :- p.");
        assert!(low.is_true(&parse_formula("[f]p", &l).unwrap()).unwrap());
        assert!(!m.is_true(&parse_formula("[f]p", &l).unwrap()).unwrap());
    }

    #[test]
    fn flat_operators_are_rejected() {
        let (_, _, m) = setup("lattice belnap4.\np <- @t.");
        let f = parse_formula("dia p_F(t)", &m.lattice).unwrap();
        assert!(matches!(m.eval(&f, 0), Err(Error::WrongMode { .. })));
    }

    #[test]
    fn json_listing() {
        let p = parse_program("lattice belnap4.\np :- ~r.").unwrap();
        let j = transform_unary(&p).unwrap().to_json();
        assert_eq!(
            j[0].to_string(),
            r#"{"body":[[{"atom":"r","op":"f"}]],"head":{"atom":"p","op":"t"}}"#
        );
    }
}
