//! Many-valued Herbrand interpretations and the least model of a stratified
//! program.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, TruthValue};
use crate::syntax::{builtin_holds, ground, Atom, Literal, MvFormula, Program, Rule, RuleBody};

/// A total map from a Herbrand base to lattice values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    lattice: Arc<LatticeSpec>,
    values: BTreeMap<Atom, TruthValue>,
}

impl Interpretation {
    /// Every atom of `base` at bottom.
    pub fn bottom(lattice: Arc<LatticeSpec>, base: impl IntoIterator<Item = Atom>) -> Self {
        let b = lattice.bottom();
        Interpretation {
            values: base.into_iter().map(|a| (a, b)).collect(),
            lattice,
        }
    }

    pub fn from_values(lattice: Arc<LatticeSpec>, values: BTreeMap<Atom, TruthValue>) -> Self {
        Interpretation { lattice, values }
    }

    pub fn lattice(&self) -> &Arc<LatticeSpec> {
        &self.lattice
    }

    pub fn get(&self, atom: &Atom) -> Option<TruthValue> {
        self.values.get(atom).copied()
    }

    pub fn value_of(&self, atom: &Atom) -> Result<TruthValue> {
        self.get(atom)
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }

    /// Sets an atom already in the base.
    pub fn set(&mut self, atom: &Atom, v: TruthValue) -> Result<()> {
        match self.values.get_mut(atom) {
            Some(slot) => {
                *slot = v;
                Ok(())
            }
            None => Err(Error::UnknownAtom(atom.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, TruthValue)> {
        self.values.iter().map(|(a, v)| (a, *v))
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Interpretation) -> bool {
        self.values.len() == other.values.len()
            && self
                .iter()
                .all(|(a, v)| other.get(a).is_some_and(|w| self.lattice.leq(v, w)))
    }

    /// `(atom text, value name)` pairs sorted by atom text.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut rows: Vec<(String, String)> = self
            .iter()
            .map(|(a, v)| (a.to_string(), self.lattice.name_of(v).to_string()))
            .collect();
        rows.sort();
        rows
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.entries()
                .into_iter()
                .map(|(a, v)| (a, serde_json::Value::String(v)))
                .collect(),
        )
    }
}

impl fmt::Display for Interpretation {
    /// One `p(a) = t` line per atom, sorted by atom text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in self.entries() {
            writeln!(f, "{a} = {v}")?;
        }
        Ok(())
    }
}

/// The homomorphic extension of `interp` to a ground formula.
pub fn valuation(interp: &Interpretation, phi: &MvFormula) -> Result<TruthValue> {
    let l = interp.lattice();
    Ok(match phi {
        MvFormula::Atom(a) if a.is_builtin() => {
            match builtin_holds(&a.predicate, &a.constants()) {
                Some(true) => l.top(),
                Some(false) => l.bottom(),
                None => return Err(Error::UnknownAtom(a.to_string())),
            }
        }
        MvFormula::Atom(a) => interp.value_of(a)?,
        MvFormula::Neg(x) => l.neg(valuation(interp, x)?),
        MvFormula::And(x, y) => l.meet(valuation(interp, x)?, valuation(interp, y)?),
        MvFormula::Or(x, y) => l.join(valuation(interp, x)?, valuation(interp, y)?),
        MvFormula::Implies(x, y) => l.implies(valuation(interp, x)?, valuation(interp, y)?),
        MvFormula::Op1(op, x) => l.apply_unary(op, valuation(interp, x)?)?,
        MvFormula::Op2(op, x, y) => l.apply_binary(op, valuation(interp, x)?, valuation(interp, y)?)?,
    })
}

fn literal_value(interp: &Interpretation, lit: &Literal) -> Result<TruthValue> {
    let v = valuation(interp, &MvFormula::Atom(lit.atom.clone()))?;
    Ok(if lit.negated { interp.lattice().neg(v) } else { v })
}

/// Join over blocks of the meet over each block's literals.
pub fn body_value(interp: &Interpretation, blocks: &[Vec<Literal>]) -> Result<TruthValue> {
    let l = interp.lattice();
    let mut acc = l.bottom();
    for block in blocks {
        let mut m = l.top();
        for lit in block {
            m = l.meet(m, literal_value(interp, lit)?);
        }
        acc = l.join(acc, m);
    }
    Ok(acc)
}

/// A fact holds when the head is at least its annotation; a rule when the
/// head is at least the body.
pub fn satisfies_rule(interp: &Interpretation, rule: &Rule) -> Result<bool> {
    let head = interp.value_of(&rule.head)?;
    let lower = match &rule.body {
        RuleBody::Fact(v) => *v,
        RuleBody::Body(blocks) => body_value(interp, blocks)?,
    };
    Ok(interp.lattice().leq(lower, head))
}

/// Ground atoms grouped into strata, lowest first. Atoms in one group are
/// mutually recursive through positive literals only.
pub fn strata(program: &Program) -> Result<Vec<Vec<Atom>>> {
    let base = program.herbrand_base();
    let mut graph: DiGraph<&Atom, bool> = DiGraph::new();
    let index: BTreeMap<&Atom, NodeIndex> = base.iter().map(|a| (a, graph.add_node(a))).collect();
    let node = |a: &Atom| {
        index
            .get(a)
            .copied()
            .ok_or_else(|| Error::UnknownAtom(a.to_string()))
    };
    for rule in &program.rules {
        let head = node(&rule.head)?;
        for lit in rule.literals() {
            if lit.atom.is_builtin() {
                continue;
            }
            graph.add_edge(node(&lit.atom)?, head, lit.negated);
        }
    }
    // Tarjan yields components sinks first; bodies must come first.
    let mut sccs = tarjan_scc(&graph);
    sccs.reverse();
    let mut component = vec![0usize; graph.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for n in scc {
            component[n.index()] = i;
        }
    }
    for e in graph.edge_indices() {
        let (from, to) = graph.edge_endpoints(e).expect("edge exists");
        if graph[e] && component[from.index()] == component[to.index()] {
            return Err(Error::NotStratified(graph[to].to_string()));
        }
    }
    Ok(sccs
        .into_iter()
        .map(|scc| {
            let mut atoms: Vec<Atom> = scc.into_iter().map(|n| graph[n].clone()).collect();
            atoms.sort();
            atoms
        })
        .collect())
}

/// The least interpretation satisfying every rule of `program`.
pub fn compute_model(program: &Program) -> Result<Interpretation> {
    compute_model_traced(program, |_| {})
}

/// As [`compute_model`], calling `step` with the interpretation after every
/// round of the consequence operator.
pub fn compute_model_traced(
    program: &Program,
    mut step: impl FnMut(&Interpretation),
) -> Result<Interpretation> {
    let program = ground(program)?;
    let lattice = program.lattice.clone();
    let mut interp = Interpretation::bottom(lattice.clone(), program.herbrand_base());
    let by_head = program.rules_by_head();

    for stratum in strata(&program)? {
        let rules: Vec<(&Atom, &Vec<&Rule>)> = stratum
            .iter()
            .filter_map(|a| by_head.get(a).map(|rs| (a, rs)))
            .collect();
        if rules.is_empty() {
            continue;
        }
        loop {
            let mut next = Vec::with_capacity(rules.len());
            for (atom, rs) in &rules {
                let mut v = lattice.bottom();
                for r in rs.iter() {
                    let lower = match &r.body {
                        RuleBody::Fact(a) => *a,
                        RuleBody::Body(blocks) => body_value(&interp, blocks)?,
                    };
                    v = lattice.join(v, lower);
                }
                next.push(((*atom).clone(), v));
            }
            let mut changed = false;
            for (atom, v) in next {
                if interp.get(&atom) != Some(v) {
                    interp.set(&atom, v)?;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            step(&interp);
        }
    }
    Ok(interp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn model(src: &str) -> Interpretation {
        compute_model(&parse_program(src).unwrap()).unwrap()
    }

    fn val(i: &Interpretation, atom: &str) -> String {
        let a = crate::syntax::parse_mv_formula(atom, i.lattice()).unwrap();
        i.lattice().name_of(valuation(i, &a).unwrap()).to_string()
    }

    #[test]
    fn facts_only() {
        let i = model("lattice belnap4.\np(a) <- @t.\nq(a) :- q(a).");
        assert_eq!(val(&i, "p(a)"), "t");
        assert_eq!(val(&i, "q(a)"), "f");
    }

    #[test]
    fn head_reaches_body_value() {
        let i = model("lattice belnap4.\nr(a) <- @top.\np(X) :- r(X).");
        assert_eq!(val(&i, "p(a)"), "top");
    }

    #[test]
    fn negation_reads_the_lower_stratum() {
        let i = model("lattice belnap4.\nr(a) <- @t.\np(X) :- ~r(X).");
        assert_eq!(val(&i, "p(a)"), "f");
    }

    #[test]
    fn valuation_examples() {
        let i = model("lattice belnap4.\np <- @t.\nq <- @bot.");
        assert_eq!(val(&i, "p and q"), "bot");
        assert_eq!(val(&i, "p"), "t");
        let i = model("lattice fuzzy:5.\np <- @0.25.");
        assert_eq!(val(&i, "~p"), "0.75");
    }

    #[test]
    fn rule_satisfaction() {
        let p = parse_program("lattice belnap4.\np(a) :- r(a).\nr(a) <- @top.").unwrap();
        let l = p.lattice.clone();
        let mut i = Interpretation::bottom(l.clone(), p.herbrand_base());
        i.set(&Atom::ground("r", ["a"]), l.value("top").unwrap()).unwrap();
        assert!(!satisfies_rule(&i, &p.rules[0]).unwrap());
        assert!(satisfies_rule(&i, &p.rules[1]).unwrap());
        i.set(&Atom::ground("r", ["a"]), l.bottom()).unwrap();
        assert!(satisfies_rule(&i, &p.rules[0]).unwrap());
    }

    #[test]
    fn duplicate_facts_join() {
        let i = model("lattice belnap4.\np <- @t.\np <- @bot.");
        assert_eq!(val(&i, "p"), "t");
        let i = model("lattice belnap4.\np <- @top.\np <- @bot.");
        assert_eq!(val(&i, "p"), "t");
    }

    #[test]
    fn recursion_reaches_a_fixpoint() {
        let i = model(
            "lattice fuzzy:5.\ne(a,b) <- @0.75.\ne(b,c) <- @0.5.\n\
             path(X,Y) :- e(X,Y); e(X,Z), path(Z,Y).",
        );
        assert_eq!(val(&i, "path(a,c)"), "0.5");
        assert_eq!(val(&i, "path(a,b)"), "0.75");
        assert_eq!(val(&i, "path(c,a)"), "0");
    }

    #[test]
    fn negative_cycle_is_rejected() {
        let p = parse_program("lattice belnap4.\np :- ~q.\nq :- ~p.").unwrap();
        assert!(matches!(compute_model(&p), Err(Error::NotStratified(_))));
    }

    #[test]
    fn dump_formats() {
        let i = model("lattice belnap4.\nq(b) <- @top.\np(a) <- @t.");
        assert_eq!(
            i.to_string(),
            "p(a) = t\np(b) = f\nq(a) = f\nq(b) = top\n"
        );
        assert_eq!(
            i.to_json().to_string(),
            r#"{"p(a)":"t","p(b)":"f","q(a)":"f","q(b)":"top"}"#
        );
    }
}
