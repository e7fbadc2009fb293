use std::collections::BTreeMap;

use super::ast::*;
use crate::error::{Error, Result};

/// Replaces every rule by its instances over the program's constants.
///
/// Built-in literals are decided on the spot: a true one is dropped, a false
/// one removes its disjunct. A rule left without disjuncts disappears; one
/// with an emptied disjunct becomes a fact at top.
pub fn ground(program: &Program) -> Result<Program> {
    let constants: Vec<String> = program.constants.iter().cloned().collect();
    let mut out = Program {
        rules: Vec::new(),
        ..program.clone()
    };
    for rule in &program.rules {
        out.rules.extend(ground_rule(rule, &constants, program)?);
    }
    Ok(out)
}

/// Ground instances of one rule, in lexicographic order of substitutions.
pub fn ground_rule(rule: &Rule, constants: &[String], program: &Program) -> Result<Vec<Rule>> {
    let vars = rule.variables();
    if vars.is_empty() {
        return Ok(decide_builtins(rule.clone(), program).into_iter().collect());
    }
    if constants.is_empty() {
        return Err(Error::EmptyConstants);
    }
    let mut out = Vec::new();
    for tuple in tuples(constants.len(), vars.len()) {
        let g: BTreeMap<String, String> = vars
            .iter()
            .cloned()
            .zip(tuple.iter().map(|&i| constants[i].clone()))
            .collect();
        let instance = Rule {
            head: rule.head.substitute(&g),
            body: match &rule.body {
                RuleBody::Fact(v) => RuleBody::Fact(*v),
                RuleBody::Body(blocks) => RuleBody::Body(
                    blocks
                        .iter()
                        .map(|b| {
                            b.iter()
                                .map(|l| Literal {
                                    atom: l.atom.substitute(&g),
                                    negated: l.negated,
                                })
                                .collect()
                        })
                        .collect(),
                ),
            },
        };
        out.extend(decide_builtins(instance, program));
    }
    Ok(out)
}

fn decide_builtins(rule: Rule, program: &Program) -> Option<Rule> {
    let RuleBody::Body(blocks) = &rule.body else {
        return Some(rule);
    };
    if !rule.literals().any(|l| l.atom.is_builtin()) {
        return Some(rule);
    }
    let mut kept = Vec::new();
    for block in blocks {
        let mut lits = Vec::new();
        let mut alive = true;
        for l in block {
            match builtin_holds(&l.atom.predicate, &l.atom.constants()) {
                Some(holds) if holds != l.negated => {}
                Some(_) => {
                    alive = false;
                    break;
                }
                None => lits.push(l.clone()),
            }
        }
        if !alive {
            continue;
        }
        if lits.is_empty() {
            return Some(Rule::fact(rule.head, program.lattice.top()));
        }
        kept.push(lits);
    }
    if kept.is_empty() {
        None
    } else {
        Some(Rule::rule(rule.head, kept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn show(p: &Program) -> Vec<String> {
        p.rules.iter().map(|r| r.show(&p.lattice).to_string()).collect()
    }

    #[test]
    fn substitutes_over_constants() {
        let p = parse_program("lattice belnap4.\nr(a) <- @t.\nr(b) <- @f.\np(X) :- r(X).").unwrap();
        let g = ground(&p).unwrap();
        assert_eq!(
            show(&g),
            ["r(a) <- @t.", "r(b) <- @f.", "p(a) :- r(a).", "p(b) :- r(b)."]
        );
    }

    #[test]
    fn grounding_is_idempotent() {
        let p = parse_program("lattice belnap4.\nr(a) <- @t.\np(X, Y) :- r(X), ~r(Y).").unwrap();
        let once = ground(&p).unwrap();
        assert_eq!(ground(&once).unwrap(), once);
    }

    #[test]
    fn two_variables_three_constants() {
        let p = parse_program("lattice belnap4.\nr(a) <- @t.\nr(b) <- @t.\nr(c) <- @t.\np(X, Y) :- r(X), r(Y).").unwrap();
        assert_eq!(ground(&p).unwrap().rules.len(), 3 + 9);
    }

    #[test]
    fn builtins_are_decided() {
        let p = parse_program("lattice belnap4.\nr(a) <- @t.\nr(b) <- @t.\np(X) :- r(X), X = a.\nq(X) :- ~X = a; r(X).\ns(X) :- X <= a.").unwrap();
        let g = ground(&p).unwrap();
        assert_eq!(
            show(&g),
            [
                "r(a) <- @t.",
                "r(b) <- @t.",
                "p(a) :- r(a).",
                "q(a) :- r(a).",
                "q(b) <- @t.",
                "s(a) <- @t.",
            ]
        );
    }

    #[test]
    fn variables_without_constants() {
        let p = parse_program("lattice belnap4.\np(X) :- q(X).").unwrap();
        assert!(matches!(ground(&p), Err(Error::EmptyConstants)));
    }
}
