use std::fmt;

use serde::Serialize;

use super::{Connective, LatticeSpec, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Totality,
    PartialOrder,
    MeetIsGlb,
    JoinIsLub,
    Commutativity,
    Associativity,
    Idempotence,
    Absorption,
    Bounded,
    NegationBounds,
    NegationAntitone,
    Residuum,
    ResiduumTop,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Totality => "totality",
            Axiom::PartialOrder => "partial order",
            Axiom::MeetIsGlb => "meet is glb",
            Axiom::JoinIsLub => "join is lub",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Idempotence => "idempotence",
            Axiom::Absorption => "absorption",
            Axiom::Bounded => "boundedness",
            Axiom::NegationBounds => "negation bounds",
            Axiom::NegationAntitone => "negation antitone",
            Axiom::Residuum => "residuum",
            Axiom::ResiduumTop => "residuum top",
        };
        f.write_str(s)
    }
}

/// One failed instance of a lattice axiom, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub message: String,
    pub witness: Vec<usize>,
}

impl AxiomViolation {
    pub(crate) fn new(
        axiom: Axiom,
        message: impl Into<String>,
        witness: impl IntoIterator<Item = usize>,
    ) -> Self {
        AxiomViolation {
            axiom,
            message: message.into(),
            witness: witness.into_iter().collect(),
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.message)
    }
}

/// Checks every lattice invariant exhaustively. An empty result means the
/// spec is a bounded lattice with an antitone negation that swaps the bounds
/// and an implication equal to the residuum.
pub fn check_lattice(spec: &LatticeSpec) -> Vec<AxiomViolation> {
    let t = spec.tables();
    let n = t.elements.len();
    let mut out = Vec::new();

    let in_range = |v: &TruthValue| v.index() < n;
    let mut sized = |what: &str, len: usize, want: usize, ok: bool| {
        if len != want || !ok {
            out.push(AxiomViolation::new(
                Axiom::Totality,
                format!("{what} table has {len} entries (want {want}) or values outside the carrier"),
                [],
            ));
        }
    };
    sized("leq", t.leq.len(), n * n, true);
    sized("meet", t.meet.len(), n * n, t.meet.iter().all(in_range));
    sized("join", t.join.len(), n * n, t.join.iter().all(in_range));
    sized("neg", t.neg.len(), n, t.neg.iter().all(in_range));
    sized("implies", t.implies.len(), n * n, t.implies.iter().all(in_range));
    for (op, table) in &t.extras {
        match table {
            Connective::Unary(v) => sized(op, v.len(), n, v.iter().all(in_range)),
            Connective::Binary(v) => sized(op, v.len(), n * n, v.iter().all(in_range)),
        }
    }
    if n == 0 || !in_range(&t.bottom) || !in_range(&t.top) {
        out.push(AxiomViolation::new(
            Axiom::Totality,
            "bottom or top is not in the carrier",
            [],
        ));
    }
    if !out.is_empty() {
        return out;
    }

    let name = |v: TruthValue| spec.name_of(v);
    let vals: Vec<TruthValue> = spec.values().collect();

    for &a in &vals {
        if !spec.leq(a, a) {
            out.push(AxiomViolation::new(
                Axiom::PartialOrder,
                format!("not reflexive at {}", name(a)),
                [a.index()],
            ));
        }
        for &b in &vals {
            if a != b && spec.leq(a, b) && spec.leq(b, a) {
                out.push(AxiomViolation::new(
                    Axiom::PartialOrder,
                    format!("not antisymmetric at ({}, {})", name(a), name(b)),
                    [a.index(), b.index()],
                ));
            }
            for &c in &vals {
                if spec.leq(a, b) && spec.leq(b, c) && !spec.leq(a, c) {
                    out.push(AxiomViolation::new(
                        Axiom::PartialOrder,
                        format!("not transitive at ({}, {}, {})", name(a), name(b), name(c)),
                        [a.index(), b.index(), c.index()],
                    ));
                }
            }
        }
    }

    for &a in &vals {
        for &b in &vals {
            let m = spec.meet(a, b);
            let j = spec.join(a, b);
            let is_glb = spec.leq(m, a)
                && spec.leq(m, b)
                && vals
                    .iter()
                    .all(|&c| !(spec.leq(c, a) && spec.leq(c, b)) || spec.leq(c, m));
            if !is_glb {
                out.push(AxiomViolation::new(
                    Axiom::MeetIsGlb,
                    format!("meet({}, {}) = {} is not the greatest lower bound", name(a), name(b), name(m)),
                    [a.index(), b.index()],
                ));
            }
            let is_lub = spec.leq(a, j)
                && spec.leq(b, j)
                && vals
                    .iter()
                    .all(|&c| !(spec.leq(a, c) && spec.leq(b, c)) || spec.leq(j, c));
            if !is_lub {
                out.push(AxiomViolation::new(
                    Axiom::JoinIsLub,
                    format!("join({}, {}) = {} is not the least upper bound", name(a), name(b), name(j)),
                    [a.index(), b.index()],
                ));
            }
            if m != spec.meet(b, a) || j != spec.join(b, a) {
                out.push(AxiomViolation::new(
                    Axiom::Commutativity,
                    format!("meet or join not commutative at ({}, {})", name(a), name(b)),
                    [a.index(), b.index()],
                ));
            }
            if spec.meet(a, j) != a || spec.join(a, m) != a {
                out.push(AxiomViolation::new(
                    Axiom::Absorption,
                    format!("absorption fails at ({}, {})", name(a), name(b)),
                    [a.index(), b.index()],
                ));
            }
            for &c in &vals {
                if spec.meet(m, c) != spec.meet(a, spec.meet(b, c))
                    || spec.join(j, c) != spec.join(a, spec.join(b, c))
                {
                    out.push(AxiomViolation::new(
                        Axiom::Associativity,
                        format!("meet or join not associative at ({}, {}, {})", name(a), name(b), name(c)),
                        [a.index(), b.index(), c.index()],
                    ));
                }
            }
        }
        if spec.meet(a, a) != a || spec.join(a, a) != a {
            out.push(AxiomViolation::new(
                Axiom::Idempotence,
                format!("meet or join not idempotent at {}", name(a)),
                [a.index()],
            ));
        }
        if !spec.leq(spec.bottom(), a) || !spec.leq(a, spec.top()) {
            out.push(AxiomViolation::new(
                Axiom::Bounded,
                format!("{} is not between bottom and top", name(a)),
                [a.index()],
            ));
        }
    }

    let (bot, top) = (spec.bottom(), spec.top());
    if spec.neg(bot) != top {
        out.push(AxiomViolation::new(
            Axiom::NegationBounds,
            "neg(bottom) ≠ top",
            [bot.index()],
        ));
    }
    if spec.neg(top) != bot {
        out.push(AxiomViolation::new(
            Axiom::NegationBounds,
            "neg(top) ≠ bottom",
            [top.index()],
        ));
    }
    for &a in &vals {
        for &b in &vals {
            if spec.leq(a, b) && !spec.leq(spec.neg(b), spec.neg(a)) {
                out.push(AxiomViolation::new(
                    Axiom::NegationAntitone,
                    format!(
                        "{} <= {} but neg({}) = {} is not <= neg({}) = {}",
                        name(a),
                        name(b),
                        name(b),
                        name(spec.neg(b)),
                        name(a),
                        name(spec.neg(a))
                    ),
                    [a.index(), b.index()],
                ));
            }
        }
    }

    for &a in &vals {
        for &b in &vals {
            let stored = spec.implies(a, b);
            match spec.residuum(a, b) {
                Ok(r) if r == stored => {}
                Ok(r) => out.push(AxiomViolation::new(
                    Axiom::Residuum,
                    format!(
                        "implies({}, {}) = {} but the residuum is {}",
                        name(a),
                        name(b),
                        name(stored),
                        name(r)
                    ),
                    [a.index(), b.index()],
                )),
                Err(e) => out.push(AxiomViolation::new(
                    Axiom::Residuum,
                    e.to_string(),
                    [a.index(), b.index()],
                )),
            }
            if (stored == top) != spec.leq(a, b) {
                out.push(AxiomViolation::new(
                    Axiom::ResiduumTop,
                    format!(
                        "implies({}, {}) = {} but {} <= {} is {}",
                        name(a),
                        name(b),
                        name(stored),
                        name(a),
                        name(b),
                        spec.leq(a, b)
                    ),
                    [a.index(), b.index()],
                ));
            }
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{builtin_lattice, LatticeSelector};

    fn belnap() -> LatticeSpec {
        builtin_lattice(&LatticeSelector::Belnap4).unwrap()
    }

    #[test]
    fn builtins_are_clean() {
        assert_eq!(check_lattice(&belnap()), vec![]);
    }

    #[test]
    fn patched_meet_is_reported_at_the_patched_pair() {
        let l = belnap();
        let (top, bot, t) = (l.value("top").unwrap(), l.value("bot").unwrap(), l.value("t").unwrap());
        let mut tables = l.into_tables();
        let n = tables.elements.len();
        tables.meet[top.index() * n + bot.index()] = t;
        let report = check_lattice(&LatticeSpec::from_tables(tables));
        let at_pair = |axiom| {
            report
                .iter()
                .any(|v| v.axiom == axiom && v.witness == vec![top.index(), bot.index()])
        };
        assert!(at_pair(Axiom::MeetIsGlb), "{report:?}");
        assert!(at_pair(Axiom::Absorption), "{report:?}");
    }

    #[test]
    fn patched_negation_of_top() {
        let l = belnap();
        let t = l.value("t").unwrap();
        let mut tables = l.into_tables();
        tables.neg[t.index()] = t;
        let report = check_lattice(&LatticeSpec::from_tables(tables));
        assert!(
            report.iter().any(|v| v.message == "neg(top) ≠ bottom"),
            "{report:?}"
        );
    }

    #[test]
    fn short_table_is_a_totality_violation() {
        let mut tables = belnap().into_tables();
        tables.join.pop();
        let report = check_lattice(&LatticeSpec::from_tables(tables));
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].axiom, Axiom::Totality);
    }

    #[test]
    fn wrong_implication_entry() {
        let l = belnap();
        let (t, f) = (l.value("t").unwrap(), l.value("f").unwrap());
        let mut tables = l.into_tables();
        let n = tables.elements.len();
        tables.implies[t.index() * n + f.index()] = t;
        let report = check_lattice(&LatticeSpec::from_tables(tables));
        assert!(report.iter().any(|v| v.axiom == Axiom::Residuum));
        assert!(report.iter().any(|v| v.axiom == Axiom::ResiduumTop));
    }
}
