//! Finite bounded lattices of truth values, stored extensionally as tables.
//!
//! A [`LatticeSpec`] carries the truth ordering, meet, join, the antitonic
//! negation `~`, the residuated implication `->` and any number of extra
//! named connectives. Elements are addressed by [`TruthValue`] indices into
//! the carrier; their canonical names come from the spec.

mod builtin;
mod check;
mod decl;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use builtin::{builtin_lattice, LatticeSelector};
pub use check::{check_lattice, Axiom, AxiomViolation};
pub use decl::parse_lattice_decl;

/// Largest carrier a lattice may have. Tables are dense `n * n` arrays.
pub const MAX_CARRIER: usize = 2048;

/// One element of a lattice carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthValue(u16);

impl TruthValue {
    pub fn new(index: usize) -> Self {
        TruthValue(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An additional connective of the signature, beyond meet, join, `~` and `->`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Connective {
    Unary(Vec<TruthValue>),
    /// Row-major `n * n` table.
    Binary(Vec<TruthValue>),
}

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Unary(_) => 1,
            Connective::Binary(_) => 2,
        }
    }
}

/// Unchecked table data. Useful for building a spec by hand, or for
/// deliberately corrupting one before handing it to [`check_lattice`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTables {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<bool>,
    pub meet: Vec<TruthValue>,
    pub join: Vec<TruthValue>,
    pub neg: Vec<TruthValue>,
    pub implies: Vec<TruthValue>,
    pub extras: BTreeMap<String, Connective>,
    pub bottom: TruthValue,
    pub top: TruthValue,
}

/// A finite bounded lattice together with its connective set.
///
/// Immutable once built. Cheap to share behind an [`Arc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    tables: LatticeTables,
    aliases: BTreeMap<String, TruthValue>,
}

impl LatticeSpec {
    /// Wraps raw tables without validating them.
    pub fn from_tables(tables: LatticeTables) -> Self {
        LatticeSpec {
            tables,
            aliases: BTreeMap::new(),
        }
    }

    /// Builds a lattice from its order relation alone: meet and join are the
    /// greatest lower and least upper bounds, `->` is the residuum. The result
    /// is validated with [`check_lattice`].
    pub fn from_order(
        name: impl Into<String>,
        elements: Vec<String>,
        leq: Vec<bool>,
        neg: Vec<TruthValue>,
        extras: BTreeMap<String, Connective>,
    ) -> Result<Self> {
        let name = name.into();
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidLattice {
                name,
                violations: vec![AxiomViolation::new(Axiom::Totality, "carrier is empty", [])],
            });
        }
        if n > MAX_CARRIER {
            return Err(Error::LatticeTooLarge {
                name,
                size: n,
                limit: MAX_CARRIER,
            });
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        let mut violations = Vec::new();

        let mut bound = |a: usize, b: usize, lower: bool| -> Option<TruthValue> {
            let candidates: Vec<usize> = (0..n)
                .filter(|&c| if lower { le(c, a) && le(c, b) } else { le(a, c) && le(b, c) })
                .collect();
            let best = candidates.iter().copied().find(|&c| {
                candidates
                    .iter()
                    .all(|&d| if lower { le(d, c) } else { le(c, d) })
            });
            if best.is_none() {
                violations.push(AxiomViolation::new(
                    if lower { Axiom::MeetIsGlb } else { Axiom::JoinIsLub },
                    format!(
                        "no {} bound for ({}, {})",
                        if lower { "greatest lower" } else { "least upper" },
                        elements[a],
                        elements[b]
                    ),
                    [a, b],
                ));
            }
            best.map(TruthValue::new)
        };

        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(bound(a, b, true).unwrap_or(TruthValue(0)));
                join.push(bound(a, b, false).unwrap_or(TruthValue(0)));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidLattice { name, violations });
        }

        let bottom = (0..n).find(|&b| (0..n).all(|a| le(b, a)));
        let top = (0..n).find(|&t| (0..n).all(|a| le(a, t)));
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(Error::InvalidLattice {
                name,
                violations: vec![AxiomViolation::new(
                    Axiom::Bounded,
                    "order has no bottom or no top",
                    [],
                )],
            });
        };

        let mut spec = LatticeSpec::from_tables(LatticeTables {
            name,
            elements,
            leq,
            meet,
            join,
            neg,
            implies: Vec::new(),
            extras,
            bottom: TruthValue::new(bottom),
            top: TruthValue::new(top),
        });
        // Residuum errors surface through check_lattice below.
        let mut implies = Vec::with_capacity(n * n);
        for a in spec.values() {
            for b in spec.values() {
                implies.push(spec.residuum(a, b).unwrap_or(spec.tables.top));
            }
        }
        spec.tables.implies = implies;
        spec.validate()
    }

    /// Runs [`check_lattice`] and fails on any violation.
    pub fn validate(self) -> Result<Self> {
        let violations = check_lattice(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidLattice {
                name: self.tables.name.clone(),
                violations,
            })
        }
    }

    pub fn with_alias(mut self, alias: &str, value: TruthValue) -> Self {
        self.aliases.insert(alias.to_string(), value);
        self
    }

    pub fn tables(&self) -> &LatticeTables {
        &self.tables
    }

    pub fn into_tables(self) -> LatticeTables {
        self.tables
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn name(&self) -> &str {
        &self.tables.name
    }

    pub fn len(&self) -> usize {
        self.tables.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.elements.is_empty()
    }

    /// The carrier in declaration order.
    pub fn values(&self) -> impl DoubleEndedIterator<Item = TruthValue> + ExactSizeIterator + Clone {
        (0..self.len()).map(TruthValue::new)
    }

    pub fn bottom(&self) -> TruthValue {
        self.tables.bottom
    }

    pub fn top(&self) -> TruthValue {
        self.tables.top
    }

    pub fn name_of(&self, v: TruthValue) -> &str {
        &self.tables.elements[v.index()]
    }

    /// Resolves a value lexeme: canonical name, alias, or a numeric spelling
    /// that normalizes to a canonical name (`0.250` for `0.25`).
    pub fn value(&self, text: &str) -> Option<TruthValue> {
        let text = text.trim();
        if let Some(i) = self.tables.elements.iter().position(|e| e == text) {
            return Some(TruthValue::new(i));
        }
        if let Some(&v) = self.aliases.get(text) {
            return Some(v);
        }
        let normalized = normalize_numeric(text)?;
        self.tables
            .elements
            .iter()
            .position(|e| *e == normalized)
            .map(TruthValue::new)
    }

    pub fn value_or_err(&self, text: &str) -> Result<TruthValue> {
        self.value(text)
            .ok_or_else(|| Error::UnknownElement(text.to_string()))
    }

    fn idx2(&self, a: TruthValue, b: TruthValue) -> usize {
        a.index() * self.len() + b.index()
    }

    pub fn leq(&self, a: TruthValue, b: TruthValue) -> bool {
        self.tables.leq[self.idx2(a, b)]
    }

    pub fn lt(&self, a: TruthValue, b: TruthValue) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.tables.meet[self.idx2(a, b)]
    }

    pub fn join(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.tables.join[self.idx2(a, b)]
    }

    pub fn neg(&self, a: TruthValue) -> TruthValue {
        self.tables.neg[a.index()]
    }

    /// The stored implication table.
    pub fn implies(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.tables.implies[self.idx2(a, b)]
    }

    pub fn meet_all(&self, values: impl IntoIterator<Item = TruthValue>) -> TruthValue {
        values.into_iter().fold(self.top(), |acc, v| self.meet(acc, v))
    }

    pub fn join_all(&self, values: impl IntoIterator<Item = TruthValue>) -> TruthValue {
        values
            .into_iter()
            .fold(self.bottom(), |acc, v| self.join(acc, v))
    }

    /// `a -> b` as the join of `{c | c /\ a <= b}`, by enumerating the carrier.
    pub fn residuum(&self, a: TruthValue, b: TruthValue) -> Result<TruthValue> {
        let candidates = self.values().filter(|&c| self.leq(self.meet(c, a), b));
        let join = self.join_all(candidates);
        if self.leq(self.meet(join, a), b) {
            Ok(join)
        } else {
            Err(Error::NotResiduated {
                a: self.name_of(a).to_string(),
                b: self.name_of(b).to_string(),
                join: self.name_of(join).to_string(),
            })
        }
    }

    pub fn extras(&self) -> &BTreeMap<String, Connective> {
        &self.tables.extras
    }

    pub fn extra(&self, name: &str) -> Option<&Connective> {
        self.tables.extras.get(name)
    }

    pub fn apply_unary(&self, name: &str, a: TruthValue) -> Result<TruthValue> {
        match self.tables.extras.get(name) {
            Some(Connective::Unary(t)) => Ok(t[a.index()]),
            _ => Err(Error::UnknownConnective(format!("{name}/1"))),
        }
    }

    pub fn apply_binary(&self, name: &str, a: TruthValue, b: TruthValue) -> Result<TruthValue> {
        match self.tables.extras.get(name) {
            Some(Connective::Binary(t)) => Ok(t[self.idx2(a, b)]),
            _ => Err(Error::UnknownConnective(format!("{name}/2"))),
        }
    }
}

impl fmt::Display for LatticeSpec {
    /// Renders the spec as a lattice declaration (covering pairs only).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: TruthValue| self.name_of(v);
        writeln!(f, "lattice {} {{", self.name())?;
        write!(f, "  elements:")?;
        for v in self.values() {
            write!(f, " {}", name(v))?;
        }
        writeln!(f, ";")?;
        for a in self.values() {
            for b in self.values() {
                let covers = self.lt(a, b)
                    && !self.values().any(|c| self.lt(a, c) && self.lt(c, b));
                if covers {
                    writeln!(f, "  leq: {} <= {};", name(a), name(b))?;
                }
            }
        }
        for a in self.values() {
            writeln!(f, "  neg: {} -> {};", name(a), name(self.neg(a)))?;
        }
        for (op, table) in self.extras() {
            match table {
                Connective::Unary(t) => {
                    for a in self.values() {
                        writeln!(f, "  op {op}/1: {} -> {};", name(a), name(t[a.index()]))?;
                    }
                }
                Connective::Binary(t) => {
                    for a in self.values() {
                        for b in self.values() {
                            writeln!(
                                f,
                                "  op {op}/2: ({}, {}) -> {};",
                                name(a),
                                name(b),
                                name(t[self.idx2(a, b)])
                            )?;
                        }
                    }
                }
            }
        }
        write!(f, "}}")
    }
}

/// Canonical decimal text: at most four fractional digits, no trailing zeros.
pub fn format_decimal(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Rewrites every number inside a lexeme to canonical form and strips
/// whitespace. Returns `None` when the lexeme has no digits.
fn normalize_numeric(text: &str) -> Option<String> {
    if !text.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut out = String::new();
    let mut number = String::new();
    let flush = |number: &mut String, out: &mut String| -> Option<()> {
        if !number.is_empty() {
            out.push_str(&format_decimal(number.parse::<f64>().ok()?));
            number.clear();
        }
        Some(())
    };
    for c in text.chars() {
        if c.is_ascii_digit() || c == '.' {
            number.push(c);
        } else {
            flush(&mut number, &mut out)?;
            if !c.is_whitespace() {
                out.push(c);
            }
        }
    }
    flush(&mut number, &mut out)?;
    Some(out)
}
