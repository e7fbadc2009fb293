use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::lattice::{LatticeSpec, TruthValue};

/// Built-in two-valued predicates with a fixed extension over constants.
pub const BUILTIN_EQ: &str = "=";
pub const BUILTIN_LEQ: &str = "<=";

pub fn is_builtin(predicate: &str) -> bool {
    predicate == BUILTIN_EQ || predicate == BUILTIN_LEQ
}

/// Extension of a built-in predicate on ground arguments. `<=` compares
/// constant names lexicographically.
pub fn builtin_holds(predicate: &str, args: &[String]) -> Option<bool> {
    match (predicate, args) {
        (BUILTIN_EQ, [a, b]) => Some(a == b),
        (BUILTIN_LEQ, [a, b]) => Some(a <= b),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A ground atom from constant names.
    pub fn ground<S: Into<String>>(predicate: &str, args: impl IntoIterator<Item = S>) -> Self {
        Atom::new(
            predicate,
            args.into_iter().map(|a| Term::Const(a.into())).collect(),
        )
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }

    pub fn is_builtin(&self) -> bool {
        is_builtin(&self.predicate)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Constant names of a ground atom. Variables are returned by name.
    pub fn constants(&self) -> Vec<String> {
        self.args.iter().map(|t| t.to_string()).collect()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }

    pub fn substitute(&self, g: &BTreeMap<String, String>) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => g
                        .get(v)
                        .map(|c| Term::Const(c.clone()))
                        .unwrap_or_else(|| t.clone()),
                    Term::Const(_) => t.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_builtin() && self.args.len() == 2 {
            return write!(f, "{} {} {}", self.args[0], self.predicate, self.args[1]);
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Right-hand side of a clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleBody {
    /// `p(c) <- @alpha`.
    Fact(TruthValue),
    /// Disjunction of conjunctions of literals. Never empty, nor any block.
    Body(Vec<Vec<Literal>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: RuleBody,
}

impl Rule {
    pub fn fact(head: Atom, value: TruthValue) -> Self {
        Rule {
            head,
            body: RuleBody::Fact(value),
        }
    }

    #[allow(clippy::self_named_constructors)]
    pub fn rule(head: Atom, disjuncts: Vec<Vec<Literal>>) -> Self {
        Rule {
            head,
            body: RuleBody::Body(disjuncts),
        }
    }

    pub fn is_fact(&self) -> bool {
        matches!(self.body, RuleBody::Fact(_))
    }

    pub fn disjuncts(&self) -> &[Vec<Literal>] {
        match &self.body {
            RuleBody::Body(d) => d,
            RuleBody::Fact(_) => &[],
        }
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.disjuncts().iter().flatten()
    }

    /// Variables in order of first occurrence, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        let atoms = std::iter::once(&self.head).chain(self.literals().map(|l| &l.atom));
        for a in atoms {
            for v in a.variables() {
                if !seen.iter().any(|s| s == v) {
                    seen.push(v.to_string());
                }
            }
        }
        seen
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.literals().all(|l| l.atom.is_ground())
    }

    /// The body as a many-valued formula: join over blocks of meets over
    /// literals. `None` for facts.
    pub fn body_formula(&self) -> Option<MvFormula> {
        let RuleBody::Body(blocks) = &self.body else {
            return None;
        };
        let block = |b: &Vec<Literal>| {
            b.iter()
                .map(|l| {
                    let a = MvFormula::Atom(l.atom.clone());
                    if l.negated {
                        MvFormula::Neg(Box::new(a))
                    } else {
                        a
                    }
                })
                .reduce(|x, y| MvFormula::And(Box::new(x), Box::new(y)))
                .expect("blocks are non-empty")
        };
        blocks
            .iter()
            .map(block)
            .reduce(|x, y| MvFormula::Or(Box::new(x), Box::new(y)))
    }

    /// The clause as a thesis (`head <- @alpha` or `head :- body`).
    pub fn to_thesis(&self) -> Thesis {
        let head = MvFormula::Atom(self.head.clone());
        match &self.body {
            RuleBody::Fact(v) => Thesis::Annotated(head, *v),
            RuleBody::Body(_) => Thesis::Rule(head, self.body_formula().expect("rule body")),
        }
    }
}

/// A program: clauses over a lattice of truth values, with the predicate
/// arities and constants they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub lattice: Arc<LatticeSpec>,
    /// The selector text from the `lattice` line, e.g. `belnap4`.
    pub lattice_decl: String,
    pub rules: Vec<Rule>,
    pub predicates: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Program {
    pub fn new(lattice: Arc<LatticeSpec>, lattice_decl: impl Into<String>) -> Self {
        Program {
            lattice,
            lattice_decl: lattice_decl.into(),
            rules: Vec::new(),
            predicates: BTreeMap::new(),
            constants: BTreeSet::new(),
        }
    }

    /// Adds a rule, registering its predicates and constants. Arity
    /// mismatches are reported.
    pub fn push(&mut self, rule: Rule) -> crate::Result<()> {
        let atoms: Vec<Atom> = std::iter::once(rule.head.clone())
            .chain(rule.literals().map(|l| l.atom.clone()))
            .collect();
        for a in &atoms {
            if !a.is_builtin() {
                self.declare(&a.predicate, a.arity())?;
            }
            for t in &a.args {
                if let Term::Const(c) = t {
                    self.constants.insert(c.clone());
                }
            }
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn declare(&mut self, predicate: &str, arity: usize) -> crate::Result<()> {
        match self.predicates.get(predicate) {
            Some(&declared) if declared != arity => Err(crate::Error::Arity {
                predicate: predicate.to_string(),
                declared,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(predicate.to_string(), arity);
                Ok(())
            }
        }
    }

    /// Every ground atom over the declared predicates and constants, sorted.
    pub fn herbrand_base(&self) -> Vec<Atom> {
        let consts: Vec<&String> = self.constants.iter().collect();
        let mut out: Vec<Atom> = self
            .predicates
            .iter()
            .flat_map(|(p, &arity)| {
                tuples(consts.len(), arity)
                    .map(|t| Atom::ground(p, t.iter().map(|&i| consts[i].clone())))
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort();
        out
    }

    /// Ground rules grouped by head, in head order.
    pub fn rules_by_head(&self) -> BTreeMap<&Atom, Vec<&Rule>> {
        let mut map: BTreeMap<&Atom, Vec<&Rule>> = BTreeMap::new();
        for r in &self.rules {
            map.entry(&r.head).or_default().push(r);
        }
        map
    }
}

/// A many-valued formula over atoms and the lattice connectives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MvFormula {
    Atom(Atom),
    Neg(Box<MvFormula>),
    And(Box<MvFormula>, Box<MvFormula>),
    Or(Box<MvFormula>, Box<MvFormula>),
    /// `a -> b`. `b <- a` parses to the same node.
    Implies(Box<MvFormula>, Box<MvFormula>),
    /// Extra unary connective of the lattice, `#name(x)`.
    Op1(String, Box<MvFormula>),
    /// Extra binary connective of the lattice, `#name(x, y)`.
    Op2(String, Box<MvFormula>, Box<MvFormula>),
}

impl MvFormula {
    pub fn atom(a: Atom) -> Self {
        MvFormula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        MvFormula::Neg(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        MvFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        MvFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        MvFormula::Implies(Box::new(self), Box::new(other))
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            MvFormula::Atom(a) => f(a),
            MvFormula::Neg(x) | MvFormula::Op1(_, x) => x.visit_atoms(f),
            MvFormula::And(x, y)
            | MvFormula::Or(x, y)
            | MvFormula::Implies(x, y)
            | MvFormula::Op2(_, x, y) => {
                x.visit_atoms(f);
                y.visit_atoms(f);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            MvFormula::Atom(_) => 0,
            MvFormula::Neg(x) | MvFormula::Op1(_, x) => 1 + x.depth(),
            MvFormula::And(x, y)
            | MvFormula::Or(x, y)
            | MvFormula::Implies(x, y)
            | MvFormula::Op2(_, x, y) => 1 + x.depth().max(y.depth()),
        }
    }

    pub fn substitute(&self, g: &BTreeMap<String, String>) -> MvFormula {
        let s = |x: &MvFormula| Box::new(x.substitute(g));
        match self {
            MvFormula::Atom(a) => MvFormula::Atom(a.substitute(g)),
            MvFormula::Neg(x) => MvFormula::Neg(s(x)),
            MvFormula::And(x, y) => MvFormula::And(s(x), s(y)),
            MvFormula::Or(x, y) => MvFormula::Or(s(x), s(y)),
            MvFormula::Implies(x, y) => MvFormula::Implies(s(x), s(y)),
            MvFormula::Op1(o, x) => MvFormula::Op1(o.clone(), s(x)),
            MvFormula::Op2(o, x, y) => MvFormula::Op2(o.clone(), s(x), s(y)),
        }
    }

    /// Every subformula, this one included, children before parents.
    pub fn subformulas(&self) -> Vec<&MvFormula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a MvFormula>) {
        match self {
            MvFormula::Atom(_) => {}
            MvFormula::Neg(x) | MvFormula::Op1(_, x) => x.collect_subformulas(out),
            MvFormula::And(x, y)
            | MvFormula::Or(x, y)
            | MvFormula::Implies(x, y)
            | MvFormula::Op2(_, x, y) => {
                x.collect_subformulas(out);
                y.collect_subformulas(out);
            }
        }
        out.push(self);
    }
}

impl fmt::Display for MvFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvFormula::Atom(a) if a.is_builtin() => write!(f, "({a})"),
            MvFormula::Atom(a) => write!(f, "{a}"),
            MvFormula::Neg(x) => write!(f, "~{x}"),
            MvFormula::And(x, y) => write!(f, "({x} and {y})"),
            MvFormula::Or(x, y) => write!(f, "({x} or {y})"),
            MvFormula::Implies(x, y) => write!(f, "({x} -> {y})"),
            MvFormula::Op1(o, x) => write!(f, "#{o}({x})"),
            MvFormula::Op2(o, x, y) => write!(f, "#{o}({x}, {y})"),
        }
    }
}

/// A member of a thesis set, or the argument of a `box_gamma`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Thesis {
    /// `head <- @alpha`: satisfied when the head's value is at least alpha.
    Annotated(MvFormula, TruthValue),
    /// `head :- body`: satisfied when the head's value is at least the body's.
    Rule(MvFormula, MvFormula),
    /// A formula on its own; only meaningful against designated values.
    Bare(MvFormula),
}

/// Value of a flattened atom's truth attribute: a lattice element or the
/// error mark `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reflected {
    Value(TruthValue),
    Error,
}

/// `p_F(c1, ..., cn, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatAtom {
    /// Name of the original predicate `p`, without the `_F` suffix.
    pub predicate: String,
    pub args: Vec<Term>,
    pub value: Reflected,
}

/// Formulas of the two-valued reductions.
///
/// Which operators are meaningful depends on the model they are evaluated
/// in; the evaluators reject the rest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    /// A many-valued atom, true at the world equal to its value.
    Plain(Atom),
    /// `[alpha]p(c)`.
    Modal(TruthValue, Atom),
    Flat(FlatAtom),
    /// `E(phi)`, encapsulated against the model's semantic reflection.
    Encap(MvFormula),
    NegA(Box<ModalFormula>),
    AndA(Box<ModalFormula>, Box<ModalFormula>),
    OrA(Box<ModalFormula>, Box<ModalFormula>),
    /// `Phi <-A Psi`.
    ImpliedByA(Box<ModalFormula>, Box<ModalFormula>),
    Dia(Box<ModalFormula>),
    BoxGamma(Thesis),
    DiaD(MvFormula),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn and(self, other: Self) -> Self {
        ModalFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        ModalFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        ModalFormula::Implies(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        ModalFormula::Not(Box::new(self))
    }

    pub fn dia(self) -> Self {
        ModalFormula::Dia(Box::new(self))
    }

    pub fn operator_name(&self) -> &'static str {
        match self {
            ModalFormula::Plain(_) => "atom",
            ModalFormula::Modal(..) => "[alpha]",
            ModalFormula::Flat(_) => "p_F",
            ModalFormula::Encap(_) => "E",
            ModalFormula::NegA(_) => "~A",
            ModalFormula::AndA(..) => "andA",
            ModalFormula::OrA(..) => "orA",
            ModalFormula::ImpliedByA(..) => "<-A",
            ModalFormula::Dia(_) => "dia",
            ModalFormula::BoxGamma(_) => "box_gamma",
            ModalFormula::DiaD(_) => "dia_d",
            ModalFormula::Not(_) => "not",
            ModalFormula::And(..) => "and",
            ModalFormula::Or(..) => "or",
            ModalFormula::Implies(..) => "->",
        }
    }
}

/// Formats a value-carrying syntax node against its lattice.
pub trait Pretty {
    fn fmt_with(&self, lattice: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn show<'a>(&'a self, lattice: &'a LatticeSpec) -> Shown<'a, Self> {
        Shown(self, lattice)
    }
}

pub struct Shown<'a, T: ?Sized>(&'a T, &'a LatticeSpec);

impl<T: Pretty + ?Sized> fmt::Display for Shown<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(self.1, f)
    }
}

impl Pretty for Rule {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            RuleBody::Fact(v) => write!(f, "{} <- @{}.", self.head, l.name_of(*v)),
            RuleBody::Body(blocks) => {
                write!(f, "{} :- ", self.head)?;
                for (i, b) in blocks.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    for (k, lit) in b.iter().enumerate() {
                        if k > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{lit}")?;
                    }
                }
                f.write_str(".")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice {}.", self.lattice_decl)?;
        for r in &self.rules {
            writeln!(f, "{}", r.show(&self.lattice))?;
        }
        Ok(())
    }
}

impl Pretty for Thesis {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Thesis::Annotated(h, v) => write!(f, "({h} <- @{})", l.name_of(*v)),
            Thesis::Rule(h, b) => write!(f, "({h} :- {b})"),
            Thesis::Bare(x) => write!(f, "{x}"),
        }
    }
}

impl Pretty for Reflected {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reflected::Value(v) => f.write_str(l.name_of(*v)),
            Reflected::Error => f.write_str("e"),
        }
    }
}

impl Pretty for FlatAtom {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_F(", self.predicate)?;
        for a in &self.args {
            write!(f, "{a}, ")?;
        }
        write!(f, "{})", self.value.show(l))
    }
}

impl Pretty for ModalFormula {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModalFormula::*;
        match self {
            Plain(a) if a.is_builtin() => write!(f, "({a})"),
            Plain(a) => write!(f, "{a}"),
            Modal(v, a) => write!(f, "[{}]{a}", l.name_of(*v)),
            Flat(a) => a.fmt_with(l, f),
            Encap(x) => write!(f, "E({x})"),
            NegA(x) => write!(f, "~A {}", x.show(l)),
            AndA(x, y) => write!(f, "({} andA {})", x.show(l), y.show(l)),
            OrA(x, y) => write!(f, "({} orA {})", x.show(l), y.show(l)),
            ImpliedByA(x, y) => write!(f, "({} <-A {})", x.show(l), y.show(l)),
            Dia(x) => write!(f, "dia {}", x.show(l)),
            BoxGamma(t) => write!(f, "box_gamma {}", t.show(l)),
            DiaD(x) => write!(f, "dia_d {x}"),
            Not(x) => write!(f, "not {}", x.show(l)),
            And(x, y) => write!(f, "({} and {})", x.show(l), y.show(l)),
            Or(x, y) => write!(f, "({} or {})", x.show(l), y.show(l)),
            Implies(x, y) => write!(f, "({} -> {})", x.show(l), y.show(l)),
        }
    }
}

/// All index tuples in `0..n` of the given length, lexicographic.
pub fn tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if len == 0 { 1 } else { n.checked_pow(len as u32).unwrap_or(0) };
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}
