//! Flattening: every predicate `p` gains a truth-value attribute (`p_F`),
//! connectives become existential modal operators over ternary relations
//! built from the lattice tables, and `dia` quantifies over `W x W`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kripke::{Extent, KripkeModel, Relation, Semantics, Valuation, Worlds};
use crate::lattice::{LatticeSpec, TruthValue};
use crate::modal_unary::{build_kripke_unary, UnaryModel};
use crate::semantics::{valuation, Interpretation};
use crate::syntax::{
    builtin_holds, ground, is_builtin, Atom, FlatAtom, ModalFormula, MvFormula, Pretty, Program,
    Reflected, Rule, RuleBody, Term, BUILTIN_EQ, BUILTIN_LEQ,
};
use crate::verdict::CheckVerdict;

pub const R_NEG: &str = "R_neg";
pub const R_AND: &str = "R_and";
pub const R_OR: &str = "R_or";
pub const R_IMP: &str = "R_imp";
pub const R_ALL: &str = "R_all";

/// The functions `kappa_p`: the model's value for each predicate tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticReflection {
    lattice: Arc<LatticeSpec>,
    arities: BTreeMap<String, usize>,
    kappa: BTreeMap<(String, Vec<String>), TruthValue>,
}

impl SemanticReflection {
    pub fn lattice(&self) -> &Arc<LatticeSpec> {
        &self.lattice
    }

    /// `kappa_p(args)`. Built-ins are two-valued by their fixed extension;
    /// wrong arities and unknown tuples give `e`.
    pub fn kappa(&self, predicate: &str, args: &[String]) -> Reflected {
        if is_builtin(predicate) {
            return match builtin_holds(predicate, args) {
                Some(true) => Reflected::Value(self.lattice.top()),
                Some(false) => Reflected::Value(self.lattice.bottom()),
                None => Reflected::Error,
            };
        }
        if self.arities.get(predicate) != Some(&args.len()) {
            return Reflected::Error;
        }
        self.kappa
            .get(&(predicate.to_string(), args.to_vec()))
            .map_or(Reflected::Error, |&v| Reflected::Value(v))
    }

    /// Overrides one entry. Used to probe the checks with a wrong reflection.
    pub fn set(&mut self, atom: &Atom, v: TruthValue) {
        self.kappa
            .insert((atom.predicate.clone(), atom.constants()), v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Vec<String>, TruthValue)> {
        self.kappa.iter().map(|((p, c), v)| (p, c, *v))
    }
}

/// The semantic reflection of `interp`.
pub fn reflect(program: &Program, interp: &Interpretation) -> SemanticReflection {
    SemanticReflection {
        lattice: interp.lattice().clone(),
        arities: program.predicates.clone(),
        kappa: interp
            .iter()
            .map(|(a, v)| ((a.predicate.clone(), a.constants()), v))
            .collect(),
    }
}

/// `E(phi)`: atoms become `p_F(c, kappa_p(c))`, `~` becomes `~A`, `and` /
/// `or` become `andA` / `orA`, and `psi -> phi` becomes `phi <-A psi`.
pub fn encapsulate(phi: &MvFormula, k: &SemanticReflection) -> Result<ModalFormula> {
    let e = |x: &MvFormula| encapsulate(x, k).map(Box::new);
    Ok(match phi {
        MvFormula::Atom(a) => {
            let args = a.constants();
            ModalFormula::Flat(FlatAtom {
                predicate: a.predicate.clone(),
                value: if a.is_ground() { k.kappa(&a.predicate, &args) } else { Reflected::Error },
                args: a.args.clone(),
            })
        }
        MvFormula::Neg(x) => ModalFormula::NegA(e(x)?),
        MvFormula::And(x, y) => ModalFormula::AndA(e(x)?, e(y)?),
        MvFormula::Or(x, y) => ModalFormula::OrA(e(x)?, e(y)?),
        MvFormula::Implies(body, head) => ModalFormula::ImpliedByA(e(head)?, e(body)?),
        MvFormula::Op1(op, _) | MvFormula::Op2(op, _, _) => {
            return Err(Error::NotEncapsulable(op.clone()))
        }
    })
}

/// Inverse of [`encapsulate`] on its image: drops the value attributes.
pub fn decapsulate(phi: &ModalFormula) -> Option<MvFormula> {
    let d = |x: &ModalFormula| decapsulate(x).map(Box::new);
    Some(match phi {
        ModalFormula::Flat(a) => MvFormula::Atom(Atom::new(a.predicate.clone(), a.args.clone())),
        ModalFormula::NegA(x) => MvFormula::Neg(d(x)?),
        ModalFormula::AndA(x, y) => MvFormula::And(d(x)?, d(y)?),
        ModalFormula::OrA(x, y) => MvFormula::Or(d(x)?, d(y)?),
        ModalFormula::ImpliedByA(head, body) => MvFormula::Implies(d(body)?, d(head)?),
        _ => return None,
    })
}

/// The Kripke model of the flattened program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatModel {
    pub kripke: KripkeModel,
    pub lattice: Arc<LatticeSpec>,
    pub reflection: SemanticReflection,
    pub full_implication: bool,
}

/// Builds the model from the reflection of `interp`.
///
/// `R_imp` holds `(x -> y, x, y)` only for `x <= y` unless
/// `full_implication` is set.
pub fn build_kripke_flat(program: &Program, interp: &Interpretation, full_implication: bool) -> FlatModel {
    build_kripke_flat_from(program, reflect(program, interp), full_implication)
}

pub fn build_kripke_flat_from(
    program: &Program,
    reflection: SemanticReflection,
    full_implication: bool,
) -> FlatModel {
    let l = reflection.lattice.clone();
    let n = l.len();
    let vals: Vec<TruthValue> = l.values().collect();
    let triples = |op: &dyn Fn(TruthValue, TruthValue) -> Option<TruthValue>| {
        let mut set = BTreeSet::new();
        for &x in &vals {
            for &y in &vals {
                if let Some(w) = op(x, y) {
                    set.insert((w.index(), x.index(), y.index()));
                }
            }
        }
        Relation::Triples(set)
    };
    let mut relations = BTreeMap::new();
    relations.insert(
        R_NEG.to_string(),
        Relation::Pairs(vals.iter().map(|&x| (l.neg(x).index(), x.index())).collect()),
    );
    relations.insert(R_AND.to_string(), triples(&|x, y| Some(l.meet(x, y))));
    relations.insert(R_OR.to_string(), triples(&|x, y| Some(l.join(x, y))));
    relations.insert(
        R_IMP.to_string(),
        triples(&|x, y| (full_implication || l.leq(x, y)).then(|| l.implies(x, y))),
    );
    relations.insert(
        R_ALL.to_string(),
        Relation::Product {
            domain: Extent::full(n),
            codomain: (0..n).collect(),
        },
    );

    let mut valuation: BTreeMap<(String, Vec<String>), BTreeSet<usize>> = BTreeMap::new();
    let mut predicates = BTreeMap::new();
    for (p, args, v) in reflection.entries() {
        let mut key = args.clone();
        key.push(l.name_of(v).to_string());
        valuation
            .entry((format!("{p}_F"), key))
            .or_default()
            .insert(v.index());
    }
    for (p, &arity) in &program.predicates {
        predicates.insert(format!("{p}_F"), arity + 1);
    }
    // Built-ins have a fixed extension over the constants.
    let constants: Vec<String> = program.constants.iter().cloned().collect();
    for b in [BUILTIN_EQ, BUILTIN_LEQ] {
        predicates.insert(format!("{b}_F"), 3);
        for x in &constants {
            for y in &constants {
                if let Reflected::Value(v) = reflection.kappa(b, &[x.clone(), y.clone()]) {
                    valuation
                        .entry((format!("{b}_F"), vec![x.clone(), y.clone(), l.name_of(v).to_string()]))
                        .or_default()
                        .insert(v.index());
                }
            }
        }
    }

    FlatModel {
        kripke: KripkeModel {
            worlds: Worlds::Values(l.clone()),
            relations,
            constants,
            predicates,
            valuation: Valuation::Sparse(valuation),
        },
        lattice: l,
        reflection,
        full_implication,
    }
}

impl Semantics for FlatModel {
    const MODE: &'static str = "flat";

    fn kripke(&self) -> &KripkeModel {
        &self.kripke
    }

    fn eval_modal(&self, phi: &ModalFormula, w: usize) -> Result<bool> {
        let unary = |rel: &str, x: &ModalFormula| -> Result<bool> {
            for y in self.kripke.relation(rel)?.successors(w) {
                if self.eval(x, y)? {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        // Phi is read at the third component, Psi at the second.
        let binary = |rel: &str, phi: &ModalFormula, psi: &ModalFormula| -> Result<bool> {
            for (y, z) in self.kripke.relation(rel)?.successor_pairs(w) {
                if self.eval(phi, z)? && self.eval(psi, y)? {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        match phi {
            ModalFormula::Flat(a) => {
                let Reflected::Value(alpha) = a.value else {
                    return Ok(false);
                };
                let mut args = Vec::with_capacity(a.args.len() + 1);
                for t in &a.args {
                    match t {
                        Term::Const(c) => args.push(c.clone()),
                        Term::Var(v) => return Err(Error::UnknownAtom(format!("{}_F(..{v}..)", a.predicate))),
                    }
                }
                args.push(self.lattice.name_of(alpha).to_string());
                self.kripke.holds(w, &format!("{}_F", a.predicate), &args)
            }
            ModalFormula::Encap(x) => self.eval(&encapsulate(x, &self.reflection)?, w),
            ModalFormula::NegA(x) => unary(R_NEG, x),
            ModalFormula::Dia(x) => unary(R_ALL, x),
            ModalFormula::AndA(x, y) => binary(R_AND, x, y),
            ModalFormula::OrA(x, y) => binary(R_OR, x, y),
            ModalFormula::ImpliedByA(x, y) => binary(R_IMP, x, y),
            _ => Self::wrong_mode(phi),
        }
    }
}

/// A flattened clause: `E(head) <-A E(body)`, or `E(head)` for a fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatClause {
    pub head: ModalFormula,
    pub body: Option<ModalFormula>,
}

impl Pretty for FlatClause {
    fn fmt_with(&self, l: &LatticeSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head.show(l))?;
        if let Some(b) = &self.body {
            write!(f, " <-A {}", b.show(l))?;
        }
        f.write_str(".")
    }
}

/// `PR_F`: the encapsulation of every ground clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatProgram {
    pub lattice: Arc<LatticeSpec>,
    pub clauses: Vec<FlatClause>,
}

impl fmt::Display for FlatProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", c.show(&self.lattice))?;
        }
        Ok(())
    }
}

impl FlatProgram {
    pub fn to_json(&self) -> Value {
        let l = &self.lattice;
        Value::Array(
            self.clauses
                .iter()
                .map(|c| {
                    json!({
                        "head": c.head.show(l).to_string(),
                        "body": c.body.as_ref().map(|b| b.show(l).to_string()),
                    })
                })
                .collect(),
        )
    }
}

/// Encapsulates every ground clause of `program` against `k`.
pub fn flatten_program(program: &Program, k: &SemanticReflection) -> Result<FlatProgram> {
    let g = ground(program)?;
    let mut clauses = Vec::with_capacity(g.rules.len());
    for r in &g.rules {
        let head = encapsulate(&MvFormula::Atom(r.head.clone()), k)?;
        let body = match r.body_formula() {
            Some(b) => Some(encapsulate(&b, k)?),
            None => None,
        };
        clauses.push(FlatClause { head, body });
    }
    Ok(FlatProgram {
        lattice: program.lattice.clone(),
        clauses,
    })
}

/// The formula a clause stands for: the head atom for a fact, `body ->
/// head` for a rule.
fn clause_formula(r: &Rule) -> MvFormula {
    let head = MvFormula::Atom(r.head.clone());
    match &r.body {
        RuleBody::Fact(_) => head,
        RuleBody::Body(_) => r.body_formula().expect("rule body").implies(head),
    }
}

/// Every subformula of every ground clause, plus every atom of the base.
pub fn clause_subformulas(program: &Program) -> Result<Vec<MvFormula>> {
    let g = ground(program)?;
    let mut set: BTreeSet<MvFormula> = g.herbrand_base().into_iter().map(MvFormula::Atom).collect();
    for r in &g.rules {
        for s in clause_formula(r).subformulas() {
            set.insert(s.clone());
        }
    }
    Ok(set.into_iter().collect())
}

/// Whether every implication inside `phi` has its antecedent below its
/// consequent. Under the filtered `R_imp` exactly these formulas keep their
/// singleton extent.
pub fn implications_ordered(interp: &Interpretation, phi: &MvFormula) -> Result<bool> {
    for s in phi.subformulas() {
        if let MvFormula::Implies(x, y) = s {
            if !interp.lattice().leq(valuation(interp, x)?, valuation(interp, y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the flattening of `program` against `interp`:
///
/// * `flatten/singleton`: `|E(phi)| = {v(phi)}` for every clause
///   subformula (or `{}` when a filtered implication is out of order);
/// * `flatten/diamond`: `|dia E(phi)|` is `W` (or `{}` likewise);
/// * `flatten/two-valued`: `|dia Phi|` is `{}` or `W` for random `Phi`;
/// * `flatten/recovery`: reading `alpha` off the true `dia p_F(c, alpha)`
///   gives back `interp`.
pub fn verify_flat(
    program: &Program,
    interp: &Interpretation,
    full_implication: bool,
    random_formulas: usize,
    seed: u64,
) -> Result<Vec<CheckVerdict>> {
    let model = build_kripke_flat(program, interp, full_implication);
    let l = interp.lattice().clone();
    let n = l.len();
    let show = |f: &MvFormula| f.to_string();

    let mut singleton = CheckVerdict::new("flatten/singleton");
    let mut diamond = CheckVerdict::new("flatten/diamond");
    for phi in clause_subformulas(program)? {
        let v = valuation(interp, &phi)?;
        let live = full_implication || implications_ordered(interp, &phi)?;
        let e = ModalFormula::Encap(phi.clone());
        let got = model.extent(&e)?;
        let want = if live { Extent::singleton(n, v.index()) } else { Extent::empty(n) };
        singleton.record(got == want, || {
            format!("|E({})| = {:?}, expected {:?}", show(&phi), names(&l, &got), names(&l, &want))
        });
        let got = model.extent(&e.dia())?;
        let want = if live { Extent::full(n) } else { Extent::empty(n) };
        diamond.record(got == want, || {
            format!("|dia E({})| = {:?}", show(&phi), names(&l, &got))
        });
    }

    let mut two_valued = CheckVerdict::new("flatten/two-valued");
    let base: Vec<Atom> = interp.atoms().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_formulas {
        let phi = random_flat_formula(&mut rng, &base, &l, 3);
        let got = model.extent(&phi.clone().dia())?;
        two_valued.record(got.is_empty() || got.is_full(), || {
            format!("|dia {}| = {:?}", phi.show(&l), names(&l, &got))
        });
    }

    let mut recovery = CheckVerdict::new("flatten/recovery");
    let recovered = recover_model(&model, &base)?;
    for a in &base {
        let want = interp.get(a);
        let got = recovered.get(a).copied().flatten();
        recovery.record(got == want, || {
            let shown = |v: Option<TruthValue>| v.map_or("none".to_string(), |v| l.name_of(v).to_string());
            format!("{a}: recovered {}, model has {}", shown(got), shown(want))
        });
    }
    Ok(vec![singleton, diamond, two_valued, recovery])
}

/// For each atom, the unique `alpha` with `dia p_F(c, alpha)` true, or
/// `None` if there is not exactly one.
pub fn recover_model(model: &FlatModel, base: &[Atom]) -> Result<BTreeMap<Atom, Option<TruthValue>>> {
    let mut out = BTreeMap::new();
    for a in base {
        let mut found = Vec::new();
        for alpha in model.lattice.values() {
            let f = ModalFormula::Flat(FlatAtom {
                predicate: a.predicate.clone(),
                args: a.args.clone(),
                value: Reflected::Value(alpha),
            })
            .dia();
            if model.is_true(&f)? {
                found.push(alpha);
            }
        }
        out.insert(a.clone(), (found.len() == 1).then(|| found[0]));
    }
    Ok(out)
}

fn names(l: &LatticeSpec, e: &Extent) -> Vec<String> {
    e.iter().map(|w| l.name_of(TruthValue::new(w)).to_string()).collect()
}

/// A random formula over flat atoms (with arbitrary attributes, including
/// `e`) and the flat operators.
pub fn random_flat_formula(rng: &mut impl Rng, base: &[Atom], l: &LatticeSpec, depth: usize) -> ModalFormula {
    let leaf = depth == 0 || base.is_empty() || rng.gen_bool(0.3);
    if leaf {
        let Some(a) = base.choose(rng) else {
            return ModalFormula::Flat(FlatAtom {
                predicate: "p".into(),
                args: vec![],
                value: Reflected::Error,
            });
        };
        let k = rng.gen_range(0..=l.len());
        let value = if k == l.len() { Reflected::Error } else { Reflected::Value(TruthValue::new(k)) };
        return ModalFormula::Flat(FlatAtom {
            predicate: a.predicate.clone(),
            args: a.args.clone(),
            value,
        });
    }
    let op = rng.gen_range(0..5);
    let x = Box::new(random_flat_formula(rng, base, l, depth - 1));
    let y = Box::new(random_flat_formula(rng, base, l, depth - 1));
    match op {
        0 => ModalFormula::NegA(x),
        1 => ModalFormula::AndA(x, y),
        2 => ModalFormula::OrA(x, y),
        3 => ModalFormula::ImpliedByA(x, y),
        _ => ModalFormula::Dia(x),
    }
}

/// `M |=_w E(p(c))` iff `[w]p(c)` is true in `M_I`, for every atom of
/// `base` and every world.
pub fn verify_corollary(program: &Program, interp: &Interpretation) -> Result<CheckVerdict> {
    let flat = build_kripke_flat(program, interp, true);
    let unary = build_kripke_unary(program, interp);
    let base: Vec<Atom> = interp.atoms().cloned().collect();
    corollary_check(&flat, &unary, &base)
}

pub fn corollary_check(flat: &FlatModel, unary: &UnaryModel, base: &[Atom]) -> Result<CheckVerdict> {
    let l = &flat.lattice;
    let mut v = CheckVerdict::new("corollary");
    for a in base {
        let e = ModalFormula::Encap(MvFormula::Atom(a.clone()));
        for w in l.values() {
            let left = flat.eval(&e, w.index())?;
            let right = unary.is_true(&ModalFormula::Modal(w, a.clone()))?;
            v.record(left == right, || {
                format!(
                    "{a} at world {}: E holds = {left}, [{}]{a} true = {right}",
                    l.name_of(w),
                    l.name_of(w)
                )
            });
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::compute_model;
    use crate::syntax::{parse_formula, parse_mv_formula, parse_program};

    fn setup(src: &str, full: bool) -> (Program, Interpretation, FlatModel) {
        let p = parse_program(src).unwrap();
        let i = compute_model(&p).unwrap();
        let m = build_kripke_flat(&p, &i, full);
        (p, i, m)
    }

    const SAMPLE: &str = "lattice belnap4.\np(a) <- @t.\nq(a) <- @bot.\nr(a) <- @top.\n\
                          s(X) :- p(X), ~q(X).\nu(X) :- r(X); ~p(X).";

    #[test]
    fn reflection_and_error_mark() {
        let (p, i, _) = setup(SAMPLE, false);
        let k = reflect(&p, &i);
        let l = p.lattice.clone();
        assert_eq!(k.kappa("r", &["a".into()]), Reflected::Value(l.value("top").unwrap()));
        assert_eq!(k.kappa("r", &["a".into(), "b".into()]), Reflected::Error);
        assert_eq!(k.kappa("=", &["a".into(), "a".into()]), Reflected::Value(l.top()));
        assert_eq!(k.kappa("=", &["a".into(), "b".into()]), Reflected::Value(l.bottom()));
    }

    #[test]
    fn encapsulation_is_structural() {
        let (p, i, _) = setup(SAMPLE, false);
        let k = reflect(&p, &i);
        let l = &p.lattice;
        let e = |s: &str| encapsulate(&parse_mv_formula(s, l).unwrap(), &k).unwrap().show(l).to_string();
        assert_eq!(e("p(a)"), "p_F(a, t)");
        assert_eq!(e("~p(a)"), "~A p_F(a, t)");
        assert_eq!(e("p(a) <- r(a)"), "(p_F(a, t) <-A r_F(a, top))");
        assert_eq!(e("p(a) and q(a) or r(a)"), "((p_F(a, t) andA q_F(a, bot)) orA r_F(a, top))");
        assert!(matches!(
            encapsulate(&parse_mv_formula("#mu(p(a))", l).unwrap(), &k),
            Err(Error::NotEncapsulable(_))
        ));
    }

    #[test]
    fn decapsulate_inverts() {
        let (p, i, _) = setup(SAMPLE, false);
        let k = reflect(&p, &i);
        for phi in clause_subformulas(&p).unwrap() {
            assert_eq!(decapsulate(&encapsulate(&phi, &k).unwrap()), Some(phi));
        }
    }

    #[test]
    fn relation_sizes_and_members() {
        let (_, _, m) = setup(SAMPLE, false);
        let l = &m.lattice;
        let v = |s: &str| l.value(s).unwrap().index();
        assert_eq!(m.kripke.relation(R_AND).unwrap().len(), 16);
        assert!(m.kripke.relation(R_NEG).unwrap().contains_pair(v("f"), v("t")));
        assert!(m.kripke.relation(R_IMP).unwrap().contains_triple(v("t"), v("f"), v("top")));
        // t -> f is f, but t is not below f: filtered out.
        assert!(!m.kripke.relation(R_IMP).unwrap().contains_triple(v("f"), v("t"), v("f")));
        let (_, _, full) = setup(SAMPLE, true);
        assert!(full.kripke.relation(R_IMP).unwrap().contains_triple(v("f"), v("t"), v("f")));
        assert_eq!(full.kripke.relation(R_IMP).unwrap().len(), 16);
    }

    #[test]
    fn encapsulated_formulas_hold_at_their_value() {
        let (_, i, m) = setup("lattice belnap4.\np(a) <- @t.\nq(a) <- @bot.", true);
        let l = m.lattice.clone();
        let ext = |s: &str| m.extent(&parse_formula(s, &l).unwrap()).unwrap();
        assert_eq!(ext("E(p(a))").iter().collect::<Vec<_>>(), [l.value("t").unwrap().index()]);
        assert_eq!(ext("E(p(a) and q(a))").iter().collect::<Vec<_>>(), [l.value("bot").unwrap().index()]);
        assert!(ext("dia E(p(a) and q(a))").is_full());
        assert!(ext("dia p_F(a, f)").is_empty());
        assert!(ext("dia p_F(a, e)").is_empty());
        let _ = i;
    }

    #[test]
    fn verbatim_implication_contract() {
        let (p, i, m) = setup("lattice belnap4.\np <- @t.\nq <- @bot.", false);
        let l = p.lattice.clone();
        // q -> p: bot <= t, kept.
        let ordered = parse_mv_formula("p <- q", &l).unwrap();
        assert!(implications_ordered(&i, &ordered).unwrap());
        let got = m.extent(&ModalFormula::Encap(ordered.clone())).unwrap();
        assert_eq!(got.iter().collect::<Vec<_>>(), [valuation(&i, &ordered).unwrap().index()]);
        // p -> q: t is not <= bot, so no world.
        let reversed = parse_mv_formula("q <- p", &l).unwrap();
        assert!(m.extent(&ModalFormula::Encap(reversed.clone())).unwrap().is_empty());
        let (_, _, full) = setup("lattice belnap4.\np <- @t.\nq <- @bot.", true);
        let got = full.extent(&ModalFormula::Encap(reversed.clone())).unwrap();
        assert_eq!(got.iter().collect::<Vec<_>>(), [valuation(&i, &reversed).unwrap().index()]);
    }

    #[test]
    fn verify_flat_passes_in_both_modes() {
        for full in [false, true] {
            let (p, i, _) = setup(SAMPLE, full);
            let report = verify_flat(&p, &i, full, 200, 7).unwrap();
            assert!(report.iter().all(|v| v.pass), "{report:?}");
        }
    }

    #[test]
    fn corollary_holds_and_detects_a_bad_reflection() {
        let (p, i, _) = setup(SAMPLE, true);
        assert!(verify_corollary(&p, &i).unwrap().pass);
        let mut k = reflect(&p, &i);
        k.set(&Atom::ground("p", ["a"]), p.lattice.value("f").unwrap());
        let flat = build_kripke_flat_from(&p, k, true);
        let unary = build_kripke_unary(&p, &i);
        let base: Vec<Atom> = i.atoms().cloned().collect();
        let v = corollary_check(&flat, &unary, &base).unwrap();
        assert!(!v.pass);
        assert!(v.counterexample.unwrap().starts_with("p(a)"));
    }

    #[test]
    fn single_fact_corollary() {
        let (p, i, _) = setup("lattice belnap4.\np <- @top.", true);
        let v = verify_corollary(&p, &i).unwrap();
        assert!(v.pass);
        assert_eq!(v.checked, 4);
    }

    #[test]
    fn flattened_listing() {
        let (p, i, _) = setup(SAMPLE, false);
        let k = reflect(&p, &i);
        let text = flatten_program(&p, &k).unwrap().to_string();
        assert!(text.contains("p_F(a, t).\n"), "{text}");
        assert!(text.contains("s_F(a, bot) <-A (p_F(a, t) andA ~A q_F(a, bot)).\n"), "{text}");
        assert!(text.contains("u_F(a, top) <-A (r_F(a, top) orA ~A p_F(a, t)).\n"), "{text}");
    }
}
