//! Abstract reductions: Suszko's `box_gamma` over the space of all
//! valuations, and the matrix reduction `dia_d` over the truth values.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kripke::{Extent, KripkeModel, Relation, Semantics, Valuation, Worlds};
use crate::lattice::{LatticeSpec, TruthValue};
use crate::semantics::{valuation, Interpretation};
use crate::syntax::{ground, Atom, ModalFormula, MvFormula, Pretty, Program, Thesis};
use crate::verdict::{LemmaVerdict, Witness};

pub const DEFAULT_VALUATION_BUDGET: usize = 1_000_000;
pub const R_GAMMA: &str = "R_Gamma";
pub const R_D: &str = "R_D";

/// `Val = W^H`, enumerated lexicographically with the first atom of the
/// base most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationSpace {
    lattice: Arc<LatticeSpec>,
    base: Vec<Atom>,
}

impl ValuationSpace {
    pub fn new(lattice: Arc<LatticeSpec>, base: Vec<Atom>) -> Self {
        ValuationSpace { lattice, base }
    }

    /// The space over the program's ground Herbrand base.
    pub fn of_program(program: &Program) -> Result<Self> {
        Ok(Self::new(program.lattice.clone(), ground(program)?.herbrand_base()))
    }

    pub fn lattice(&self) -> &Arc<LatticeSpec> {
        &self.lattice
    }

    pub fn base(&self) -> &[Atom] {
        &self.base
    }

    /// `|W|^|H|`, saturating.
    pub fn size(&self) -> usize {
        self.exact_size().unwrap_or(usize::MAX)
    }

    fn exact_size(&self) -> Option<usize> {
        u32::try_from(self.base.len())
            .ok()
            .and_then(|k| self.lattice.len().checked_pow(k))
    }

    /// The size, or an error if it exceeds `budget`.
    pub fn checked_size(&self, budget: usize) -> Result<usize> {
        match self.exact_size() {
            Some(n) if n <= budget => Ok(n),
            _ => Err(Error::BudgetExceeded {
                what: "valuation space",
                required: format!("{}^{} valuations", self.lattice.len(), self.base.len()),
                budget,
            }),
        }
    }

    fn digits(&self, mut i: usize) -> Vec<usize> {
        let n = self.lattice.len();
        let mut d = vec![0; self.base.len()];
        for slot in d.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        d
    }

    pub fn valuation(&self, i: usize) -> Interpretation {
        let values = self
            .base
            .iter()
            .cloned()
            .zip(self.digits(i).into_iter().map(TruthValue::new))
            .collect();
        Interpretation::from_values(self.lattice.clone(), values)
    }

    /// Position of `interp` in the enumeration; atoms outside the base are
    /// ignored, missing ones are an error.
    pub fn index_of(&self, interp: &Interpretation) -> Result<usize> {
        let n = self.lattice.len();
        let mut i = 0;
        for a in &self.base {
            i = i * n + interp.value_of(a)?.index();
        }
        Ok(i)
    }

    /// `{p(a)=t, q=f}`.
    pub fn describe(&self, w: usize) -> String {
        let parts: Vec<String> = self
            .base
            .iter()
            .zip(self.digits(w))
            .map(|(a, d)| format!("{a}={}", self.lattice.name_of(TruthValue::new(d))))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A logical matrix `(W, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    lattice: Arc<LatticeSpec>,
    designated: BTreeSet<TruthValue>,
}

impl Matrix {
    pub fn new(lattice: Arc<LatticeSpec>, designated: impl IntoIterator<Item = TruthValue>) -> Result<Self> {
        let designated: BTreeSet<TruthValue> = designated.into_iter().collect();
        if designated.is_empty() || designated.iter().any(|v| v.index() >= lattice.len()) {
            return Err(Error::EmptyDesignated);
        }
        Ok(Matrix { lattice, designated })
    }

    /// From a comma-separated list of element names, e.g. `t,top`.
    pub fn parse(lattice: Arc<LatticeSpec>, names: &str) -> Result<Self> {
        let mut values = Vec::new();
        for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            values.push(lattice.value_or_err(name)?);
        }
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &Arc<LatticeSpec> {
        &self.lattice
    }

    pub fn designated(&self) -> &BTreeSet<TruthValue> {
        &self.designated
    }

    pub fn is_designated(&self, v: TruthValue) -> bool {
        self.designated.contains(&v)
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.designated.iter().map(|&v| self.lattice.name_of(v)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Whether `interp` is a model of one thesis. Bare formulas need a matrix.
pub fn satisfies_thesis(interp: &Interpretation, thesis: &Thesis, matrix: Option<&Matrix>) -> Result<bool> {
    let l = interp.lattice();
    match thesis {
        Thesis::Annotated(phi, alpha) => Ok(l.leq(*alpha, valuation(interp, phi)?)),
        Thesis::Rule(head, body) => Ok(l.leq(valuation(interp, body)?, valuation(interp, head)?)),
        Thesis::Bare(phi) => match matrix {
            Some(m) => Ok(m.is_designated(valuation(interp, phi)?)),
            None => Err(Error::MissingMatrix(phi.to_string())),
        },
    }
}

/// `Val_Gamma`, as indices into the space.
pub fn models_of(
    gamma: &[Thesis],
    space: &ValuationSpace,
    matrix: Option<&Matrix>,
    budget: usize,
) -> Result<Vec<usize>> {
    if matrix.is_none() {
        if let Some(Thesis::Bare(phi)) = gamma.iter().find(|t| matches!(t, Thesis::Bare(_))) {
            return Err(Error::MissingMatrix(phi.to_string()));
        }
    }
    let n = space.checked_size(budget)?;
    let mut out = Vec::new();
    'val: for i in 0..n {
        let v = space.valuation(i);
        for t in gamma {
            if !satisfies_thesis(&v, t, matrix)? {
                continue 'val;
            }
        }
        out.push(i);
    }
    Ok(out)
}

/// `Gamma |= phi`: every model of `gamma` is a model of `phi`.
pub fn consequence(
    gamma: &[Thesis],
    phi: &Thesis,
    space: &ValuationSpace,
    matrix: Option<&Matrix>,
    budget: usize,
) -> Result<bool> {
    let models = models_of(gamma, space, matrix, budget)?;
    follows(&models, phi, space, matrix)
}

fn follows(models: &[usize], phi: &Thesis, space: &ValuationSpace, matrix: Option<&Matrix>) -> Result<bool> {
    for &i in models {
        if !satisfies_thesis(&space.valuation(i), phi, matrix)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The theses of a program: `head <- @alpha` for facts, `head :- body` for
/// rules, over its ground instances.
pub fn program_theses(program: &Program) -> Result<Vec<Thesis>> {
    Ok(ground(program)?.rules.iter().map(|r| r.to_thesis()).collect())
}

/// Worlds are valuations, `R_Gamma = Val x Val_Gamma`, and every atom holds
/// exactly at the models of `Gamma`.
#[derive(Debug, Clone)]
pub struct SuszkoModel {
    pub kripke: KripkeModel,
    space: ValuationSpace,
    gamma: Vec<Thesis>,
    matrix: Option<Matrix>,
    /// The successor valuations, materialized per successor world.
    cache: BTreeMap<usize, Interpretation>,
}

impl SuszkoModel {
    pub fn new(gamma: Vec<Thesis>, space: ValuationSpace, matrix: Option<Matrix>, budget: usize) -> Result<Self> {
        let n = space.checked_size(budget)?;
        let models = models_of(&gamma, &space, matrix.as_ref(), budget)?;
        let mut predicates = BTreeMap::new();
        let mut constants = BTreeSet::new();
        for a in space.base() {
            predicates.insert(a.predicate.clone(), a.arity());
            constants.extend(a.constants());
        }
        let mut relations = BTreeMap::new();
        relations.insert(
            R_GAMMA.to_string(),
            Relation::Product {
                domain: Extent::full(n),
                codomain: models.clone(),
            },
        );
        let kripke = KripkeModel {
            worlds: Worlds::Valuations(space.clone()),
            relations,
            constants: constants.into_iter().collect(),
            predicates,
            valuation: Valuation::Uniform(Extent::from_worlds(n, models.iter().copied())),
        };
        let mut model = SuszkoModel {
            kripke,
            space,
            gamma,
            matrix,
            cache: BTreeMap::new(),
        };
        model.refresh_cache();
        Ok(model)
    }

    pub fn from_program(program: &Program, matrix: Option<Matrix>, budget: usize) -> Result<Self> {
        Self::new(program_theses(program)?, ValuationSpace::of_program(program)?, matrix, budget)
    }

    pub fn space(&self) -> &ValuationSpace {
        &self.space
    }

    pub fn gamma(&self) -> &[Thesis] {
        &self.gamma
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        self.matrix.as_ref()
    }

    /// `Val_Gamma` as stored in `V`.
    pub fn models(&self) -> Vec<usize> {
        match &self.kripke.valuation {
            Valuation::Uniform(e) => e.iter().collect(),
            Valuation::Sparse(_) => Vec::new(),
        }
    }

    /// Replaces `R_Gamma`. Only useful for probing the lemma check.
    pub fn set_relation(&mut self, r: Relation) {
        self.kripke.relations.insert(R_GAMMA.to_string(), r);
        self.refresh_cache();
    }

    fn refresh_cache(&mut self) {
        let n = self.kripke.world_count();
        let mut targets = BTreeSet::new();
        if let Some(r) = self.kripke.relations.get(R_GAMMA) {
            for (domain, succ) in r.successor_groups(n) {
                if !domain.is_empty() {
                    targets.extend(succ);
                }
            }
        }
        self.cache = targets.into_iter().map(|w| (w, self.space.valuation(w))).collect();
    }

    fn satisfied_at(&self, w: usize, thesis: &Thesis) -> Result<bool> {
        match self.cache.get(&w) {
            Some(v) => satisfies_thesis(v, thesis, self.matrix.as_ref()),
            None => satisfies_thesis(&self.space.valuation(w), thesis, self.matrix.as_ref()),
        }
    }

    fn box_over(&self, succ: &[usize], thesis: &Thesis) -> Result<bool> {
        for &w in succ {
            if !self.satisfied_at(w, thesis)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Semantics for SuszkoModel {
    const MODE: &'static str = "suszko";

    fn kripke(&self) -> &KripkeModel {
        &self.kripke
    }

    fn eval_modal(&self, phi: &ModalFormula, w: usize) -> Result<bool> {
        match phi {
            ModalFormula::Plain(a) => {
                let args = a.constants();
                self.kripke.holds(w, &a.predicate, &args)
            }
            ModalFormula::BoxGamma(t) => {
                let succ = self.kripke.relation(R_GAMMA)?.successors(w);
                self.box_over(&succ, t)
            }
            _ => Self::wrong_mode(phi),
        }
    }

    /// Worlds sharing a successor list are decided together, so a `box_gamma`
    /// costs one pass over `Val_Gamma` rather than one per world.
    fn extent(&self, phi: &ModalFormula) -> Result<Extent> {
        let n = self.kripke.world_count();
        Ok(match phi {
            ModalFormula::Not(x) => self.extent(x)?.complement(),
            ModalFormula::And(x, y) => self.extent(x)?.intersection(&self.extent(y)?),
            ModalFormula::Or(x, y) => self.extent(x)?.union(&self.extent(y)?),
            ModalFormula::Implies(x, y) => self.extent(x)?.complement().union(&self.extent(y)?),
            ModalFormula::BoxGamma(t) => {
                let mut e = Extent::empty(n);
                for (domain, succ) in self.kripke.relation(R_GAMMA)?.successor_groups(n) {
                    if !domain.is_empty() && self.box_over(&succ, t)? {
                        e = e.union(&domain);
                    }
                }
                e
            }
            _ => {
                let mut e = Extent::empty(n);
                for w in 0..n {
                    if self.eval(phi, w)? {
                        e.insert(w);
                    }
                }
                e
            }
        })
    }
}

/// Checks `Gamma |= phi` iff `box_gamma phi` is true, and that every
/// `|box_gamma phi|` is empty or everything. Consequence is recomputed from
/// the theses, not read off the model.
pub fn verify_suszko(model: &SuszkoModel, suite: &[Thesis], budget: usize) -> Result<LemmaVerdict> {
    let space = model.space();
    let l = space.lattice().clone();
    let models = models_of(model.gamma(), space, model.matrix(), budget)?;
    let mut verdict = LemmaVerdict::new("suszko");
    for phi in suite {
        let left = follows(&models, phi, space, model.matrix())?;
        let ext = model.extent(&ModalFormula::BoxGamma(phi.clone()))?;
        let right = ext.is_full();
        let ok = left == right && (ext.is_empty() || ext.is_full());
        verdict.record(ok, || Witness {
            formula: phi.show(&l).to_string(),
            side_left: format!("consequence = {left}"),
            side_right: format!("box_gamma true at {} of {} valuations", ext.count(), ext.universe()),
        });
    }
    Ok(verdict)
}

/// Worlds are truth values, `R_D = W x D`, and each atom holds at the one
/// world equal to its value.
#[derive(Debug, Clone)]
pub struct MatrixModel {
    pub kripke: KripkeModel,
    pub matrix: Matrix,
    /// The interpretation read back from `V`: the world where each atom
    /// holds, if there is exactly one.
    recovered: BTreeMap<Atom, Option<TruthValue>>,
    /// The atoms of `recovered` that have a value.
    known: Interpretation,
}

impl MatrixModel {
    /// `designated_worlds_only` keeps an atom's world only when its value is
    /// designated, the other reading of the construction.
    pub fn new(matrix: Matrix, base: &Interpretation, designated_worlds_only: bool) -> Self {
        let l = matrix.lattice().clone();
        let n = l.len();
        let mut relations = BTreeMap::new();
        relations.insert(
            R_D.to_string(),
            Relation::Product {
                domain: Extent::full(n),
                codomain: matrix.designated().iter().map(|v| v.index()).collect(),
            },
        );
        let mut map = BTreeMap::new();
        let mut predicates = BTreeMap::new();
        let mut constants = BTreeSet::new();
        for (a, v) in base.iter() {
            predicates.insert(a.predicate.clone(), a.arity());
            constants.extend(a.constants());
            if !designated_worlds_only || matrix.is_designated(v) {
                map.insert((a.predicate.clone(), a.constants()), BTreeSet::from([v.index()]));
            }
        }
        let kripke = KripkeModel {
            worlds: Worlds::Values(l),
            relations,
            constants: constants.into_iter().collect(),
            predicates,
            valuation: Valuation::Sparse(map),
        };
        let recovered: BTreeMap<Atom, Option<TruthValue>> = base
            .atoms()
            .map(|a| {
                let worlds: Vec<usize> = (0..n)
                    .filter(|&w| kripke.holds(w, &a.predicate, &a.constants()).unwrap_or(false))
                    .collect();
                let v = (worlds.len() == 1).then(|| TruthValue::new(worlds[0]));
                (a.clone(), v)
            })
            .collect();
        let known = Interpretation::from_values(
            matrix.lattice().clone(),
            recovered.iter().filter_map(|(a, v)| v.map(|v| (a.clone(), v))).collect(),
        );
        MatrixModel {
            kripke,
            matrix,
            recovered,
            known,
        }
    }

    fn lattice(&self) -> &Arc<LatticeSpec> {
        self.matrix.lattice()
    }

    /// The value of `phi` under the recovered interpretation, or `None` if
    /// one of its atoms has no unique world.
    pub fn value(&self, phi: &MvFormula) -> Result<Option<TruthValue>> {
        match valuation(&self.known, phi) {
            Ok(v) => Ok(Some(v)),
            Err(Error::UnknownAtom(_)) if phi.atoms().iter().any(|a| self.recovered.get(*a) == Some(&None)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

impl Semantics for MatrixModel {
    const MODE: &'static str = "matrix";

    fn kripke(&self) -> &KripkeModel {
        &self.kripke
    }

    fn eval_modal(&self, phi: &ModalFormula, w: usize) -> Result<bool> {
        match phi {
            ModalFormula::Plain(a) => self.kripke.holds(w, &a.predicate, &a.constants()),
            ModalFormula::DiaD(x) => {
                let v = self.value(x)?;
                Ok(self
                    .kripke
                    .relation(R_D)?
                    .successors(w)
                    .into_iter()
                    .any(|y| v.is_some_and(|v| v.index() == y)))
            }
            _ => Self::wrong_mode(phi),
        }
    }

    /// `dia_d phi` reads the value of `phi` once for all worlds.
    fn extent(&self, phi: &ModalFormula) -> Result<Extent> {
        let n = self.kripke.world_count();
        Ok(match phi {
            ModalFormula::Not(x) => self.extent(x)?.complement(),
            ModalFormula::And(x, y) => self.extent(x)?.intersection(&self.extent(y)?),
            ModalFormula::Or(x, y) => self.extent(x)?.union(&self.extent(y)?),
            ModalFormula::Implies(x, y) => self.extent(x)?.complement().union(&self.extent(y)?),
            ModalFormula::DiaD(x) => {
                let mut e = Extent::empty(n);
                if let Some(v) = self.value(x)? {
                    for (domain, succ) in self.kripke.relation(R_D)?.successor_groups(n) {
                        if succ.contains(&v.index()) {
                            e = e.union(&domain);
                        }
                    }
                }
                e
            }
            _ => {
                let mut e = Extent::empty(n);
                for w in 0..n {
                    if self.eval(phi, w)? {
                        e.insert(w);
                    }
                }
                e
            }
        })
    }
}

/// Checks `v(phi)` designated iff `dia_d phi` is true, and that every
/// `|dia_d phi|` is empty or everything. `base` is the valuation the model
/// was built from.
pub fn verify_matrix(model: &MatrixModel, base: &Interpretation, suite: &[MvFormula]) -> Result<LemmaVerdict> {
    let l = model.lattice().clone();
    let mut verdict = LemmaVerdict::new("matrix");
    for phi in suite {
        let v = valuation(base, phi)?;
        let left = model.matrix.is_designated(v);
        let ext = model.extent(&ModalFormula::DiaD(phi.clone()))?;
        let right = ext.is_full();
        let ok = left == right && (ext.is_empty() || ext.is_full());
        verdict.record(ok, || Witness {
            formula: phi.to_string(),
            side_left: format!("v = {}, designated = {left}", l.name_of(v)),
            side_right: format!("dia_d true at {} of {} worlds", ext.count(), ext.universe()),
        });
    }
    Ok(verdict)
}
