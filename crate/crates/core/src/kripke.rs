//! Multi-modal Kripke models shared by the reductions.
//!
//! Worlds are indices. In the autoreferential models they index the lattice
//! carrier; in the Suszko model they index the valuation space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::abstract_reduction::ValuationSpace;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, TruthValue};
use crate::syntax::ModalFormula;

/// A set of worlds as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Extent {
    words: Vec<u64>,
    len: usize,
}

impl Extent {
    pub fn empty(len: usize) -> Self {
        Extent {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut e = Extent {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        e.trim();
        e
    }

    pub fn singleton(len: usize, w: usize) -> Self {
        let mut e = Extent::empty(len);
        e.insert(w);
        e
    }

    pub fn from_worlds(len: usize, worlds: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Extent::empty(len);
        for w in worlds {
            e.insert(w);
        }
        e
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of worlds in the model, not in the set.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, w: usize) {
        assert!(w < self.len, "world {w} out of range");
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn contains(&self, w: usize) -> bool {
        w < self.len && self.words[w / 64] & (1 << (w % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&w| self.contains(w))
    }

    pub fn union(&self, other: &Extent) -> Extent {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Extent) -> Extent {
        self.zip(other, |a, b| a & b)
    }

    pub fn complement(&self) -> Extent {
        let mut e = Extent {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        e.trim();
        e
    }

    fn zip(&self, other: &Extent, f: impl Fn(u64, u64) -> u64) -> Extent {
        assert_eq!(self.len, other.len, "extents over different models");
        Extent {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            len: self.len,
        }
    }
}

impl fmt::Debug for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An accessibility relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `domain x codomain`.
    Product { domain: Extent, codomain: Vec<usize> },
    Pairs(BTreeSet<(usize, usize)>),
    Triples(BTreeSet<(usize, usize, usize)>),
}

impl Relation {
    pub fn arity(&self) -> usize {
        match self {
            Relation::Product { .. } | Relation::Pairs(_) => 2,
            Relation::Triples(_) => 3,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Relation::Product { domain, codomain } => domain.count() * codomain.len(),
            Relation::Pairs(p) => p.len(),
            Relation::Triples(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        match self {
            Relation::Product { domain, codomain } => domain.contains(a) && codomain.contains(&b),
            Relation::Pairs(p) => p.contains(&(a, b)),
            Relation::Triples(_) => false,
        }
    }

    pub fn contains_triple(&self, a: usize, b: usize, c: usize) -> bool {
        matches!(self, Relation::Triples(t) if t.contains(&(a, b, c)))
    }

    /// Worlds `y` with `(w, y)` in a binary relation.
    pub fn successors(&self, w: usize) -> Vec<usize> {
        match self {
            Relation::Product { domain, codomain } if domain.contains(w) => codomain.clone(),
            Relation::Product { .. } | Relation::Triples(_) => Vec::new(),
            Relation::Pairs(p) => p.range((w, 0)..=(w, usize::MAX)).map(|&(_, y)| y).collect(),
        }
    }

    /// Pairs `(y, z)` with `(w, y, z)` in a ternary relation.
    pub fn successor_pairs(&self, w: usize) -> Vec<(usize, usize)> {
        match self {
            Relation::Triples(t) => t
                .range((w, 0, 0)..=(w, usize::MAX, usize::MAX))
                .map(|&(_, y, z)| (y, z))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Partitions the worlds of a binary relation into groups sharing one
    /// successor list.
    pub fn successor_groups(&self, worlds: usize) -> Vec<(Extent, Vec<usize>)> {
        match self {
            Relation::Product { domain, codomain } => {
                vec![(domain.clone(), codomain.clone()), (domain.complement(), Vec::new())]
            }
            _ => (0..worlds)
                .map(|w| (Extent::singleton(worlds, w), self.successors(w)))
                .collect(),
        }
    }

    /// Every tuple, for dumping. Products are expanded.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        match self {
            Relation::Product { domain, codomain } => domain
                .iter()
                .flat_map(|a| codomain.iter().map(move |&b| vec![a, b]))
                .collect(),
            Relation::Pairs(p) => p.iter().map(|&(a, b)| vec![a, b]).collect(),
            Relation::Triples(t) => t.iter().map(|&(a, b, c)| vec![a, b, c]).collect(),
        }
    }
}

/// What the worlds of a model are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Worlds {
    /// The lattice carrier itself.
    Values(Arc<LatticeSpec>),
    /// Every interpretation of a Herbrand base.
    Valuations(ValuationSpace),
}

impl Worlds {
    pub fn len(&self) -> usize {
        match self {
            Worlds::Values(l) => l.len(),
            Worlds::Valuations(s) => s.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, w: usize) -> String {
        match self {
            Worlds::Values(l) => l.name_of(TruthValue::new(w)).to_string(),
            Worlds::Valuations(s) => s.describe(w),
        }
    }
}

/// The predicate valuation `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    /// For each `(predicate, constants)` the worlds where it holds; absent
    /// tuples hold nowhere.
    Sparse(BTreeMap<(String, Vec<String>), BTreeSet<usize>>),
    /// Every declared tuple holds exactly at these worlds.
    Uniform(Extent),
}

/// `(W, {R_i}, S, V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Worlds,
    pub relations: BTreeMap<String, Relation>,
    pub constants: Vec<String>,
    /// Predicates of `V` with their arities.
    pub predicates: BTreeMap<String, usize>,
    pub valuation: Valuation,
}

impl KripkeModel {
    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownConnective(name.to_string()))
    }

    pub fn check_world(&self, w: usize) -> Result<()> {
        if w < self.world_count() {
            Ok(())
        } else {
            Err(Error::UnknownWorld(w.to_string()))
        }
    }

    /// `V(w, p)(args) = 1`.
    pub fn holds(&self, w: usize, predicate: &str, args: &[String]) -> Result<bool> {
        self.check_world(w)?;
        match self.predicates.get(predicate) {
            None => return Err(Error::UnknownPredicate(predicate.to_string())),
            Some(&arity) if arity != args.len() => return Ok(false),
            Some(_) => {}
        }
        Ok(match &self.valuation {
            Valuation::Sparse(map) => map
                .get(&(predicate.to_string(), args.to_vec()))
                .is_some_and(|ws| ws.contains(&w)),
            Valuation::Uniform(e) => {
                args.iter().all(|c| self.constants.contains(c)) && e.contains(w)
            }
        })
    }

    /// Worlds by name, relations as tuple lists of world names, and the true
    /// `V` entries.
    pub fn to_json(&self) -> Value {
        let name = |w: usize| self.worlds.name(w);
        let relations: serde_json::Map<String, Value> = self
            .relations
            .iter()
            .map(|(k, r)| {
                let tuples: Vec<Vec<String>> = r
                    .tuples()
                    .into_iter()
                    .map(|t| t.into_iter().map(name).collect())
                    .collect();
                (k.clone(), json!(tuples))
            })
            .collect();
        let valuation = match &self.valuation {
            Valuation::Sparse(map) => Value::Array(
                map.iter()
                    .map(|((p, args), ws)| {
                        json!({
                            "predicate": p,
                            "args": args,
                            "worlds": ws.iter().map(|&w| name(w)).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            ),
            Valuation::Uniform(e) => json!({ "all_tuples_at": e.iter().map(name).collect::<Vec<_>>() }),
        };
        json!({
            "worlds": (0..self.world_count()).map(name).collect::<Vec<_>>(),
            "relations": relations,
            "constants": self.constants,
            "predicates": self.predicates,
            "valuation": valuation,
        })
    }
}

/// Satisfaction in one kind of model. Classical connectives are shared;
/// everything else is delegated to [`Semantics::eval_modal`].
pub trait Semantics {
    /// Name used in error messages (`unary`, `flat`, ...).
    const MODE: &'static str;

    fn kripke(&self) -> &KripkeModel;

    /// Satisfaction of a non-classical node at `w`.
    fn eval_modal(&self, phi: &ModalFormula, w: usize) -> Result<bool>;

    fn eval(&self, phi: &ModalFormula, w: usize) -> Result<bool> {
        self.kripke().check_world(w)?;
        match phi {
            ModalFormula::Not(x) => Ok(!self.eval(x, w)?),
            ModalFormula::And(x, y) => Ok(self.eval(x, w)? && self.eval(y, w)?),
            ModalFormula::Or(x, y) => Ok(self.eval(x, w)? || self.eval(y, w)?),
            ModalFormula::Implies(x, y) => Ok(!self.eval(x, w)? || self.eval(y, w)?),
            _ => self.eval_modal(phi, w),
        }
    }

    /// `|phi|`: the worlds where `phi` holds.
    fn extent(&self, phi: &ModalFormula) -> Result<Extent> {
        let n = self.kripke().world_count();
        let mut e = Extent::empty(n);
        for w in 0..n {
            if self.eval(phi, w)? {
                e.insert(w);
            }
        }
        Ok(e)
    }

    /// True at every world.
    fn is_true(&self, phi: &ModalFormula) -> Result<bool> {
        Ok(self.extent(phi)?.is_full())
    }

    fn wrong_mode<T>(phi: &ModalFormula) -> Result<T> {
        Err(Error::WrongMode {
            operator: phi.operator_name(),
            model: Self::MODE,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extent_set_algebra() {
        let a = Extent::from_worlds(70, [0, 5, 69]);
        let b = Extent::from_worlds(70, [5, 6]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), [0, 5, 6, 69]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), [5]);
        assert_eq!(a.complement().count(), 67);
        assert!(Extent::full(70).is_full());
        assert!(Extent::full(70).complement().is_empty());
        assert!(Extent::full(0).is_full() && Extent::full(0).is_empty());
    }

    #[test]
    fn relation_lookups() {
        let r = Relation::Triples([(0, 1, 2), (0, 2, 2), (1, 0, 0)].into_iter().collect());
        assert_eq!(r.successor_pairs(0), [(1, 2), (2, 2)]);
        assert!(r.contains_triple(1, 0, 0));
        let p = Relation::Product {
            domain: Extent::full(3),
            codomain: vec![2],
        };
        assert_eq!(p.successors(1), [2]);
        assert_eq!(p.len(), 3);
        assert!(p.contains_pair(0, 2) && !p.contains_pair(0, 1));
        let groups = p.successor_groups(3);
        assert_eq!(groups[0].1, [2]);
        assert!(groups[1].0.is_empty());
    }
}
