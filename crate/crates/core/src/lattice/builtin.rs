use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{format_decimal, Connective, LatticeSpec, TruthValue, MAX_CARRIER};
use crate::error::{Error, Result};

/// Names one of the built-in lattices, or a declaration file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeSelector {
    /// Belnap's four values under the truth order.
    Belnap4,
    /// `[0,1]` discretized to `k` evenly spaced points.
    Fuzzy(usize),
    /// Closed subintervals of the `k`-point grid.
    Interval(usize),
    /// (belief, doubt) pairs of grid intervals.
    Confidence(usize),
    File(PathBuf),
}

impl FromStr for LatticeSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let grid = |arg: Option<&str>| -> Result<usize> {
            arg.ok_or_else(|| Error::UnknownLattice(s.to_string()))?
                .parse::<usize>()
                .map_err(|_| Error::UnknownLattice(s.to_string()))
        };
        match head {
            "belnap4" | "belnap" if arg.is_none() => Ok(LatticeSelector::Belnap4),
            "fuzzy" | "fuzzy_chain" => Ok(LatticeSelector::Fuzzy(grid(arg)?)),
            "interval" => Ok(LatticeSelector::Interval(grid(arg)?)),
            "confidence" => Ok(LatticeSelector::Confidence(grid(arg)?)),
            "file" => {
                let path = arg
                    .map(|a| a.trim_matches('"'))
                    .filter(|a| !a.is_empty())
                    .ok_or_else(|| Error::UnknownLattice(s.to_string()))?;
                Ok(LatticeSelector::File(PathBuf::from(path)))
            }
            _ => Err(Error::UnknownLattice(s.to_string())),
        }
    }
}

impl fmt::Display for LatticeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSelector::Belnap4 => write!(f, "belnap4"),
            LatticeSelector::Fuzzy(k) => write!(f, "fuzzy:{k}"),
            LatticeSelector::Interval(k) => write!(f, "interval:{k}"),
            LatticeSelector::Confidence(k) => write!(f, "confidence:{k}"),
            LatticeSelector::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl LatticeSelector {
    /// Builds the selected lattice. Relative declaration-file paths are
    /// resolved against `base_dir` when one is given.
    pub fn load(&self, base_dir: Option<&Path>) -> Result<LatticeSpec> {
        match self {
            LatticeSelector::File(path) => {
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&path)?;
                super::parse_lattice_decl(&text)
            }
            other => builtin_lattice(other),
        }
    }
}

/// Constructs one of the built-in lattices.
pub fn builtin_lattice(which: &LatticeSelector) -> Result<LatticeSpec> {
    match *which {
        LatticeSelector::Belnap4 => belnap4(),
        LatticeSelector::Fuzzy(k) => fuzzy_chain(k),
        LatticeSelector::Interval(k) => interval(k),
        LatticeSelector::Confidence(k) => confidence(k),
        LatticeSelector::File(_) => Err(Error::UnknownLattice(which.to_string())),
    }
}

fn grid_check(name: &str, k: usize, size: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::GridTooSmall(k));
    }
    if size > MAX_CARRIER || k > 1001 {
        return Err(Error::LatticeTooLarge {
            name: name.to_string(),
            size,
            limit: MAX_CARRIER,
        });
    }
    Ok(())
}

fn grid_name(i: usize, k: usize) -> String {
    format_decimal(i as f64 / (k - 1) as f64)
}

fn order_table(n: usize, le: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    (0..n * n).map(|i| le(i / n, i % n)).collect()
}

fn fuzzy_chain(k: usize) -> Result<LatticeSpec> {
    let name = format!("fuzzy:{k}");
    grid_check(&name, k, k)?;
    let elements = (0..k).map(|i| grid_name(i, k)).collect();
    let leq = order_table(k, |a, b| a <= b);
    let neg = (0..k).map(|i| TruthValue::new(k - 1 - i)).collect();
    LatticeSpec::from_order(name, elements, leq, neg, BTreeMap::new())
}

/// Grid intervals `[i, j]` with `i <= j`, lexicographic.
fn grid_intervals(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

fn interval_name((i, j): (usize, usize), k: usize) -> String {
    format!("[{},{}]", grid_name(i, k), grid_name(j, k))
}

fn interval(k: usize) -> Result<LatticeSpec> {
    let name = format!("interval:{k}");
    grid_check(&name, k, k * (k + 1) / 2)?;
    let cells = grid_intervals(k);
    let index: BTreeMap<_, _> = cells.iter().enumerate().map(|(n, &c)| (c, n)).collect();
    let n = cells.len();
    let elements = cells.iter().map(|&c| interval_name(c, k)).collect();
    let leq = order_table(n, |a, b| {
        let ((x, y), (x1, y1)) = (cells[a], cells[b]);
        x <= x1 && y <= y1
    });
    let neg = cells
        .iter()
        .map(|&(x, y)| TruthValue::new(index[&(k - 1 - y, k - 1 - x)]))
        .collect();
    LatticeSpec::from_order(name, elements, leq, neg, BTreeMap::new())
}

fn confidence(k: usize) -> Result<LatticeSpec> {
    let name = format!("confidence:{k}");
    let m = k * (k + 1) / 2;
    grid_check(&name, k, m.saturating_mul(m))?;
    let cells = grid_intervals(k);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|b| (0..m).map(move |d| (b, d))).collect();
    let n = pairs.len();
    let interval_le = |a: usize, b: usize| {
        let ((x, y), (x1, y1)) = (cells[a], cells[b]);
        x <= x1 && y <= y1
    };
    let elements = pairs
        .iter()
        .map(|&(b, d)| format!("({},{})", interval_name(cells[b], k), interval_name(cells[d], k)))
        .collect();
    let leq = order_table(n, |a, b| {
        let ((b0, d0), (b1, d1)) = (pairs[a], pairs[b]);
        interval_le(b0, b1) && interval_le(d1, d0)
    });
    let neg = pairs
        .iter()
        .map(|&(b, d)| TruthValue::new(d * m + b))
        .collect();
    LatticeSpec::from_order(name, elements, leq, neg, BTreeMap::new())
}

const F: usize = 0;
const T: usize = 1;
const BOT: usize = 2;
const TOP: usize = 3;

fn belnap4() -> Result<LatticeSpec> {
    let elements: Vec<String> = ["f", "t", "bot", "top"].map(String::from).into();
    let truth_le = |a: usize, b: usize| a == b || a == F || b == T;
    let knowledge_le = |a: usize, b: usize| a == b || a == BOT || b == TOP;

    let mut extras = BTreeMap::new();
    let (k_meet, k_join) = bounds(4, knowledge_le);
    extras.insert("otimes".to_string(), Connective::Binary(k_meet));
    extras.insert("oplus".to_string(), Connective::Binary(k_join));
    // Conflation: keeps t and f, swaps the two knowledge extremes.
    extras.insert(
        "conflation".to_string(),
        Connective::Unary([F, T, TOP, BOT].map(TruthValue::new).into()),
    );
    // Moore's autoepistemic operator.
    extras.insert(
        "mu".to_string(),
        Connective::Unary([F, T, F, T].map(TruthValue::new).into()),
    );

    let neg = [T, F, BOT, TOP].map(TruthValue::new).into();
    let spec = LatticeSpec::from_order("belnap4", elements, order_table(4, truth_le), neg, extras)?;

    // Pseudo-complement: x -> f.
    let f = TruthValue::new(F);
    let neg_t = spec.values().map(|x| spec.implies(x, f)).collect();
    let mut tables = spec.into_tables();
    tables.extras.insert("neg_t".to_string(), Connective::Unary(neg_t));
    Ok(LatticeSpec::from_tables(tables)
        .validate()?
        .with_alias("⊥", TruthValue::new(BOT))
        .with_alias("⊤", TruthValue::new(TOP))
        .with_alias("0", TruthValue::new(F))
        .with_alias("1", TruthValue::new(T)))
}

/// Meet and join tables of a finite lattice given by its order.
fn bounds(n: usize, le: impl Fn(usize, usize) -> bool) -> (Vec<TruthValue>, Vec<TruthValue>) {
    let pick = |a: usize, b: usize, lower: bool| {
        let cands: Vec<usize> = (0..n)
            .filter(|&c| if lower { le(c, a) && le(c, b) } else { le(a, c) && le(b, c) })
            .collect();
        let best = cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&d| if lower { le(d, c) } else { le(c, d) }))
            .expect("order is a lattice");
        TruthValue::new(best)
    };
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            meet.push(pick(a, b, true));
            join.push(pick(a, b, false));
        }
    }
    (meet, join)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::check_lattice;

    fn v(l: &LatticeSpec, s: &str) -> TruthValue {
        l.value(s).unwrap_or_else(|| panic!("no element {s}"))
    }

    #[test]
    fn belnap_values() {
        let l = belnap4().unwrap();
        let (f, t, bot, top) = (v(&l, "f"), v(&l, "t"), v(&l, "bot"), v(&l, "top"));
        assert_eq!(l.meet(top, bot), f);
        assert_eq!(l.join(top, bot), t);
        assert_eq!(l.apply_binary("otimes", f, t).unwrap(), bot);
        assert_eq!(l.apply_binary("oplus", f, t).unwrap(), top);
        assert_eq!(l.neg(bot), bot);
        assert_eq!(l.neg(top), top);
        assert_eq!(l.neg(t), f);
        assert_eq!(l.neg(f), t);
        assert_eq!((l.bottom(), l.top()), (f, t));
        assert_eq!(v(&l, "⊤"), top);
        assert_eq!(v(&l, "1"), t);
    }

    #[test]
    fn belnap_pseudo_complement() {
        let l = belnap4().unwrap();
        let nt = |s| l.name_of(l.apply_unary("neg_t", v(&l, s)).unwrap()).to_string();
        assert_eq!(nt("f"), "t");
        assert_eq!(nt("t"), "f");
        // {z | z /\ bot <= f} = {f, top}
        assert_eq!(nt("bot"), "top");
        assert_eq!(nt("top"), "bot");
    }

    #[test]
    fn fuzzy_negation_and_names() {
        let l = fuzzy_chain(5).unwrap();
        let names: Vec<_> = l.values().map(|x| l.name_of(x).to_string()).collect();
        assert_eq!(names, ["0", "0.25", "0.5", "0.75", "1"]);
        assert_eq!(l.neg(v(&l, "0.25")), v(&l, "0.75"));
        assert_eq!(l.value("0.250"), Some(v(&l, "0.25")));
    }

    #[test]
    fn interval_carrier_and_negation() {
        let l = interval(3).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.name_of(l.bottom()), "[0,0]");
        assert_eq!(l.name_of(l.top()), "[1,1]");
        assert_eq!(l.neg(v(&l, "[0,0.5]")), v(&l, "[0.5,1]"));
        assert_eq!(
            l.meet(v(&l, "[0,1]"), v(&l, "[0.5,0.5]")),
            v(&l, "[0,0.5]")
        );
    }

    #[test]
    fn confidence_bounds_and_negation() {
        let l = confidence(2).unwrap();
        assert_eq!(l.len(), 9);
        assert_eq!(l.name_of(l.bottom()), "([0,0],[1,1])");
        assert_eq!(l.name_of(l.top()), "([1,1],[0,0])");
        assert_eq!(
            l.neg(v(&l, "([0,1],[1,1])")),
            v(&l, "([1,1],[0,1])")
        );
        assert!(check_lattice(&l).is_empty());
    }

    #[test]
    fn selector_round_trip() {
        for s in ["belnap4", "fuzzy:5", "interval:3", "confidence:2", "file:x.lat"] {
            let sel: LatticeSelector = s.parse().unwrap();
            assert_eq!(sel.to_string(), s);
        }
        assert!("nope".parse::<LatticeSelector>().is_err());
        assert!("fuzzy".parse::<LatticeSelector>().is_err());
    }

    #[test]
    fn grid_too_small() {
        assert!(matches!(fuzzy_chain(1), Err(Error::GridTooSmall(1))));
        assert!(matches!(
            builtin_lattice(&LatticeSelector::Interval(0)),
            Err(Error::GridTooSmall(0))
        ));
    }

    #[test]
    fn residuum_examples() {
        let l = fuzzy_chain(5).unwrap();
        assert_eq!(l.residuum(v(&l, "0.75"), v(&l, "0.5")).unwrap(), v(&l, "0.5"));
        let b = belnap4().unwrap();
        assert_eq!(b.residuum(v(&b, "t"), v(&b, "f")).unwrap(), v(&b, "f"));
        assert_eq!(b.residuum(v(&b, "f"), v(&b, "top")).unwrap(), v(&b, "t"));
    }
}
