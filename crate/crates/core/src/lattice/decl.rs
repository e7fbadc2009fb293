//! Lattice declaration files.
//!
//! ```text
//! lattice three {
//!   elements: lo mid hi;
//!   leq: lo <= mid; mid <= hi;
//!   neg: lo -> hi; mid -> mid; hi -> lo;
//!   op half/1: lo -> lo; mid -> lo; hi -> mid;
//! }
//! ```
//!
//! The order is the reflexive-transitive closure of the listed `leq` pairs.
//! Meet, join and implication are derived from it; `neg` and every `op`
//! table must be total. `%` starts a line comment.

use std::collections::BTreeMap;

use super::{Connective, LatticeSpec, TruthValue};
use crate::error::{Error, Result};

type OpRow = (Vec<String>, String, usize);

#[derive(Debug, Clone)]
enum Section {
    None,
    Elements,
    Leq,
    Neg,
    Op { name: String, arity: usize },
}

pub fn parse_lattice_decl(text: &str) -> Result<LatticeSpec> {
    let stripped: String = text
        .lines()
        .map(|l| l.split('%').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");

    let open = stripped
        .find('{')
        .ok_or_else(|| Error::parse(1, 1, "expected `lattice NAME {`"))?;
    let header: Vec<&str> = stripped[..open].split_whitespace().collect();
    let name = match header.as_slice() {
        ["lattice", name] => name.to_string(),
        _ => return Err(Error::parse(1, 1, "expected `lattice NAME {`")),
    };
    let close = stripped
        .rfind('}')
        .filter(|&c| c > open)
        .ok_or_else(|| Error::parse(line_of(&stripped, open), 1, "missing closing `}`"))?;
    if !stripped[close + 1..].trim().is_empty() {
        return Err(Error::parse(
            line_of(&stripped, close),
            1,
            "unexpected text after `}`",
        ));
    }

    let mut elements: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String, usize)> = Vec::new();
    let mut neg: Vec<(String, String, usize)> = Vec::new();
    // name -> (arity, [(args, result, line)])
    let mut ops: BTreeMap<String, (usize, Vec<OpRow>)> = BTreeMap::new();

    let mut section = Section::None;
    let mut offset = open + 1;
    for stmt in stripped[open + 1..close].split(';') {
        let line = line_of(&stripped, offset + stmt.len() - stmt.trim_start().len());
        offset += stmt.len() + 1;
        let mut body = stmt.trim();
        if body.is_empty() {
            continue;
        }
        if let Some((head, rest)) = body.split_once(':') {
            let head = head.trim();
            let new_section = if head == "elements" {
                Some(Section::Elements)
            } else if head == "leq" {
                Some(Section::Leq)
            } else if head == "neg" {
                Some(Section::Neg)
            } else if let Some(sig) = head.strip_prefix("op ") {
                let (op, arity) = sig
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| Error::parse(line, 1, "expected `op NAME/ARITY:`"))?;
                let arity: usize = arity
                    .trim()
                    .parse()
                    .ok()
                    .filter(|a| *a == 1 || *a == 2)
                    .ok_or_else(|| Error::parse(line, 1, "operator arity must be 1 or 2"))?;
                let op = op.trim().to_string();
                ops.entry(op.clone()).or_insert((arity, Vec::new()));
                Some(Section::Op { name: op, arity })
            } else {
                None
            };
            if let Some(s) = new_section {
                section = s;
                body = rest.trim();
            }
        }
        if body.is_empty() {
            continue;
        }
        match &section {
            Section::None => {
                return Err(Error::parse(line, 1, format!("statement outside a section: `{body}`")))
            }
            Section::Elements => elements.extend(body.split_whitespace().map(String::from)),
            Section::Leq => {
                let (a, b) = body
                    .split_once("<=")
                    .ok_or_else(|| Error::parse(line, 1, "expected `a <= b`"))?;
                pairs.push((a.trim().to_string(), b.trim().to_string(), line));
            }
            Section::Neg => {
                let (a, b) = body
                    .split_once("->")
                    .ok_or_else(|| Error::parse(line, 1, "expected `a -> b`"))?;
                neg.push((a.trim().to_string(), b.trim().to_string(), line));
            }
            Section::Op { name, arity } => {
                let (lhs, rhs) = body
                    .split_once("->")
                    .ok_or_else(|| Error::parse(line, 1, "expected `args -> value`"))?;
                let args: Vec<String> = lhs
                    .trim()
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .split(',')
                    .map(|a| a.trim().to_string())
                    .collect();
                if args.len() != *arity {
                    return Err(Error::parse(
                        line,
                        1,
                        format!("`{name}` takes {arity} argument(s)"),
                    ));
                }
                ops.get_mut(name)
                    .expect("registered when the section opened")
                    .1
                    .push((args, rhs.trim().to_string(), line));
            }
        }
    }

    let n = elements.len();
    let index = |s: &str, line: usize| -> Result<usize> {
        elements
            .iter()
            .position(|e| e == s)
            .ok_or_else(|| Error::parse(line, 1, format!("unknown element `{s}`")))
    };

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (a, b, line) in &pairs {
        leq[index(a, *line)? * n + index(b, *line)?] = true;
    }
    // Floyd-Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }

    let mut neg_table: Vec<Option<TruthValue>> = vec![None; n];
    for (a, b, line) in &neg {
        neg_table[index(a, *line)?] = Some(TruthValue::new(index(b, *line)?));
    }
    let neg_table = neg_table
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::parse(1, 1, format!("neg is undefined on `{}`", elements[i]))))
        .collect::<Result<Vec<_>>>()?;

    let mut extras = BTreeMap::new();
    for (op, (arity, entries)) in ops {
        let mut table: Vec<Option<TruthValue>> = vec![None; n.pow(arity as u32)];
        for (args, value, line) in &entries {
            let mut slot = 0;
            for a in args {
                slot = slot * n + index(a, *line)?;
            }
            table[slot] = Some(TruthValue::new(index(value, *line)?));
        }
        let table = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::parse(1, 1, format!("op `{op}` is not total")))?;
        extras.insert(
            op,
            if arity == 1 {
                Connective::Unary(table)
            } else {
                Connective::Binary(table)
            },
        );
    }

    LatticeSpec::from_order(name, elements, leq, neg_table, extras)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
