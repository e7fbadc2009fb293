//! Hand-written recursive descent over characters. Value lexemes
//! (`0.25`, `[0,0.5]`, `([0,1],[0,0])`) are context sensitive, so there is
//! no separate token pass.

use std::path::Path;
use std::sync::Arc;

use super::ast::*;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSelector, LatticeSpec, TruthValue};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |i| {
            before[i + 1..].chars().count()
        }) + 1;
        (line, col)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        self.error_at(self.pos, message)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        let (line, col) = self.line_col(pos);
        Err(Error::parse(line, col, message))
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('%') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Consumes `s` if the input continues with it.
    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Consumes keyword `kw` if it is not followed by an identifier character.
    fn eat_kw(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(kw)
            && !rest[kw.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of input".to_string(), |c| format!("`{c}`"));
            self.error(format!("expected `{s}`, found {found}"))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(rest[..end].to_string())
    }

    /// A value lexeme: a bracketed group, or a run of name characters where a
    /// `.` is only taken when a digit follows it.
    fn value_lexeme(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = self.rest();
        let bytes: Vec<(usize, char)> = rest.char_indices().collect();
        let end = match bytes.first() {
            Some((_, '(' | '[')) => {
                let mut depth = 0i32;
                let mut end = None;
                for &(i, c) in &bytes {
                    match c {
                        '(' | '[' => depth += 1,
                        ')' | ']' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(i + 1);
                                break;
                            }
                        }
                        '\n' => break,
                        _ => {}
                    }
                }
                match end {
                    Some(e) => e,
                    None => return self.error("unbalanced brackets in value"),
                }
            }
            Some(_) => {
                let mut end = 0;
                for (k, &(i, c)) in bytes.iter().enumerate() {
                    let digit_next = bytes.get(k + 1).is_some_and(|&(_, n)| n.is_ascii_digit());
                    if c.is_alphanumeric() || c == '_' || matches!(c, '⊤' | '⊥') || (c == '.' && digit_next) {
                        end = i + c.len_utf8();
                    } else {
                        break;
                    }
                }
                end
            }
            None => 0,
        };
        if end == 0 {
            return self.error("expected a truth value");
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn value(&mut self, lattice: &LatticeSpec) -> Result<TruthValue> {
        self.skip_ws();
        let start = self.pos;
        let lexeme = self.value_lexeme()?;
        match lattice.value(&lexeme) {
            Some(v) => Ok(v),
            None => self.error_at(
                start,
                format!("`{lexeme}` is not an element of lattice {}", lattice.name()),
            ),
        }
    }
}

fn term_of(name: String) -> Term {
    if name.starts_with(|c: char| c.is_uppercase() || c == '_') {
        Term::Var(name)
    } else {
        Term::Const(name)
    }
}

/// Options for [`parse_program_with`].
#[derive(Debug, Default, Clone)]
pub struct ParseOptions<'a> {
    /// Directory that `file:` lattice paths are relative to.
    pub base_dir: Option<&'a Path>,
    /// Replaces the lattice named in the program text.
    pub lattice: Option<(String, Arc<LatticeSpec>)>,
}

/// Parses a program; `file:` lattice paths are taken relative to the
/// working directory.
pub fn parse_program(text: &str) -> Result<Program> {
    parse_program_with(text, ParseOptions::default())
}

pub fn parse_program_with(text: &str, opts: ParseOptions<'_>) -> Result<Program> {
    let mut cur = Cursor::new(text);
    if !cur.eat_kw("lattice") {
        return cur.error("a program starts with `lattice SPEC.`");
    }
    // The selector runs to the end of its line; a trailing `.` ends it.
    cur.skip_ws();
    let line_end = cur.rest().find('\n').unwrap_or(cur.rest().len());
    let raw = cur.rest()[..line_end].split('%').next().unwrap_or("").trim();
    let Some(decl) = raw.strip_suffix('.') else {
        return cur.error("expected `.` after the lattice selector");
    };
    let decl = decl.trim().to_string();
    let decl_pos = cur.pos;
    cur.pos += line_end;

    let (decl, lattice) = match opts.lattice {
        Some(l) => l,
        None => {
            let sel: LatticeSelector = match decl.parse() {
                Ok(s) => s,
                Err(e) => return cur.error_at(decl_pos, e.to_string()),
            };
            (decl, Arc::new(sel.load(opts.base_dir)?))
        }
    };

    let mut program = Program::new(lattice.clone(), decl);
    while !cur.at_end() {
        let start = cur.pos;
        let rule = clause(&mut cur, &lattice)?;
        if rule.is_fact() && !rule.head.is_ground() {
            let (line, col) = cur.line_col(start);
            return Err(Error::parse(
                line,
                col,
                Error::VariableInFact(rule.head.to_string()).to_string(),
            ));
        }
        program.push(rule)?;
    }
    Ok(program)
}

fn clause(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<Rule> {
    cur.skip_ws();
    let head_pos = cur.pos;
    let head = atom(cur)?;
    if head.is_builtin() {
        return cur.error_at(head_pos, "a built-in predicate cannot be a clause head");
    }
    if cur.eat("<-") {
        cur.expect("@")?;
        let v = cur.value(lattice)?;
        cur.expect(".")?;
        Ok(Rule::fact(head, v))
    } else if cur.eat(":-") {
        let mut blocks = vec![block(cur)?];
        while cur.eat(";") {
            blocks.push(block(cur)?);
        }
        cur.expect(".")?;
        Ok(Rule::rule(head, blocks))
    } else {
        cur.error("expected `<-` or `:-`")
    }
}

fn block(cur: &mut Cursor<'_>) -> Result<Vec<Literal>> {
    let mut lits = vec![literal(cur)?];
    while cur.eat(",") {
        lits.push(literal(cur)?);
    }
    Ok(lits)
}

fn literal(cur: &mut Cursor<'_>) -> Result<Literal> {
    if cur.eat("~") {
        if cur.peek() == Some('~') {
            return cur.error("nested negation is not supported");
        }
        Ok(Literal::neg(atom(cur)?))
    } else {
        Ok(Literal::pos(atom(cur)?))
    }
}

/// `p`, `p(t1,...,tn)`, or an infix built-in `t1 = t2` / `t1 <= t2`.
fn atom(cur: &mut Cursor<'_>) -> Result<Atom> {
    cur.skip_ws();
    let start = cur.pos;
    let Some(name) = cur.ident() else {
        return cur.error("expected an atom");
    };
    if cur.eat("(") {
        let mut args = Vec::new();
        loop {
            match cur.ident() {
                Some(t) => args.push(term_of(t)),
                None => return cur.error("expected a term"),
            }
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
        return Ok(Atom::new(name, args));
    }
    // `<-` is the fact arrow, not a comparison.
    let rest = {
        cur.skip_ws();
        cur.rest()
    };
    let op = if rest.starts_with("<=") {
        Some(BUILTIN_LEQ)
    } else if rest.starts_with('=') {
        Some(BUILTIN_EQ)
    } else {
        None
    };
    if let Some(op) = op {
        cur.pos += op.len();
        let Some(rhs) = cur.ident() else {
            return cur.error("expected a term");
        };
        return Ok(Atom::new(op, vec![term_of(name), term_of(rhs)]));
    }
    if matches!(term_of(name.clone()), Term::Var(_)) {
        return cur.error_at(start, format!("`{name}` is a variable, not an atom"));
    }
    Ok(Atom::new(name, vec![]))
}

/// Parses a many-valued formula: atoms, `~`, `and`, `or`, `->`, `<-` and
/// extra connectives written `#name(x)` / `#name(x, y)`.
pub fn parse_mv_formula(text: &str, lattice: &LatticeSpec) -> Result<MvFormula> {
    let mut cur = Cursor::new(text);
    let f = mv_implies(&mut cur, lattice)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a thesis: `phi`, `phi <- @alpha` or `phi :- psi`.
pub fn parse_thesis(text: &str, lattice: &LatticeSpec) -> Result<Thesis> {
    let mut cur = Cursor::new(text);
    let t = thesis(&mut cur, lattice)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(t)
}

fn thesis(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<Thesis> {
    let head = mv_implies(cur, lattice)?;
    if cur.eat("<-") {
        cur.expect("@")?;
        Ok(Thesis::Annotated(head, cur.value(lattice)?))
    } else if cur.eat(":-") {
        Ok(Thesis::Rule(head, mv_implies(cur, lattice)?))
    } else {
        Ok(Thesis::Bare(head))
    }
}

fn mv_implies(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<MvFormula> {
    let lhs = mv_or(cur, lattice)?;
    if cur.eat("->") {
        let rhs = mv_implies(cur, lattice)?;
        return Ok(lhs.implies(rhs));
    }
    let save = cur.pos;
    if cur.eat("<-") {
        if cur.peek() == Some('@') {
            // Fact annotation; left for the thesis parser.
            cur.pos = save;
            return Ok(lhs);
        }
        let rhs = mv_implies(cur, lattice)?;
        return Ok(rhs.implies(lhs));
    }
    Ok(lhs)
}

fn mv_or(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<MvFormula> {
    let mut f = mv_and(cur, lattice)?;
    while cur.eat_kw("or") {
        f = f.or(mv_and(cur, lattice)?);
    }
    Ok(f)
}

fn mv_and(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<MvFormula> {
    let mut f = mv_unary(cur, lattice)?;
    while cur.eat_kw("and") {
        f = f.and(mv_unary(cur, lattice)?);
    }
    Ok(f)
}

fn mv_unary(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<MvFormula> {
    if cur.eat("~") {
        return Ok(mv_unary(cur, lattice)?.not());
    }
    if cur.eat("#") {
        let pos = cur.pos;
        let Some(op) = cur.ident() else {
            return cur.error("expected a connective name after `#`");
        };
        cur.expect("(")?;
        let x = mv_implies(cur, lattice)?;
        let f = if cur.eat(",") {
            let y = mv_implies(cur, lattice)?;
            MvFormula::Op2(op.clone(), Box::new(x), Box::new(y))
        } else {
            MvFormula::Op1(op.clone(), Box::new(x))
        };
        cur.expect(")")?;
        let arity = if matches!(f, MvFormula::Op1(..)) { 1 } else { 2 };
        if lattice.extra(&op).map(|c| c.arity()) != Some(arity) {
            return cur.error_at(pos, format!("lattice {} has no connective {op}/{arity}", lattice.name()));
        }
        return Ok(f);
    }
    if cur.eat("(") {
        let f = mv_implies(cur, lattice)?;
        cur.expect(")")?;
        return Ok(f);
    }
    Ok(MvFormula::Atom(atom(cur)?))
}

/// Parses a formula of the two-valued reductions.
///
/// ```text
/// formula := disj (("->" | "<-A") formula)?
/// disj    := conj (("or" | "orA") conj)*
/// conj    := unary (("and" | "andA") unary)*
/// unary   := "not" unary | "~A" unary | "dia" unary
///          | "box_gamma" thesis-primary | "dia_d" mv-unary | primary
/// primary := "(" formula ")" | "E(" mv ")" | "[" VALUE "]" atom
///          | p_F(t, ..., VALUE) | atom
/// ```
pub fn parse_formula(text: &str, lattice: &LatticeSpec) -> Result<ModalFormula> {
    let mut cur = Cursor::new(text);
    let f = m_implies(&mut cur, lattice)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(f)
}

fn m_implies(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<ModalFormula> {
    let lhs = m_or(cur, lattice)?;
    if cur.eat("->") {
        Ok(lhs.implies(m_implies(cur, lattice)?))
    } else if cur.eat("<-A") {
        Ok(ModalFormula::ImpliedByA(
            Box::new(lhs),
            Box::new(m_implies(cur, lattice)?),
        ))
    } else {
        Ok(lhs)
    }
}

fn m_or(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<ModalFormula> {
    let mut f = m_and(cur, lattice)?;
    loop {
        if cur.eat_kw("orA") {
            f = ModalFormula::OrA(Box::new(f), Box::new(m_and(cur, lattice)?));
        } else if cur.eat_kw("or") {
            f = f.or(m_and(cur, lattice)?);
        } else {
            return Ok(f);
        }
    }
}

fn m_and(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<ModalFormula> {
    let mut f = m_unary(cur, lattice)?;
    loop {
        if cur.eat_kw("andA") {
            f = ModalFormula::AndA(Box::new(f), Box::new(m_unary(cur, lattice)?));
        } else if cur.eat_kw("and") {
            f = f.and(m_unary(cur, lattice)?);
        } else {
            return Ok(f);
        }
    }
}

fn m_unary(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<ModalFormula> {
    if cur.eat_kw("not") {
        return Ok(m_unary(cur, lattice)?.not());
    }
    if cur.eat_kw("~A") || cur.eat("~A ") {
        return Ok(ModalFormula::NegA(Box::new(m_unary(cur, lattice)?)));
    }
    if cur.eat_kw("dia") {
        return Ok(m_unary(cur, lattice)?.dia());
    }
    if cur.eat_kw("box_gamma") || cur.eat_kw("box") {
        let t = if cur.peek() == Some('(') {
            let save = cur.pos;
            cur.eat("(");
            let t = thesis(cur, lattice)?;
            if cur.eat(")") {
                t
            } else {
                cur.pos = save;
                Thesis::Bare(mv_unary(cur, lattice)?)
            }
        } else {
            Thesis::Bare(mv_unary(cur, lattice)?)
        };
        // A parenthesized bare formula is just a formula.
        return Ok(ModalFormula::BoxGamma(t));
    }
    if cur.eat_kw("dia_d") {
        return Ok(ModalFormula::DiaD(mv_unary(cur, lattice)?));
    }
    m_primary(cur, lattice)
}

fn m_primary(cur: &mut Cursor<'_>, lattice: &LatticeSpec) -> Result<ModalFormula> {
    if cur.eat("(") {
        let f = m_implies(cur, lattice)?;
        cur.expect(")")?;
        return Ok(f);
    }
    if cur.peek() == Some('[') {
        let inner = cur.value_lexeme()?;
        let lexeme = &inner[1..inner.len() - 1];
        let v = lattice.value(lexeme).map_or_else(
            || cur.error(format!("`{lexeme}` is not an element of lattice {}", lattice.name())),
            Ok,
        )?;
        return Ok(ModalFormula::Modal(v, atom(cur)?));
    }
    let save = cur.pos;
    if cur.eat_kw("E") && cur.eat("(") {
        let f = mv_implies(cur, lattice)?;
        cur.expect(")")?;
        return Ok(ModalFormula::Encap(f));
    }
    cur.pos = save;

    cur.skip_ws();
    let start = cur.pos;
    let Some(name) = cur.ident() else {
        return cur.error("expected a formula");
    };
    if let Some(pred) = name.strip_suffix("_F") {
        cur.expect("(")?;
        let mut parts = Vec::new();
        loop {
            cur.skip_ws();
            parts.push(cur.value_lexeme()?);
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
        let last = parts.pop().expect("at least one argument");
        let value = match lattice.value(&last) {
            Some(v) => Reflected::Value(v),
            None if last == "e" => Reflected::Error,
            None => {
                return cur.error(format!(
                    "`{last}` is not an element of lattice {}",
                    lattice.name()
                ))
            }
        };
        return Ok(ModalFormula::Flat(FlatAtom {
            predicate: pred.to_string(),
            args: parts.into_iter().map(term_of).collect(),
            value,
        }));
    }
    cur.pos = start;
    let a = atom(cur)?;
    Ok(ModalFormula::Plain(a))
}
