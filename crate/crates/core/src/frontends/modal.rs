//! Multi-modal K formulas over programs built from accessibility
//! variables with `|` and `&`.
//!
//! ```text
//! iff   := imp ('<->' imp)*
//! imp   := or ('->' imp)?
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '~' unary | '[' TERM ']' unary | '<' TERM '>' unary | atom
//! atom  := IDENT | '(' iff ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::relterm::{fragment_check, parse_term, ParseError, RelTerm};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModalFormula {
    Prop(Arc<str>),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Box(RelTerm, Box<ModalFormula>),
    Dia(RelTerm, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn prop(name: impl AsRef<str>) -> Self {
        ModalFormula::Prop(Arc::from(name.as_ref()))
    }

    pub fn not(f: ModalFormula) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn and(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::or(ModalFormula::not(a), b)
    }

    pub fn boxed(program: RelTerm, f: ModalFormula) -> Self {
        ModalFormula::Box(program, Box::new(f))
    }

    pub fn dia(program: RelTerm, f: ModalFormula) -> Self {
        ModalFormula::Dia(program, Box::new(f))
    }

    pub fn depth(&self) -> usize {
        match self {
            ModalFormula::Prop(_) => 1,
            ModalFormula::Not(f) | ModalFormula::Box(_, f) | ModalFormula::Dia(_, f) => f.depth() + 1,
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => a.depth().max(b.depth()) + 1,
        }
    }

    /// Proposition names, sorted.
    pub fn propositions(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let ModalFormula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Accessibility variables used by the programs, sorted.
    pub fn accessibility_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let ModalFormula::Box(a, _) | ModalFormula::Dia(a, _) = f {
                out.extend(a.variables());
            }
        });
        out
    }

    fn walk(&self, visit: &mut dyn FnMut(&ModalFormula)) {
        visit(self);
        match self {
            ModalFormula::Prop(_) => {}
            ModalFormula::Not(f) | ModalFormula::Box(_, f) | ModalFormula::Dia(_, f) => f.walk(visit),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::Prop(p) => f.write_str(p),
            ModalFormula::Not(g) => write!(f, "~{}", Atomic(g)),
            ModalFormula::And(a, b) => write!(f, "{} & {}", Atomic(a), Atomic(b)),
            ModalFormula::Or(a, b) => write!(f, "{} | {}", Atomic(a), Atomic(b)),
            ModalFormula::Box(p, g) => write!(f, "[{}]{}", bare(p), Atomic(g)),
            ModalFormula::Dia(p, g) => write!(f, "<{}>{}", bare(p), Atomic(g)),
        }
    }
}

/// A program without its outer parentheses.
fn bare(p: &RelTerm) -> String {
    let s = p.to_string();
    match s.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(inner) if !matches!(p, RelTerm::Var(_)) => inner.to_string(),
        _ => s,
    }
}

/// Parenthesizes binary connectives.
struct Atomic<'a>(&'a ModalFormula);

impl fmt::Display for Atomic<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ModalFormula::And(..) | ModalFormula::Or(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("program `{program}` at offset {offset} must be built from variables with '|' and '&'")]
    ProgramNotPlain { program: RelTerm, offset: usize },
    #[error("`{0}` is used both as a proposition and as an accessibility variable")]
    NameClash(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(Arc<str>),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Box(RelTerm),
    Dia(RelTerm),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("identifier `{n}`"),
        Tok::Not => "'~'".into(),
        Tok::And => "'&'".into(),
        Tok::Or => "'|'".into(),
        Tok::Imp => "'->'".into(),
        Tok::Iff => "'<->'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Box(p) => format!("'[{p}]'"),
        Tok::Dia(p) => format!("'<{p}>'"),
    }
}

fn err(offset: usize, expected: &[&'static str], found: Option<String>) -> ModalError {
    ModalError::Parse(ParseError {
        offset,
        expected: expected.to_vec(),
        found,
    })
}

/// Parses the text of a program between its brackets.
fn program(text: &str, offset: usize) -> Result<RelTerm, ModalError> {
    let t = parse_term(text).map_err(|mut e| {
        e.offset += offset;
        ModalError::Parse(e)
    })?;
    if !t.is_plain_boolean() {
        return Err(ModalError::ProgramNotPlain { program: t, offset });
    }
    Ok(t)
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ModalError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let rest = &input[i..];
        let tok = match c {
            c if c.is_whitespace() => continue,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if rest.starts_with("->") => {
                chars.next();
                Tok::Imp
            }
            '<' if rest.starts_with("<->") => {
                chars.next();
                chars.next();
                Tok::Iff
            }
            '[' | '<' => {
                let close = if c == '[' { ']' } else { '>' };
                let Some(len) = rest[1..].find(close) else {
                    return Err(err(input.len(), &[if c == '[' { "']'" } else { "'>'" }], None));
                };
                let p = program(&rest[1..1 + len], i + 1)?;
                while chars.peek().is_some_and(|(j, _)| *j <= i + len + 1) {
                    chars.next();
                }
                if c == '[' {
                    Tok::Box(p)
                } else {
                    Tok::Dia(p)
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(Arc::from(&input[i..end]))
            }
            other => return Err(err(i, &["formula"], Some(format!("character {other:?}")))),
        };
        out.push((i, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn unexpected(&self, expected: &[&'static str]) -> ModalError {
        match self.toks.get(self.pos) {
            Some((at, t)) => err(*at, expected, Some(describe(t))),
            None => err(self.end, expected, None),
        }
    }

    fn iff(&mut self) -> Result<ModalFormula, ModalError> {
        let mut f = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let g = self.imp()?;
            f = ModalFormula::and(
                ModalFormula::implies(f.clone(), g.clone()),
                ModalFormula::implies(g, f),
            );
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<ModalFormula, ModalError> {
        let f = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            return Ok(ModalFormula::implies(f, self.imp()?));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<ModalFormula, ModalError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = ModalFormula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<ModalFormula, ModalError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = ModalFormula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<ModalFormula, ModalError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected(&["formula"]));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(ModalFormula::not(self.unary()?)),
            Tok::Box(p) => Ok(ModalFormula::boxed(p, self.unary()?)),
            Tok::Dia(p) => Ok(ModalFormula::dia(p, self.unary()?)),
            Tok::Ident(name) => Ok(ModalFormula::Prop(name)),
            Tok::LParen => {
                let f = self.iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected(&["')'"]));
                }
                self.pos += 1;
                Ok(f)
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["formula"]))
            }
        }
    }
}

/// Parses a modal formula; `->` and `<->` are expanded into `~`, `|`, `&`.
pub fn parse_modal(input: &str) -> Result<ModalFormula, ModalError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
        end: input.len(),
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected(&["end of input"]));
    }
    let props = f.propositions();
    if let Some(clash) = f.accessibility_vars().intersection(&props).next() {
        return Err(ModalError::NameClash(clash.to_string()));
    }
    Ok(f)
}

/// Right-ideal translation: `x τ(f) y` holds exactly when `f` holds at `x`.
pub fn translate_modal(f: &ModalFormula) -> RelTerm {
    let t = tau(f);
    assert!(fragment_check(&t).is_accept(), "translation of {f} left the fragment");
    t
}

fn tau(f: &ModalFormula) -> RelTerm {
    match f {
        ModalFormula::Prop(p) => RelTerm::comp(RelTerm::var(p), RelTerm::One),
        ModalFormula::Not(g) => RelTerm::cmpl(tau(g)),
        ModalFormula::And(a, b) => RelTerm::inter(tau(a), tau(b)),
        ModalFormula::Or(a, b) => RelTerm::union(tau(a), tau(b)),
        ModalFormula::Dia(a, g) => RelTerm::comp(a.clone(), tau(g)),
        ModalFormula::Box(a, g) => RelTerm::cmpl(RelTerm::comp(a.clone(), RelTerm::cmpl(tau(g)))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(s: &str) -> String {
        translate_modal(&parse_modal(s).unwrap()).to_string()
    }

    #[test]
    fn translations() {
        assert_eq!(tr("[r]p"), "-(r ; -(p ; 1))");
        assert_eq!(tr("<r|s>p"), "((r | s) ; (p ; 1))");
        assert_eq!(
            translate_modal(&parse_modal("[r](p -> q) -> ([r]p -> [r]q)").unwrap()),
            parse_term("--(r ; -(-(p ; 1) | (q ; 1))) | (--(r ; -(p ; 1)) | -(r ; -(q ; 1)))").unwrap()
        );
    }

    #[test]
    fn precedence() {
        let f = parse_modal("~p & q | <r>p -> q").unwrap();
        let expect = ModalFormula::implies(
            ModalFormula::or(
                ModalFormula::and(ModalFormula::not(ModalFormula::prop("p")), ModalFormula::prop("q")),
                ModalFormula::dia(parse_term("r").unwrap(), ModalFormula::prop("p")),
            ),
            ModalFormula::prop("q"),
        );
        assert_eq!(f, expect);
        assert_eq!(parse_modal("p <-> q").unwrap().depth(), 4);
        assert_eq!(parse_modal("[r & s]<r>(p)").unwrap().to_string(), "[r & s]<r>p");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_modal("[r](p &"), Err(ModalError::Parse(_))));
        assert!(matches!(parse_modal("[r"), Err(ModalError::Parse(_))));
        assert!(matches!(parse_modal("[-r]p"), Err(ModalError::ProgramNotPlain { .. })));
        assert!(matches!(parse_modal("[r;s]p"), Err(ModalError::ProgramNotPlain { .. })));
        assert!(matches!(parse_modal("[r]r"), Err(ModalError::NameClash(n)) if n == "r"));
        assert!(matches!(parse_modal("p q"), Err(ModalError::Parse(_))));
        let Err(ModalError::Parse(e)) = parse_modal("p & [r|]q") else {
            panic!("expected a parse error")
        };
        assert_eq!(e.offset, 7);
    }
}
