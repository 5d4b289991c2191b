//! Recursive-descent parser for the ASCII term grammar
//!
//! ```text
//! term  := disj
//! disj  := conj ('|' conj)*
//! conj  := comp ('&' comp)*
//! comp  := unary (';' unary)*
//! unary := '-' unary | atom '^'*
//! atom  := '1' | IDENT | '(' term ')'
//! ```
//!
//! `∪ ∩ − ⌣` are accepted as aliases of `| & - ^`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::RelTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [] => f.write_str("nothing")?,
            [one] => f.write_str(one)?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        match &self.found {
            Some(tok) => write!(f, ", found {tok}"),
            None => f.write_str(", found end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    One,
    Ident(Arc<str>),
    LParen,
    RParen,
    Bar,
    Amp,
    Semi,
    Minus,
    Caret,
    Invalid(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::One => "'1'".into(),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Semi => "';'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Invalid(c) => format!("character {c:?}"),
        }
    }
}

pub(crate) fn lex(input: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '1' => Tok::One,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' | '∪' => Tok::Bar,
            '&' | '∩' => Tok::Amp,
            ';' => Tok::Semi,
            '-' | '−' => Tok::Minus,
            '^' | '⌣' => Tok::Caret,
            'a'..='z' => {
                let mut end = pos;
                while let Some(&(p, ch)) = chars.peek() {
                    if ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '_' {
                        end = p + ch.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(Arc::from(&input[pos..end]))));
                continue;
            }
            other => Tok::Invalid(other),
        };
        chars.next();
        out.push((pos, tok));
    }
    out
}

const ATOM_START: &[&str] = &["'1'", "identifier", "'('", "'-'"];

pub(crate) struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_offset: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [(usize, Tok)], end_offset: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            end_offset,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end_offset)
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().map(Tok::describe),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["'|'", "'&'", "';'", "'^'", "end of input"]))
        }
    }

    pub(crate) fn term(&mut self) -> Result<RelTerm, ParseError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let rhs = self.conj()?;
            lhs = RelTerm::union(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<RelTerm, ParseError> {
        let mut lhs = self.comp()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.comp()?;
            lhs = RelTerm::inter(lhs, rhs);
        }
        Ok(lhs)
    }

    fn comp(&mut self) -> Result<RelTerm, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = RelTerm::comp(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<RelTerm, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(RelTerm::cmpl(self.unary()?));
        }
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            t = RelTerm::conv(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<RelTerm, ParseError> {
        match self.peek() {
            Some(Tok::One) => {
                self.pos += 1;
                Ok(RelTerm::One)
            }
            Some(Tok::Ident(name)) => {
                let t = RelTerm::Var(name.clone());
                self.pos += 1;
                Ok(t)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error(&["')'", "'|'", "'&'", "';'", "'^'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parses a term. The whole input must be consumed.
pub fn parse_term(input: &str) -> Result<RelTerm, ParseError> {
    let toks = lex(input);
    let mut p = Parser::new(&toks, input.len());
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
