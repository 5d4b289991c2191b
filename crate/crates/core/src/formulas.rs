//! Formulas `xRy`, formula sets, and the literal-grounded constructions
//! used to decide when a Boolean formula is forced false by a set of
//! literals.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

use crate::relterm::parser::{lex, Parser, Tok};
use crate::relterm::{nf_cmpl, NotBoolean, ParseError, RelTerm};

/// An object (individual) variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjVar(Arc<str>);

impl ObjVar {
    pub fn new(name: impl AsRef<str>) -> Self {
        ObjVar(Arc::from(name.as_ref()))
    }

    /// The distinguished left endpoint of the input formula.
    pub fn x() -> Self {
        ObjVar::new("x")
    }

    /// The distinguished right endpoint of the input formula.
    pub fn y() -> Self {
        ObjVar::new("y")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ObjVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelFormula {
    pub left: ObjVar,
    pub term: RelTerm,
    pub right: ObjVar,
}

impl RelFormula {
    pub fn new(left: ObjVar, term: RelTerm, right: ObjVar) -> Self {
        RelFormula { left, term, right }
    }

    pub fn is_literal(&self) -> bool {
        is_literal(self)
    }

    /// Same endpoints, complemented term.
    pub fn negated(&self) -> RelFormula {
        RelFormula::new(self.left.clone(), RelTerm::cmpl(self.term.clone()), self.right.clone())
    }
}

impl fmt::Display for RelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.term, self.right)
    }
}

impl fmt::Debug for RelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Parses `IDENT TERM IDENT`, e.g. `x (r | s) y`.
pub fn parse_formula(input: &str) -> Result<RelFormula, ParseError> {
    let toks = lex(input);
    let ident = |i: usize| match toks.get(i) {
        Some((_, Tok::Ident(name))) => Some(ObjVar::new(&**name)),
        _ => None,
    };
    let left = ident(0).ok_or_else(|| ParseError {
        offset: toks.first().map(|t| t.0).unwrap_or(input.len()),
        expected: vec!["object variable"],
        found: toks.first().map(|(_, t)| format!("{t:?}")),
    })?;
    if toks.len() < 3 {
        return Err(ParseError {
            offset: input.len(),
            expected: vec!["term", "object variable"],
            found: None,
        });
    }
    let last = toks.len() - 1;
    let right = ident(last).ok_or_else(|| ParseError {
        offset: toks[last].0,
        expected: vec!["object variable"],
        found: Some(format!("{:?}", toks[last].1)),
    })?;
    let middle = &toks[1..last];
    let mut p = Parser::new(middle, toks[last].0);
    let term = p.term()?;
    p.finish()?;
    Ok(RelFormula::new(left, term, right))
}

/// Insertion-ordered set of formulas with constant-time membership.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FormulaSet(IndexSet<RelFormula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(IndexSet::new())
    }

    /// Returns `true` if the formula was not yet present.
    pub fn insert(&mut self, f: RelFormula) -> bool {
        self.0.insert(f)
    }

    /// Removes while keeping the order of the remaining formulas.
    pub fn remove(&mut self, f: &RelFormula) -> bool {
        self.0.shift_remove(f)
    }

    pub fn contains(&self, f: &RelFormula) -> bool {
        self.0.contains(f)
    }

    pub fn position(&self, f: &RelFormula) -> Option<usize> {
        self.0.get_index_of(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelFormula> {
        self.0.iter()
    }

    pub fn literals(&self) -> impl Iterator<Item = &RelFormula> {
        self.0.iter().filter(|f| f.is_literal())
    }

    /// Object variables in first-occurrence order.
    pub fn variables(&self) -> IndexSet<ObjVar> {
        let mut out = IndexSet::new();
        for f in &self.0 {
            out.insert(f.left.clone());
            out.insert(f.right.clone());
        }
        out
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.0.iter().all(|f| other.contains(f))
    }
}

impl FromIterator<RelFormula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = RelFormula>>(iter: I) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl Extend<RelFormula> for FormulaSet {
    fn extend<I: IntoIterator<Item = RelFormula>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a RelFormula;
    type IntoIter = indexmap::set::Iter<'a, RelFormula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    NotBoolean(#[from] NotBoolean),
}

pub fn is_literal(f: &RelFormula) -> bool {
    f.term.is_literal()
}

/// Decides whether `term`, placed between two fixed endpoints, is an
/// NBool formula with respect to the literals reported by `has_literal`.
///
/// The caller guarantees `term` is Boolean.
pub(crate) fn nbool_with(term: &RelTerm, has_literal: &dyn Fn(&RelTerm) -> bool) -> bool {
    match term {
        _ if term.is_literal() => has_literal(term),
        RelTerm::Inter(l, r) => {
            (nbool_with(l, has_literal) && r.is_cnf()) || (nbool_with(r, has_literal) && l.is_cnf())
        }
        RelTerm::Union(l, r) => nbool_with(l, has_literal) && nbool_with(r, has_literal),
        _ => false,
    }
}

fn literal_lookup<'a>(
    left: &'a ObjVar,
    right: &'a ObjVar,
    n: &'a FormulaSet,
) -> impl Fn(&RelTerm) -> bool + 'a {
    move |lit: &RelTerm| n.contains(&RelFormula::new(left.clone(), lit.clone(), right.clone()))
}

/// NBool_N membership: literals of N; `R & S` when one side is NBool_N and
/// the other is in complement normal form; `R | S` when both sides are.
pub fn is_nbool(f: &RelFormula, n: &FormulaSet) -> Result<bool, FormulaError> {
    if !f.term.is_boolean() {
        return Err(NotBoolean(f.term.clone()).into());
    }
    Ok(nbool_with(&f.term, &literal_lookup(&f.left, &f.right, n)))
}

/// `x nf(R) y` is an NBool_N formula.
pub fn has_nbool_construction(f: &RelFormula, n: &FormulaSet) -> Result<bool, FormulaError> {
    let nf = nf_cmpl(&f.term)?;
    Ok(nbool_with(&nf, &literal_lookup(&f.left, &f.right, n)))
}

/// All `z` among the variables of `n` such that `x R z` has an NBool
/// construction from `n`, in first-occurrence order.
pub fn v_set(r: &RelTerm, x: &ObjVar, n: &FormulaSet) -> Result<IndexSet<ObjVar>, FormulaError> {
    let nf = nf_cmpl(r)?;
    Ok(n
        .variables()
        .into_iter()
        .filter(|z| nbool_with(&nf, &literal_lookup(x, z, n)))
        .collect())
}
