//! Relational terms: representation, text form, the one-identities,
//! complement normal form, component sets and fragment membership.

mod fragment;
pub(crate) mod parser;
mod simplify;

use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

pub use fragment::{fragment_check, FragmentClause, FragmentVerdict, Rejection};
pub use parser::{parse_term, ParseError};
pub use simplify::{nf_cmpl, simplify_ones};

/// A term of the relational logic with the universal constant `1`.
///
/// Children are reference counted so cloning is cheap and subterms can be
/// shared freely; equality, ordering and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelTerm {
    One,
    Var(Arc<str>),
    Cmpl(Arc<RelTerm>),
    Union(Arc<RelTerm>, Arc<RelTerm>),
    Inter(Arc<RelTerm>, Arc<RelTerm>),
    Comp(Arc<RelTerm>, Arc<RelTerm>),
    Conv(Arc<RelTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term `{0}` is not Boolean (it contains composition or converse)")]
pub struct NotBoolean(pub RelTerm);

impl RelTerm {
    pub fn var(name: impl AsRef<str>) -> Self {
        RelTerm::Var(Arc::from(name.as_ref()))
    }

    pub fn cmpl(t: RelTerm) -> Self {
        RelTerm::Cmpl(Arc::new(t))
    }

    pub fn union(l: RelTerm, r: RelTerm) -> Self {
        RelTerm::Union(Arc::new(l), Arc::new(r))
    }

    pub fn inter(l: RelTerm, r: RelTerm) -> Self {
        RelTerm::Inter(Arc::new(l), Arc::new(r))
    }

    pub fn comp(l: RelTerm, r: RelTerm) -> Self {
        RelTerm::Comp(Arc::new(l), Arc::new(r))
    }

    pub fn conv(t: RelTerm) -> Self {
        RelTerm::Conv(Arc::new(t))
    }

    pub fn neg_one() -> Self {
        RelTerm::cmpl(RelTerm::One)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, RelTerm::One)
    }

    pub fn is_neg_one(&self) -> bool {
        matches!(self, RelTerm::Cmpl(t) if t.is_one())
    }

    /// `1`, a variable, or the complement of one of those.
    pub fn is_literal(&self) -> bool {
        match self {
            RelTerm::One | RelTerm::Var(_) => true,
            RelTerm::Cmpl(t) => matches!(**t, RelTerm::One | RelTerm::Var(_)),
            _ => false,
        }
    }

    /// Only `-`, `|` and `&` occur.
    pub fn is_boolean(&self) -> bool {
        match self {
            RelTerm::One | RelTerm::Var(_) => true,
            RelTerm::Cmpl(t) => t.is_boolean(),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) => l.is_boolean() && r.is_boolean(),
            RelTerm::Comp(..) | RelTerm::Conv(_) => false,
        }
    }

    /// Built from variables with `|` and `&` only.
    pub fn is_plain_boolean(&self) -> bool {
        match self {
            RelTerm::Var(_) => true,
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) => {
                l.is_plain_boolean() && r.is_plain_boolean()
            }
            _ => false,
        }
    }

    /// Complements act only on variables and the constant.
    pub fn is_cnf(&self) -> bool {
        match self {
            RelTerm::One | RelTerm::Var(_) => true,
            RelTerm::Cmpl(t) => matches!(**t, RelTerm::One | RelTerm::Var(_)),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                l.is_cnf() && r.is_cnf()
            }
            RelTerm::Conv(t) => t.is_cnf(),
        }
    }

    pub fn contains_one(&self) -> bool {
        match self {
            RelTerm::One => true,
            RelTerm::Var(_) => false,
            RelTerm::Cmpl(t) | RelTerm::Conv(t) => t.contains_one(),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                l.contains_one() || r.contains_one()
            }
        }
    }

    pub fn contains_comp(&self) -> bool {
        match self {
            RelTerm::One | RelTerm::Var(_) => false,
            RelTerm::Comp(..) => true,
            RelTerm::Cmpl(t) | RelTerm::Conv(t) => t.contains_comp(),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) => l.contains_comp() || r.contains_comp(),
        }
    }

    /// Number of nodes in the parse tree.
    pub fn size(&self) -> usize {
        match self {
            RelTerm::One | RelTerm::Var(_) => 1,
            RelTerm::Cmpl(t) | RelTerm::Conv(t) => 1 + t.size(),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Height of the parse tree; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            RelTerm::One | RelTerm::Var(_) => 1,
            RelTerm::Cmpl(t) | RelTerm::Conv(t) => 1 + t.depth(),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Relational variable names in first-occurrence order.
    pub fn variables(&self) -> IndexSet<Arc<str>> {
        let mut out = IndexSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut IndexSet<Arc<str>>) {
        match self {
            RelTerm::One => {}
            RelTerm::Var(name) => {
                out.insert(name.clone());
            }
            RelTerm::Cmpl(t) | RelTerm::Conv(t) => t.collect_variables(out),
            RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Every subterm, parents before children, left before right.
    pub fn subterms(&self) -> Vec<&RelTerm> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                RelTerm::One | RelTerm::Var(_) => {}
                RelTerm::Cmpl(c) | RelTerm::Conv(c) => stack.push(c),
                RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }
}

/// Canonical, fully parenthesized text form. `parse_term` inverts it.
pub fn render_term(t: &RelTerm) -> String {
    t.to_string()
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelTerm::One => f.write_str("1"),
            RelTerm::Var(name) => f.write_str(name),
            RelTerm::Cmpl(t) => match **t {
                RelTerm::Cmpl(_) | RelTerm::Conv(_) => write!(f, "-({t})"),
                _ => write!(f, "-{t}"),
            },
            RelTerm::Union(l, r) => write!(f, "({l} | {r})"),
            RelTerm::Inter(l, r) => write!(f, "({l} & {r})"),
            RelTerm::Comp(l, r) => write!(f, "({l} ; {r})"),
            RelTerm::Conv(t) => match **t {
                RelTerm::Cmpl(_) => write!(f, "({t})^"),
                _ => write!(f, "{t}^"),
            },
        }
    }
}

impl fmt::Debug for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl std::str::FromStr for RelTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Syntactic flags of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct TermClass {
    /// Variables joined by `|` and `&`, no complement, no `1`.
    pub is_plain_boolean: bool,
    /// Complements act only on variables and `1`.
    pub is_cnf: bool,
    /// Admissible as the right argument of a fragment composition: `1`, or
    /// a fragment term in which `1` occurs only inside `(B ; 1)`.
    pub is_fragment_s: bool,
    pub contains_one: bool,
    pub contains_conv: bool,
}

#[derive(Clone, Copy)]
struct Flags {
    plain: bool,
    cnf: bool,
    one: bool,
    conv: bool,
    // every occurrence of `1` sits inside some `(B ; 1)` with B plain
    one_guarded: bool,
    in_fragment: bool,
}

impl Flags {
    fn fragment_s(&self, is_one: bool) -> bool {
        is_one || (self.in_fragment && self.one_guarded)
    }
}

fn flags(t: &RelTerm) -> Flags {
    match t {
        RelTerm::One => Flags {
            plain: false,
            cnf: true,
            one: true,
            conv: false,
            one_guarded: false,
            in_fragment: true,
        },
        RelTerm::Var(_) => Flags {
            plain: true,
            cnf: true,
            one: false,
            conv: false,
            one_guarded: true,
            in_fragment: true,
        },
        RelTerm::Cmpl(c) => {
            let inner = flags(c);
            Flags {
                plain: false,
                cnf: matches!(**c, RelTerm::One | RelTerm::Var(_)),
                ..inner
            }
        }
        RelTerm::Conv(c) => {
            let inner = flags(c);
            Flags {
                plain: false,
                conv: true,
                in_fragment: false,
                ..inner
            }
        }
        RelTerm::Union(l, r) | RelTerm::Inter(l, r) => {
            let (a, b) = (flags(l), flags(r));
            Flags {
                plain: a.plain && b.plain,
                cnf: a.cnf && b.cnf,
                one: a.one || b.one,
                conv: a.conv || b.conv,
                one_guarded: a.one_guarded && b.one_guarded,
                in_fragment: a.in_fragment && b.in_fragment,
            }
        }
        RelTerm::Comp(l, r) => {
            let (a, b) = (flags(l), flags(r));
            let left_ok = l.is_one() || a.plain;
            let right_ok = b.fragment_s(r.is_one());
            Flags {
                plain: false,
                cnf: a.cnf && b.cnf,
                one: a.one || b.one,
                conv: a.conv || b.conv,
                one_guarded: (a.plain && r.is_one()) || (a.one_guarded && b.one_guarded),
                in_fragment: left_ok && right_ok,
            }
        }
    }
}

pub fn classify(t: &RelTerm) -> TermClass {
    let fl = flags(t);
    TermClass {
        is_plain_boolean: fl.plain,
        is_cnf: fl.cnf,
        is_fragment_s: fl.fragment_s(t.is_one()),
        contains_one: fl.one,
        contains_conv: fl.conv,
    }
}

/// The component set of a term, in first-discovery order.
pub fn components(t: &RelTerm) -> IndexSet<RelTerm> {
    let mut out = IndexSet::new();
    collect_components(t, &mut out);
    out
}

fn collect_components(t: &RelTerm, out: &mut IndexSet<RelTerm>) {
    if !out.insert(t.clone()) {
        return;
    }
    match t {
        RelTerm::One | RelTerm::Var(_) => {}
        RelTerm::Conv(b) => collect_components(b, out),
        RelTerm::Union(b, c) | RelTerm::Inter(b, c) | RelTerm::Comp(b, c) => {
            collect_components(b, out);
            collect_components(c, out);
        }
        RelTerm::Cmpl(inner) => match &**inner {
            RelTerm::One | RelTerm::Var(_) => {}
            RelTerm::Cmpl(b) => collect_components(b, out),
            RelTerm::Conv(b) => collect_components(&RelTerm::cmpl((**b).clone()), out),
            RelTerm::Union(b, c) | RelTerm::Inter(b, c) | RelTerm::Comp(b, c) => {
                collect_components(&RelTerm::cmpl((**b).clone()), out);
                collect_components(&RelTerm::cmpl((**c).clone()), out);
            }
        },
    }
}
