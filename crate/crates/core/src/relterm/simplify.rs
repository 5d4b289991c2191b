use std::sync::Arc;

use super::{NotBoolean, RelTerm};

/// Inside-out application of the one-identities
///
/// ```text
/// (1 | P) = (P | 1) = 1        (-1 | P) = (P | -1) = P
/// (1 & P) = (P & 1) = P        (-1 & P) = (P & -1) = -1
/// -(-1) = 1
/// ```
///
/// One bottom-up pass reaches the fixpoint: every rewrite returns either a
/// constant or an already simplified child.
pub fn simplify_ones(t: &RelTerm) -> RelTerm {
    match t {
        RelTerm::One | RelTerm::Var(_) => t.clone(),
        RelTerm::Cmpl(c) => {
            let c = simplify_ones(c);
            if c.is_neg_one() {
                RelTerm::One
            } else {
                RelTerm::cmpl(c)
            }
        }
        RelTerm::Union(l, r) => {
            let (l, r) = (simplify_ones(l), simplify_ones(r));
            if l.is_one() || r.is_one() {
                RelTerm::One
            } else if l.is_neg_one() {
                r
            } else if r.is_neg_one() {
                l
            } else {
                RelTerm::union(l, r)
            }
        }
        RelTerm::Inter(l, r) => {
            let (l, r) = (simplify_ones(l), simplify_ones(r));
            if l.is_neg_one() || r.is_neg_one() {
                RelTerm::neg_one()
            } else if l.is_one() {
                r
            } else if r.is_one() {
                l
            } else {
                RelTerm::inter(l, r)
            }
        }
        RelTerm::Comp(l, r) => RelTerm::comp(simplify_ones(l), simplify_ones(r)),
        RelTerm::Conv(c) => RelTerm::conv(simplify_ones(c)),
    }
}

/// Complement normal form of a Boolean term (De Morgan plus double
/// negation), so that every complement wraps a variable or `1`.
pub fn nf_cmpl(t: &RelTerm) -> Result<RelTerm, NotBoolean> {
    if !t.is_boolean() {
        return Err(NotBoolean(t.clone()));
    }
    Ok(nf_boolean(t))
}

fn nf_boolean(t: &RelTerm) -> RelTerm {
    match t {
        RelTerm::One | RelTerm::Var(_) => t.clone(),
        RelTerm::Union(l, r) => RelTerm::union(nf_boolean(l), nf_boolean(r)),
        RelTerm::Inter(l, r) => RelTerm::inter(nf_boolean(l), nf_boolean(r)),
        RelTerm::Cmpl(inner) => match &**inner {
            RelTerm::One | RelTerm::Var(_) => t.clone(),
            RelTerm::Cmpl(s) => nf_boolean(s),
            RelTerm::Inter(l, r) => RelTerm::union(nf_negated(l), nf_negated(r)),
            RelTerm::Union(l, r) => RelTerm::inter(nf_negated(l), nf_negated(r)),
            RelTerm::Comp(..) | RelTerm::Conv(_) => unreachable!("checked Boolean"),
        },
        RelTerm::Comp(..) | RelTerm::Conv(_) => unreachable!("checked Boolean"),
    }
}

fn nf_negated(t: &Arc<RelTerm>) -> RelTerm {
    nf_boolean(&RelTerm::Cmpl(t.clone()))
}
