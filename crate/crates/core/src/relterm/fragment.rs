use std::fmt;

use super::RelTerm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FragmentClause {
    /// Converse never occurs in the fragment.
    Converse,
    /// The left argument of `;` must be `1` or a plain Boolean term.
    CompositionLeft,
    /// The right argument of `;` must be `1`, or contain `1` only inside
    /// `(B ; 1)` with B plain Boolean.
    CompositionRight,
}

impl fmt::Display for FragmentClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FragmentClause::Converse => "converse is not allowed",
            FragmentClause::CompositionLeft => {
                "left argument of ';' must be 1 or built from variables with '|' and '&'"
            }
            FragmentClause::CompositionRight => {
                "right argument of ';' may contain 1 only inside terms of the form (B ; 1)"
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub subterm: RelTerm,
    pub clause: FragmentClause,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (in `{}`)", self.clause, self.subterm)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragmentVerdict {
    Accept,
    Reject(Rejection),
}

impl FragmentVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, FragmentVerdict::Accept)
    }
}

/// Membership in the decidable fragment. Expects a term already passed
/// through [`simplify_ones`](super::simplify_ones); the first offending
/// subterm in pre-order is reported.
pub fn fragment_check(t: &RelTerm) -> FragmentVerdict {
    if let Some(conv) = t.subterms().into_iter().find(|s| matches!(s, RelTerm::Conv(_))) {
        return FragmentVerdict::Reject(Rejection {
            subterm: conv.clone(),
            clause: FragmentClause::Converse,
        });
    }
    match check(t) {
        Ok(()) => FragmentVerdict::Accept,
        Err(r) => FragmentVerdict::Reject(r),
    }
}

fn check(t: &RelTerm) -> Result<(), Rejection> {
    match t {
        RelTerm::One | RelTerm::Var(_) => Ok(()),
        RelTerm::Cmpl(c) => check(c),
        RelTerm::Union(l, r) | RelTerm::Inter(l, r) => {
            check(l)?;
            check(r)
        }
        RelTerm::Conv(_) => Err(Rejection {
            subterm: t.clone(),
            clause: FragmentClause::Converse,
        }),
        RelTerm::Comp(l, r) => {
            if !(l.is_one() || l.is_plain_boolean()) {
                return Err(Rejection {
                    subterm: t.clone(),
                    clause: FragmentClause::CompositionLeft,
                });
            }
            if r.is_one() {
                return Ok(());
            }
            check(r)?;
            if has_unguarded_one(r) {
                return Err(Rejection {
                    subterm: t.clone(),
                    clause: FragmentClause::CompositionRight,
                });
            }
            Ok(())
        }
    }
}

fn has_unguarded_one(t: &RelTerm) -> bool {
    match t {
        RelTerm::One => true,
        RelTerm::Var(_) => false,
        RelTerm::Comp(l, r) if r.is_one() && l.is_plain_boolean() => false,
        RelTerm::Cmpl(c) | RelTerm::Conv(c) => has_unguarded_one(c),
        RelTerm::Union(l, r) | RelTerm::Inter(l, r) | RelTerm::Comp(l, r) => {
            has_unguarded_one(l) || has_unguarded_one(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relterm::{classify, parse_term, simplify_ones};

    fn verdict(s: &str) -> FragmentVerdict {
        fragment_check(&simplify_ones(&parse_term(s).unwrap()))
    }

    #[test]
    fn worked_examples_accept() {
        assert!(verdict("-((r1 | s) ; (p ; 1))").is_accept());
        assert!(verdict("(1 ; ((r1 | s) ; -((((q | p) & r1) ; 1))))").is_accept());
        assert!(verdict("(1 ; (((r1 | s) & r2) ; 1))").is_accept());
    }

    #[test]
    fn complemented_left_argument_rejected() {
        match verdict("(-r) ; s") {
            FragmentVerdict::Reject(r) => {
                assert_eq!(r.clause, FragmentClause::CompositionLeft);
                assert_eq!(r.subterm, parse_term("-r ; s").unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn converse_rejected() {
        match verdict("r ^") {
            FragmentVerdict::Reject(r) => assert_eq!(r.clause, FragmentClause::Converse),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn unguarded_one_on_the_right() {
        match verdict("r ; (s & -(1 ; p))") {
            FragmentVerdict::Reject(r) => assert_eq!(r.clause, FragmentClause::CompositionRight),
            v => panic!("{v:?}"),
        }
        // (1 ; 1) is a fragment term but not a legal right argument
        assert!(!verdict("r ; (1 ; 1)").is_accept());
        assert!(verdict("1 ; 1").is_accept());
        assert!(verdict("r ; 1").is_accept());
        // a guard needs a plain Boolean left side
        assert!(!verdict("s ; ((1 ; r) ; 1)").is_accept());
    }

    #[test]
    fn nested_composition_in_left_argument_rejected() {
        // the left argument is Boolean only; (B ; 1) is not admitted there
        assert!(!verdict("(r ; 1) ; s").is_accept());
    }

    #[test]
    fn agrees_with_classify() {
        for s in [
            "-((r1 | s) ; (p ; 1))",
            "r ; (s & -(1 ; p))",
            "(1 ; (((r1 | s) & r2) ; 1))",
            "r ; -(s ; -(q ; 1))",
        ] {
            let t = simplify_ones(&parse_term(s).unwrap());
            if let RelTerm::Comp(_, r) = &t {
                assert_eq!(
                    fragment_check(&t).is_accept(),
                    classify(r).is_fragment_s,
                    "{s}"
                );
            }
        }
    }
}
