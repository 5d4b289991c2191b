use std::collections::HashMap;

use thiserror::Error;

use super::{blocking, var_order, Branch, Genealogy, RuleTag};
use crate::formulas::{nbool_with, FormulaSet, ObjVar, RelFormula};
use crate::relterm::{nf_cmpl, RelTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule not applicable to `{formula}`: {reason}")]
pub struct RuleError {
    pub formula: RelFormula,
    pub reason: &'static str,
}

fn not_applicable(f: &RelFormula, reason: &'static str) -> RuleError {
    RuleError {
        formula: f.clone(),
        reason,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Successors {
    One(FormulaSet),
    /// Left and right successor of a branching rule.
    Two(FormulaSet, FormulaSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NegCompOutcome {
    Decomposed {
        rule: RuleTag,
        var: ObjVar,
        node: FormulaSet,
    },
    Blocked {
        blocker: RelFormula,
    },
    /// `x -(1 ; S) y` when some generated `z'` already has `z' -S y`.
    Suppressed,
    /// `x -(1 ; 1) y` is never decomposed.
    Inert,
}

pub(crate) enum Shape<'a> {
    Literal,
    Boolean(RuleTag, Vec<Vec<RelTerm>>),
    /// `rule` is `None` for the inert `-(1 ; 1)`.
    NegComp {
        rule: Option<RuleTag>,
        left: &'a RelTerm,
        right: &'a RelTerm,
    },
    CompA {
        left: &'a RelTerm,
        right: &'a RelTerm,
    },
    CompB {
        right: &'a RelTerm,
    },
    Other,
}

/// Classifies a term by the rule that decomposes it. Boolean shapes carry
/// their conclusion terms, one list per successor.
pub(crate) fn shape(t: &RelTerm) -> Shape<'_> {
    let neg = |t: &RelTerm| RelTerm::cmpl(t.clone());
    match t {
        RelTerm::One | RelTerm::Var(_) => Shape::Literal,
        RelTerm::Union(a, b) => Shape::Boolean(RuleTag::Or, vec![vec![(**a).clone(), (**b).clone()]]),
        RelTerm::Inter(a, b) => Shape::Boolean(RuleTag::And, vec![vec![(**a).clone()], vec![(**b).clone()]]),
        RelTerm::Comp(l, r) if l.is_one() => Shape::CompB { right: r },
        RelTerm::Comp(l, r) if l.is_plain_boolean() => Shape::CompA { left: l, right: r },
        RelTerm::Comp(..) | RelTerm::Conv(_) => Shape::Other,
        RelTerm::Cmpl(inner) => match &**inner {
            RelTerm::One | RelTerm::Var(_) => Shape::Literal,
            RelTerm::Cmpl(p) => Shape::Boolean(RuleTag::NotNot, vec![vec![(**p).clone()]]),
            RelTerm::Union(a, b) => Shape::Boolean(RuleTag::NotOr, vec![vec![neg(a)], vec![neg(b)]]),
            RelTerm::Inter(a, b) => Shape::Boolean(RuleTag::NotAnd, vec![vec![neg(a), neg(b)]]),
            RelTerm::Comp(l, r) if l.is_one() || l.is_plain_boolean() => {
                let rule = match (l.is_one(), r.is_one()) {
                    (true, true) => None,
                    (true, false) => Some(RuleTag::NotCompB),
                    (false, true) => Some(RuleTag::NotCompA),
                    (false, false) => Some(RuleTag::NotComp),
                };
                Shape::NegComp { rule, left: l, right: r }
            }
            RelTerm::Comp(..) | RelTerm::Conv(_) => Shape::Other,
        },
    }
}

/// The leaf with `premise` replaced by `conclusions`. Conclusions that
/// were already decomposed earlier on the branch are not re-added: their
/// own conclusions are on the branch already.
fn replace(b: &Branch, premise: Option<&RelFormula>, conclusions: impl IntoIterator<Item = RelFormula>) -> FormulaSet {
    let mut next = b.leaf.clone();
    if let Some(p) = premise {
        next.remove(p);
    }
    for g in conclusions {
        if !b.consumed(&g) {
            next.insert(g);
        }
    }
    next
}

pub fn apply_boolean(b: &Branch, f: &RelFormula) -> Result<(RuleTag, Successors), RuleError> {
    if !b.leaf.contains(f) {
        return Err(not_applicable(f, "formula is not on the leaf"));
    }
    let Shape::Boolean(rule, parts) = shape(&f.term) else {
        return Err(not_applicable(f, "not a decomposable Boolean formula"));
    };
    let at = |ts: &Vec<RelTerm>| {
        let conclusions = ts.iter().map(|t| RelFormula::new(f.left.clone(), t.clone(), f.right.clone()));
        replace(b, Some(f), conclusions)
    };
    let succ = match parts.as_slice() {
        [one] => Successors::One(at(one)),
        [l, r] => Successors::Two(at(l), at(r)),
        _ => unreachable!("Boolean rules have one or two successors"),
    };
    Ok((rule, succ))
}

/// No formula `z' -S y` with a generated `z'` is on the branch.
fn negcomp_b_allowed(b: &Branch, s: &RelTerm) -> bool {
    let neg_s = RelTerm::cmpl(s.clone());
    !b.genealogy
        .keys()
        .any(|z| b.history.contains(&RelFormula::new(z.clone(), neg_s.clone(), ObjVar::y())))
}

pub fn apply_negcomp(b: &mut Branch, f: &RelFormula) -> Result<NegCompOutcome, RuleError> {
    if !b.leaf.contains(f) {
        return Err(not_applicable(f, "formula is not on the leaf"));
    }
    let Shape::NegComp { rule, left, right } = shape(&f.term) else {
        return Err(not_applicable(f, "not a complemented composition"));
    };
    let Some(rule) = rule else {
        return Ok(NegCompOutcome::Inert);
    };
    if rule == RuleTag::NotCompB {
        if !negcomp_b_allowed(b, right) {
            return Ok(NegCompOutcome::Suppressed);
        }
    } else if let Some(blocker) = blocking::is_blocked(f, b) {
        return Ok(NegCompOutcome::Blocked { blocker });
    }
    let (left, right) = (left.clone(), right.clone());
    let z = b.fresh_var();
    b.vars.insert(z.clone());
    b.genealogy.insert(
        z.clone(),
        Genealogy {
            generator: f.clone(),
            parent: (rule != RuleTag::NotCompB).then(|| f.left.clone()),
            rule,
        },
    );
    b.decomposed_with.insert(f.clone(), z.clone());
    let neg = RelTerm::cmpl;
    let mut conclusions = Vec::new();
    if rule != RuleTag::NotCompB {
        conclusions.push(RelFormula::new(f.left.clone(), neg(left), z.clone()));
    }
    if rule != RuleTag::NotCompA {
        conclusions.push(RelFormula::new(z.clone(), neg(right), f.right.clone()));
    }
    Ok(NegCompOutcome::Decomposed {
        rule,
        var: z,
        node: replace(b, Some(f), conclusions),
    })
}

/// The variables `z` such that `x' nf(-B) z` is forced by the branch's
/// literals, in introduction order.
pub(crate) fn v_candidates(b: &Branch, left_var: &ObjVar, boolean_left: &RelTerm) -> Vec<ObjVar> {
    let nf = nf_cmpl(&RelTerm::cmpl(boolean_left.clone())).expect("plain Boolean left side");
    b.vars
        .iter()
        .filter(|z| nbool_with(&nf, &|t| b.literal_at(left_var, z, t)))
        .cloned()
        .collect()
}

fn conclusion(z: &ObjVar, s: &RelTerm, f: &RelFormula) -> RelFormula {
    RelFormula::new(z.clone(), s.clone(), f.right.clone())
}

pub fn apply_comp_a(b: &Branch, f: &RelFormula, z: &ObjVar) -> Result<FormulaSet, RuleError> {
    if !b.leaf.contains(f) {
        return Err(not_applicable(f, "formula is not on the leaf"));
    }
    let Shape::CompA { left, right } = shape(&f.term) else {
        return Err(not_applicable(f, "not a composition with a Boolean left side"));
    };
    let key = super::Applied {
        rule: RuleTag::CompA,
        premise: f.clone(),
        var: Some(z.clone()),
    };
    if b.applied.contains(&key) {
        return Err(not_applicable(f, "already applied with this variable"));
    }
    if !v_candidates(b, &f.left, left).contains(z) {
        return Err(not_applicable(f, "variable is not forced by the branch literals"));
    }
    let g = conclusion(z, right, f);
    if b.history.contains(&g) {
        return Err(not_applicable(f, "conclusion already on the branch"));
    }
    Ok(replace(b, None, [g]))
}

pub fn apply_comp_b(b: &Branch, f: &RelFormula, z: &ObjVar) -> Result<FormulaSet, RuleError> {
    if !b.leaf.contains(f) {
        return Err(not_applicable(f, "formula is not on the leaf"));
    }
    let Shape::CompB { right } = shape(&f.term) else {
        return Err(not_applicable(f, "not a composition with left side 1"));
    };
    if !b.vars.contains(z) {
        return Err(not_applicable(f, "variable does not occur on the branch"));
    }
    let g = conclusion(z, right, f);
    if b.history.contains(&g) {
        return Err(not_applicable(f, "conclusion already on the branch"));
    }
    Ok(replace(b, None, [g]))
}

#[derive(Debug, Clone)]
pub(crate) enum Action {
    Boolean(RelFormula),
    NegComp(RelFormula),
    CompA(RelFormula, ObjVar),
    CompB(RelFormula, ObjVar),
}

/// The next rule application, or `None` when the branch is saturated.
///
/// Candidates are ranked by (variable in branch order, rule class,
/// position of the premise in the branch history, instantiating
/// variable). A `(1 ; S)` application belongs to the turn of the
/// variable it instantiates.
pub(crate) fn next_action(b: &Branch) -> Option<Action> {
    let rank: HashMap<ObjVar, usize> = var_order(b).into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut best: Option<((usize, u8, usize, usize), Action)> = None;
    let mut offer = |key: (usize, u8, usize, usize), make: &dyn Fn() -> Action| {
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, make()));
        }
    };
    for f in b.leaf.iter() {
        let h = b.history.position(f).expect("leaf formulas are in the history");
        let r = rank[&f.left];
        match shape(&f.term) {
            Shape::Boolean(..) => offer((r, 0, h, 0), &|| Action::Boolean(f.clone())),
            Shape::NegComp { rule: Some(rule), right, .. } => {
                let enabled = match rule {
                    RuleTag::NotCompB => negcomp_b_allowed(b, right),
                    _ => blocking::is_blocked(f, b).is_none(),
                };
                if enabled {
                    offer((r, 1, h, 0), &|| Action::NegComp(f.clone()));
                }
            }
            Shape::CompA { left, right } => {
                for z in v_candidates(b, &f.left, left) {
                    if !b.history.contains(&conclusion(&z, right, f)) {
                        offer((r, 2, h, rank[&z]), &|| Action::CompA(f.clone(), z.clone()));
                    }
                }
            }
            Shape::CompB { right } => {
                for z in b.vars.iter() {
                    if !b.history.contains(&conclusion(z, right, f)) {
                        offer((rank[z], 3, h, 0), &|| Action::CompB(f.clone(), z.clone()));
                    }
                }
            }
            Shape::Literal | Shape::NegComp { rule: None, .. } | Shape::Other => {}
        }
    }
    best.map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn f(s: &str) -> RelFormula {
        parse_formula(s).unwrap()
    }

    fn branch(fs: &[&str]) -> Branch {
        let mut b = Branch::new(f(fs[0]));
        for s in &fs[1..] {
            let g = f(s);
            b.vars.insert(g.left.clone());
            b.vars.insert(g.right.clone());
            b.add(g);
        }
        b
    }

    fn rendered(s: &FormulaSet) -> Vec<String> {
        s.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn boolean_rules() {
        let b = branch(&["x (r | s) y"]);
        let (rule, Successors::One(n)) = apply_boolean(&b, &f("x (r | s) y")).unwrap() else {
            panic!("one successor expected")
        };
        assert_eq!(rule, RuleTag::Or);
        assert_eq!(rendered(&n), ["x r y", "x s y"]);

        let b = branch(&["x (r & s) y"]);
        let (_, Successors::Two(l, r)) = apply_boolean(&b, &f("x (r & s) y")).unwrap() else {
            panic!("two successors expected")
        };
        assert_eq!((rendered(&l), rendered(&r)), (vec!["x r y".to_string()], vec!["x s y".to_string()]));

        let b = branch(&["x --r y"]);
        let (rule, Successors::One(n)) = apply_boolean(&b, &f("x --r y")).unwrap() else {
            panic!("one successor expected")
        };
        assert_eq!(rule, RuleTag::NotNot);
        assert_eq!(rendered(&n), ["x r y"]);

        assert!(apply_boolean(&b, &f("x (r ; s) y")).is_err());
        assert!(apply_boolean(&branch(&["x r y"]), &f("x r y")).is_err());
    }

    #[test]
    fn complemented_composition() {
        let mut b = branch(&["x -(r ; (s ; 1)) y"]);
        let NegCompOutcome::Decomposed { rule, var, node } = apply_negcomp(&mut b, &f("x -(r ; (s ; 1)) y")).unwrap() else {
            panic!("expected a decomposition")
        };
        assert_eq!((rule, var.name()), (RuleTag::NotComp, "z1"));
        assert_eq!(rendered(&node), ["x -r z1", "z1 -(s ; 1) y"]);
        assert_eq!(b.genealogy[&var].parent, Some(ObjVar::x()));

        let mut b = branch(&["x -(r ; 1) y"]);
        let NegCompOutcome::Decomposed { rule, node, .. } = apply_negcomp(&mut b, &f("x -(r ; 1) y")).unwrap() else {
            panic!("expected a decomposition")
        };
        assert_eq!(rule, RuleTag::NotCompA);
        assert_eq!(rendered(&node), ["x -r z1"]);

        let mut b = branch(&["x -(1 ; 1) y"]);
        assert_eq!(apply_negcomp(&mut b, &f("x -(1 ; 1) y")), Ok(NegCompOutcome::Inert));
        assert_eq!(b.vars.len(), 2);
    }

    #[test]
    fn one_left_side_needs_a_first_instance() {
        let mut b = branch(&["x -(1 ; (r ; 1)) y"]);
        let NegCompOutcome::Decomposed { var, node, .. } = apply_negcomp(&mut b, &f("x -(1 ; (r ; 1)) y")).unwrap() else {
            panic!("expected a decomposition")
        };
        assert_eq!(rendered(&node), ["z1 -(r ; 1) y"]);
        assert_eq!(b.genealogy[&var].parent, None);
        b.advance(node);
        b.add(f("x -(1 ; (r ; 1)) y"));
        assert_eq!(apply_negcomp(&mut b, &f("x -(1 ; (r ; 1)) y")), Ok(NegCompOutcome::Suppressed));
    }

    #[test]
    fn composition_with_boolean_left_side() {
        let b = branch(&["x (r ; (s ; 1)) y", "x -r z"]);
        let n = apply_comp_a(&b, &f("x (r ; (s ; 1)) y"), &ObjVar::new("z")).unwrap();
        assert_eq!(rendered(&n), ["x (r ; (s ; 1)) y", "x -r z", "z (s ; 1) y"]);
        assert!(apply_comp_a(&b, &f("x (r ; (s ; 1)) y"), &ObjVar::y()).is_err());

        let b = branch(&["x (r ; 1) y", "x -r z"]);
        let n = apply_comp_a(&b, &f("x (r ; 1) y"), &ObjVar::new("z")).unwrap();
        assert!(crate::engine::is_axiomatic(&n));
    }

    #[test]
    fn composition_applies_once_per_variable() {
        let mut b = branch(&["x (r ; (s ; 1)) y", "x -r z"]);
        let premise = f("x (r ; (s ; 1)) y");
        let z = ObjVar::new("z");
        let n = apply_comp_a(&b, &premise, &z).unwrap();
        b.advance(n);
        b.applied.insert(crate::engine::Applied {
            rule: RuleTag::CompA,
            premise: premise.clone(),
            var: Some(z.clone()),
        });
        assert!(apply_comp_a(&b, &premise, &z).is_err());
    }

    #[test]
    fn composition_with_one_left_side() {
        let mut b = branch(&["x (1 ; (r ; 1)) y"]);
        let premise = f("x (1 ; (r ; 1)) y");
        let n = apply_comp_b(&b, &premise, &ObjVar::x()).unwrap();
        assert_eq!(rendered(&n), ["x (1 ; (r ; 1)) y", "x (r ; 1) y"]);
        b.advance(n);
        let n = apply_comp_b(&b, &premise, &ObjVar::y()).unwrap();
        assert!(n.contains(&f("y (r ; 1) y")));
        assert!(apply_comp_b(&b, &premise, &ObjVar::x()).is_err());
        assert!(apply_comp_b(&b, &premise, &ObjVar::new("w")).is_err());
    }

    #[test]
    fn selection_prefers_boolean_rules_at_the_smallest_variable() {
        let b = branch(&["x (-(r ; s) | (r | s)) y"]);
        assert!(matches!(next_action(&b), Some(Action::Boolean(_))));
        let b = branch(&["x -(r ; s) y", "x (r ; s) y"]);
        assert!(matches!(next_action(&b), Some(Action::NegComp(_))));
    }
}
