use std::collections::HashSet;

use super::rules::{shape, Shape};
use super::{Branch, RuleTag};
use crate::formulas::{nbool_with, ObjVar, RelFormula};
use crate::relterm::{nf_cmpl, RelTerm};

/// Literal terms on the branch between `left` and `right`, in history order.
fn literal_terms(b: &Branch, left: &ObjVar, right: &ObjVar) -> Vec<RelTerm> {
    b.history
        .literals()
        .filter(|l| &l.left == left && &l.right == right)
        .map(|l| l.term.clone())
        .collect()
}

/// Every `(B1 ; Q)` formula at `z` whose left side the literals make
/// false towards `w` is mirrored at `z'`.
fn obligations_mirrored(b: &Branch, z: &ObjVar, zp: &ObjVar, lits: &HashSet<RelTerm>) -> bool {
    b.history.iter().filter(|h| &h.left == z).all(|h| {
        let triggered = match shape(&h.term) {
            Shape::CompA { left, .. } => {
                let nf = nf_cmpl(&RelTerm::cmpl(left.clone())).expect("plain Boolean left side");
                nbool_with(&nf, &|t| lits.contains(t))
            }
            // `z -1 w` always holds
            Shape::CompB { .. } => true,
            _ => return true,
        };
        !triggered || b.history.contains(&RelFormula::new(zp.clone(), h.term.clone(), h.right.clone()))
    })
}

/// A formula `z' -(B ; S) y` on the branch that blocks `f = z -(B ; S) y`:
/// it has the same term and another left variable, it was decomposed with
/// some `w`, and each composition obligation of `z` that the literals
/// between `z'` and `w` trigger is also an obligation of `z'`.
pub fn is_blocked(f: &RelFormula, b: &Branch) -> Option<RelFormula> {
    match shape(&f.term) {
        Shape::NegComp {
            rule: Some(RuleTag::NotComp | RuleTag::NotCompA),
            ..
        } => {}
        _ => return None,
    }
    b.history
        .iter()
        .filter(|g| g.term == f.term && g.right == f.right && g.left != f.left)
        .find(|g| {
            let Some(w) = b.decomposed_with.get(*g) else {
                return false;
            };
            let lits: HashSet<RelTerm> = literal_terms(b, &g.left, w).into_iter().collect();
            obligations_mirrored(b, &f.left, &g.left, &lits)
        })
        .cloned()
}

/// Records, for every blocked formula left on the saturated leaf, the
/// blocker's literals towards its variable `w` with the left variable
/// renamed to the blocked formula's.
pub(crate) fn collect_lit_negcomp(b: &mut Branch) {
    let mut found = Vec::new();
    for f in b.leaf.iter() {
        if let Some(g) = is_blocked(f, b) {
            let w = &b.decomposed_with[&g];
            for t in literal_terms(b, &g.left, w) {
                found.push(RelFormula::new(f.left.clone(), t, w.clone()));
            }
        }
    }
    b.lit_negcomp.extend(found);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Genealogy;
    use crate::formulas::parse_formula;

    fn branch(fs: &[&str]) -> Branch {
        let mut b = Branch::new(parse_formula(fs[0]).unwrap());
        for f in &fs[1..] {
            b.add(parse_formula(f).unwrap());
        }
        b
    }

    fn decompose(b: &mut Branch, g: &str, w: &str) {
        let g = parse_formula(g).unwrap();
        let w = ObjVar::new(w);
        b.vars.insert(w.clone());
        b.genealogy.insert(
            w.clone(),
            Genealogy {
                generator: g.clone(),
                parent: Some(g.left.clone()),
                rule: RuleTag::NotComp,
            },
        );
        b.decomposed_with.insert(g, w);
    }

    #[test]
    fn nothing_to_block_against() {
        let b = branch(&["x -(r ; (s ; 1)) y"]);
        assert_eq!(is_blocked(&parse_formula("x -(r ; (s ; 1)) y").unwrap(), &b), None);
    }

    #[test]
    fn undecomposed_twin_does_not_block() {
        let b = branch(&["x -(r ; (s ; 1)) y", "z1 -(r ; (s ; 1)) y"]);
        assert_eq!(is_blocked(&parse_formula("z1 -(r ; (s ; 1)) y").unwrap(), &b), None);
    }

    #[test]
    fn decomposed_twin_blocks_when_obligations_are_vacuous() {
        let mut b = branch(&["x -(r ; (s ; 1)) y", "x -r z1", "z1 -(s ; 1) y", "z2 -(r ; (s ; 1)) y"]);
        decompose(&mut b, "x -(r ; (s ; 1)) y", "z1");
        let f = parse_formula("z2 -(r ; (s ; 1)) y").unwrap();
        assert_eq!(is_blocked(&f, &b), Some(parse_formula("x -(r ; (s ; 1)) y").unwrap()));
    }

    #[test]
    fn unmirrored_obligation_prevents_blocking() {
        let mut b = branch(&["x -(r ; (s ; 1)) y", "x -r z1", "z1 -(s ; 1) y", "z2 -(r ; (s ; 1)) y", "z2 (r ; p) y"]);
        decompose(&mut b, "x -(r ; (s ; 1)) y", "z1");
        let f = parse_formula("z2 -(r ; (s ; 1)) y").unwrap();
        assert_eq!(is_blocked(&f, &b), None);
        b.add(parse_formula("x (r ; p) y").unwrap());
        assert!(is_blocked(&f, &b).is_some());
    }

    #[test]
    fn saturation_records_renamed_literals() {
        let mut b = branch(&["x -(r ; (s ; 1)) y", "x -r z1", "z1 -(s ; 1) y", "z2 -(r ; (s ; 1)) y"]);
        decompose(&mut b, "x -(r ; (s ; 1)) y", "z1");
        collect_lit_negcomp(&mut b);
        let got: Vec<String> = b.lit_negcomp.iter().map(|f| f.to_string()).collect();
        assert_eq!(got, ["z2 -r z1"]);
    }
}
