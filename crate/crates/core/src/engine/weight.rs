use std::collections::{HashMap, HashSet};

use super::{Applied, DeductionTree, Diagnostics};
use crate::formulas::RelFormula;
use crate::relterm::RelTerm;

pub fn weight(t: &RelTerm) -> usize {
    match t {
        RelTerm::One | RelTerm::Var(_) => 0,
        RelTerm::Union(a, b) | RelTerm::Inter(a, b) | RelTerm::Comp(a, b) => weight(a) + weight(b) + 1,
        RelTerm::Conv(a) => weight(a) + 1,
        RelTerm::Cmpl(inner) => match &**inner {
            RelTerm::One | RelTerm::Var(_) => 0,
            RelTerm::Cmpl(p) => weight(p) + 1,
            RelTerm::Union(a, b) | RelTerm::Inter(a, b) | RelTerm::Comp(a, b) => {
                weight(&RelTerm::cmpl((**a).clone())) + weight(&RelTerm::cmpl((**b).clone())) + 1
            }
            RelTerm::Conv(a) => weight(&RelTerm::cmpl((**a).clone())) + 1,
        },
    }
}

fn is_composition_formula(f: &RelFormula) -> bool {
    match &f.term {
        RelTerm::Comp(..) => true,
        RelTerm::Cmpl(inner) => matches!(**inner, RelTerm::Comp(..)),
        _ => false,
    }
}

/// Replays every root-to-leaf path. Composition formulas, plain or
/// complemented, only count towards a node's weight while a later step on
/// the path still decomposes them. Every step that is not a `(;)` step
/// must lower that weight; every `(;)` step must be a new application.
/// Open leaves must weigh nothing.
pub fn check_progress(tree: &DeductionTree, diag: &mut Diagnostics) {
    let mut memo: HashMap<RelFormula, usize> = HashMap::new();
    let mut w = |f: &RelFormula| *memo.entry(f.clone()).or_insert_with(|| weight(&f.term));
    for leaf in tree.leaves() {
        let path = tree.path_to(leaf.id);
        // last step index (into `path`) that uses each formula as premise
        let mut last_use: HashMap<&RelFormula, usize> = HashMap::new();
        for (k, id) in path.iter().enumerate().skip(1) {
            if let Some(p) = &tree.nodes[*id].premise {
                last_use.insert(p, k);
            }
        }
        let node_weight = |k: usize, w: &mut dyn FnMut(&RelFormula) -> usize| -> usize {
            tree.nodes[path[k]]
                .formulas
                .iter()
                .filter(|f| !is_composition_formula(f) || last_use.get(f).is_some_and(|&j| j > k))
                .map(|f| w(f))
                .sum()
        };
        let mut seen: HashSet<Applied> = HashSet::new();
        let mut before = node_weight(0, &mut w);
        for k in 1..path.len() {
            let node = &tree.nodes[path[k]];
            let after = node_weight(k, &mut w);
            let rule = node.rule.expect("non-root nodes carry their rule");
            let premise = node.premise.clone().expect("non-root nodes carry their premise");
            if rule.is_composition() {
                let key = Applied {
                    rule,
                    premise,
                    var: node.var.clone(),
                };
                if !seen.insert(key) {
                    diag.progress_violations
                        .push(format!("node {}: repeated {} application", node.id, rule));
                }
            } else if after >= before {
                diag.progress_violations.push(format!(
                    "node {}: {} step took the weight from {before} to {after}",
                    node.id, rule
                ));
            }
            before = after;
        }
        if !leaf.closed && before != 0 {
            diag.progress_violations
                .push(format!("node {}: open leaf has weight {before}", leaf.id));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relterm::parse_term;

    fn wt(s: &str) -> usize {
        weight(&parse_term(s).unwrap())
    }

    #[test]
    fn weights() {
        assert_eq!(wt("r"), 0);
        assert_eq!(wt("-r"), 0);
        assert_eq!(wt("1"), 0);
        assert_eq!(wt("-1"), 0);
        assert_eq!(wt("r ; 1"), 1);
        assert_eq!(wt("-(r | s)"), 1);
        assert_eq!(wt("--(r & s)"), 2);
        assert_eq!(wt("-(r ; -(s | p))"), 3);
    }

    #[test]
    fn boolean_step_lowers_weight() {
        let t = parse_term("(r | s) & -(p ; 1)").unwrap();
        let parts = [parse_term("r | s").unwrap(), parse_term("-(p ; 1)").unwrap()];
        assert!(parts.iter().map(weight).sum::<usize>() < weight(&t));
    }
}
