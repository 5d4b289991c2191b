//! Finite models, term evaluation, satisfaction and a brute-force
//! countermodel oracle.

mod exchange;
mod oracle;
mod relation;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::Branch;
use crate::formulas::{ObjVar, RelFormula};
use crate::relterm::RelTerm;

pub use exchange::{ExchangeError, ModelFile};
pub use oracle::{brute_force_countermodel, brute_force_countermodel_with, OracleRefused, DEFAULT_BUDGET_BITS};
pub use relation::PairSet;
pub(crate) use oracle::{lane_pattern, LANE_BITS};

/// A finite structure: named elements and one binary relation per
/// relational variable. `1` is not stored; it always denotes the full
/// relation.
#[derive(Clone, PartialEq, Eq)]
pub struct Model {
    universe: Vec<Arc<str>>,
    interp: BTreeMap<Arc<str>, PairSet>,
}

/// Object variables mapped to universe positions.
pub type Valuation = BTreeMap<ObjVar, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("object variable `{0}` has no value")]
    UnboundVariable(ObjVar),
}

impl Model {
    pub fn new(universe: Vec<Arc<str>>) -> Self {
        Model {
            universe,
            interp: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[Arc<str>] {
        &self.universe
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| &**e == name)
    }

    /// Sets the interpretation of `name`, replacing any previous one.
    pub fn interpret(&mut self, name: impl AsRef<str>, rel: PairSet) {
        assert_eq!(rel.size(), self.size(), "relation over a different universe");
        self.interp.insert(Arc::from(name.as_ref()), rel);
    }

    pub fn relation(&self, name: &str) -> Option<&PairSet> {
        self.interp.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Arc<str>, &PairSet)> {
        self.interp.iter()
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Model");
        d.field("universe", &self.universe);
        for (name, rel) in &self.interp {
            let pairs: Vec<String> = rel
                .pairs()
                .map(|(a, b)| format!("({},{})", self.universe[a], self.universe[b]))
                .collect();
            d.field(name, &pairs.join(" "));
        }
        d.finish()
    }
}

/// The relation denoted by `t`. Variables without an interpretation are
/// read as the empty relation.
pub fn eval_term(m: &Model, t: &RelTerm) -> PairSet {
    let n = m.size();
    match t {
        RelTerm::One => PairSet::full(n),
        RelTerm::Var(name) => match m.interp.get(name) {
            Some(rel) => rel.clone(),
            None => {
                log::warn!("relational variable `{name}` is not interpreted; using the empty relation");
                PairSet::empty(n)
            }
        },
        RelTerm::Cmpl(inner) => eval_term(m, inner).complement(),
        RelTerm::Union(l, r) => eval_term(m, l).union(&eval_term(m, r)),
        RelTerm::Inter(l, r) => eval_term(m, l).intersection(&eval_term(m, r)),
        RelTerm::Comp(l, r) => eval_term(m, l).compose(&eval_term(m, r)),
        RelTerm::Conv(inner) => eval_term(m, inner).transpose(),
    }
}

pub fn satisfies(m: &Model, v: &Valuation, f: &RelFormula) -> Result<bool, SemanticsError> {
    let a = *v
        .get(&f.left)
        .ok_or_else(|| SemanticsError::UnboundVariable(f.left.clone()))?;
    let b = *v
        .get(&f.right)
        .ok_or_else(|| SemanticsError::UnboundVariable(f.right.clone()))?;
    Ok(eval_term(m, &f.term).contains(a, b))
}

/// Every formula ever placed on the branch is false under `m`, `v`.
pub fn falsifies_branch(m: &Model, v: &Valuation, b: &Branch) -> bool {
    b.history
        .iter()
        .all(|f| matches!(satisfies(m, v, f), Ok(false)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::relterm::parse_term;

    fn two() -> Model {
        let mut m = Model::new(vec!["a".into(), "b".into()]);
        m.interpret("r", PairSet::from_pairs(2, [(0, 1)]));
        m.interpret("s", PairSet::from_pairs(2, [(1, 1)]));
        m
    }

    fn val(pairs: &[(&str, usize)]) -> Valuation {
        pairs.iter().map(|(k, e)| (ObjVar::new(k), *e)).collect()
    }

    #[test]
    fn eval_examples() {
        let m = two();
        assert_eq!(eval_term(&m, &RelTerm::One), PairSet::full(2));
        let rs = eval_term(&m, &parse_term("r ; s").unwrap());
        assert_eq!(rs.pairs().collect::<Vec<_>>(), vec![(0, 1)]);

        let mut m1 = Model::new(vec!["a".into()]);
        m1.interpret("r", PairSet::empty(1));
        let c = eval_term(&m1, &parse_term("-r").unwrap());
        assert_eq!(c.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn converse_transposes() {
        let m = two();
        let t = eval_term(&m, &parse_term("r^").unwrap());
        assert_eq!(t.pairs().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn uninterpreted_variable_is_empty() {
        let m = two();
        assert!(eval_term(&m, &parse_term("q").unwrap()).is_empty());
    }

    #[test]
    fn satisfaction_examples() {
        let mut m = Model::new(vec!["a".into(), "b".into()]);
        m.interpret("r", PairSet::empty(2));
        let v = val(&[("x", 0), ("y", 1)]);
        assert!(!satisfies(&m, &v, &parse_formula("x r y").unwrap()).unwrap());
        assert!(satisfies(&m, &v, &parse_formula("x 1 y").unwrap()).unwrap());
        assert!(!satisfies(&m, &v, &parse_formula("x -1 y").unwrap()).unwrap());
        assert_eq!(
            satisfies(&m, &v, &parse_formula("x r z").unwrap()),
            Err(SemanticsError::UnboundVariable(ObjVar::new("z")))
        );
    }
}
