//! The dual-tableau decision procedure.
//!
//! A branch is expanded by repeatedly choosing the smallest object variable
//! (in the branch order, see [`var_order`]) that still has an applicable
//! rule, and applying the first applicable rule class for it: Boolean,
//! then complemented composition, then `(;)` with a Boolean left side,
//! then `(;)` with a `1` left side. The loop stops when the leaf is
//! axiomatic or nothing applies. Branches are explored depth first, left
//! child first; the first open saturated branch yields a countermodel.

mod blocking;
pub mod export;
mod order;
mod rules;
mod weight;

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;
use thiserror::Error;

use crate::formulas::{FormulaSet, ObjVar, RelFormula};
use crate::relterm::{components, fragment_check, simplify_ones, FragmentVerdict, Rejection, RelTerm};
use crate::semantics::{Model, PairSet, Valuation};

pub use blocking::is_blocked;
pub use order::var_order;
pub use rules::{apply_boolean, apply_comp_a, apply_comp_b, apply_negcomp, NegCompOutcome, RuleError, Successors};
pub use weight::{check_progress, weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleTag {
    Or,
    And,
    NotOr,
    NotAnd,
    NotNot,
    /// `x -(B ; S) y` with `S` not `1`.
    NotComp,
    /// `x -(B ; 1) y`.
    NotCompA,
    /// `x -(1 ; S) y`.
    NotCompB,
    /// `x (B ; S) y`.
    CompA,
    /// `x (1 ; S) y`.
    CompB,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Or => "or",
            RuleTag::And => "and",
            RuleTag::NotOr => "not-or",
            RuleTag::NotAnd => "not-and",
            RuleTag::NotNot => "not-not",
            RuleTag::NotComp => "not-comp",
            RuleTag::NotCompA => "not-comp-a",
            RuleTag::NotCompB => "not-comp-b",
            RuleTag::CompA => "comp-a",
            RuleTag::CompB => "comp-b",
        }
    }

    pub fn is_composition(self) -> bool {
        matches!(self, RuleTag::CompA | RuleTag::CompB)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a generated variable came about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genealogy {
    pub generator: RelFormula,
    /// Left variable of the generator; `None` for `x -(1 ; S) y`, whose
    /// variable is nobody's descendant.
    pub parent: Option<ObjVar>,
    pub rule: RuleTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Applied {
    pub rule: RuleTag,
    pub premise: RelFormula,
    pub var: Option<ObjVar>,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: usize,
    pub formulas: FormulaSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub rule: Option<RuleTag>,
    pub premise: Option<RelFormula>,
    pub var: Option<ObjVar>,
    pub closed: bool,
}

/// State of one branch: the leaf's formulas plus everything the rules
/// consult about the path leading to it.
#[derive(Debug, Clone)]
pub struct Branch {
    pub path: Vec<usize>,
    pub leaf: FormulaSet,
    /// Every formula that ever appeared on the branch.
    pub history: FormulaSet,
    /// Object variables in introduction order; starts as `[x, y]`.
    pub vars: IndexSet<ObjVar>,
    pub genealogy: IndexMap<ObjVar, Genealogy>,
    /// Renamed literals of blocked formulas, filled in once the branch is
    /// saturated.
    pub lit_negcomp: FormulaSet,
    pub applied: IndexSet<Applied>,
    pub decomposed_with: IndexMap<RelFormula, ObjVar>,
    pub saturated: bool,
    fresh: usize,
    literals: HashMap<(ObjVar, ObjVar), HashSet<RelTerm>>,
}

impl Branch {
    fn new(root: RelFormula) -> Self {
        let mut b = Branch {
            path: vec![0],
            leaf: FormulaSet::new(),
            history: FormulaSet::new(),
            vars: [ObjVar::x(), ObjVar::y()].into_iter().collect(),
            genealogy: IndexMap::new(),
            lit_negcomp: FormulaSet::new(),
            applied: IndexSet::new(),
            decomposed_with: IndexMap::new(),
            saturated: false,
            fresh: 0,
            literals: HashMap::new(),
        };
        b.add(root);
        b
    }

    /// Literal terms `t` with `left t right` on the branch.
    pub(crate) fn literal_at(&self, left: &ObjVar, right: &ObjVar, t: &RelTerm) -> bool {
        self.literals
            .get(&(left.clone(), right.clone()))
            .is_some_and(|s| s.contains(t))
    }

    pub(crate) fn fresh_var(&mut self) -> ObjVar {
        loop {
            self.fresh += 1;
            let v = ObjVar::new(format!("z{}", self.fresh));
            if !self.vars.contains(&v) {
                return v;
            }
        }
    }

    /// Was on the branch once and has since been decomposed away.
    pub(crate) fn consumed(&self, f: &RelFormula) -> bool {
        self.history.contains(f) && !self.leaf.contains(f)
    }

    fn add(&mut self, f: RelFormula) {
        if f.is_literal() {
            self.literals
                .entry((f.left.clone(), f.right.clone()))
                .or_default()
                .insert(f.term.clone());
        }
        self.leaf.insert(f.clone());
        self.history.insert(f);
    }

    /// Makes `next` the new leaf.
    fn advance(&mut self, next: FormulaSet) {
        let removed: Vec<RelFormula> = self.leaf.iter().filter(|f| !next.contains(f)).cloned().collect();
        for f in removed {
            self.leaf.remove(&f);
        }
        for f in next.iter() {
            if !self.leaf.contains(f) {
                self.add(f.clone());
            }
        }
    }

    /// Number of `(;)` decompositions of `f` recorded on this branch.
    pub fn dec(&self, f: &RelFormula) -> usize {
        self.applied
            .iter()
            .filter(|a| a.rule.is_composition() && &a.premise == f)
            .count()
    }
}

/// `{x' 1 y'}` or a pair `{x' R y', x' -R y'}`, checked structurally.
pub fn is_axiomatic(formulas: &FormulaSet) -> bool {
    formulas.iter().any(|f| match &f.term {
        RelTerm::One => true,
        RelTerm::Cmpl(inner) => {
            formulas.contains(&RelFormula::new(f.left.clone(), (**inner).clone(), f.right.clone()))
        }
        _ => false,
    })
}

#[derive(Debug, Clone)]
pub struct DeductionTree {
    pub input: RelFormula,
    pub nodes: Vec<Node>,
}

impl DeductionTree {
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    /// Node ids from the root to `id`.
    pub fn path_to(&self, mut id: usize) -> Vec<usize> {
        let mut path = vec![id];
        while let Some(p) = self.nodes[id].parent {
            path.push(p);
            id = p;
        }
        path.reverse();
        path
    }

    fn push(&mut self, parent: Option<usize>, formulas: FormulaSet, step: Option<(RuleTag, RelFormula, Option<ObjVar>)>) -> usize {
        let id = self.nodes.len();
        let (rule, premise, var) = match step {
            Some((r, p, v)) => (Some(r), Some(p), v),
            None => (None, None, None),
        };
        let closed = is_axiomatic(&formulas);
        self.nodes.push(Node {
            id,
            formulas,
            parent,
            children: Vec::new(),
            rule,
            premise,
            var,
            closed,
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: usize,
    pub max_vars: usize,
    /// Diagnostic bound on `|W|` is `factor · |cp(P)|² + 2`.
    pub var_bound_factor: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 1_000_000,
            max_vars: 10_000,
            var_bound_factor: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub steps: usize,
    pub branches: usize,
    pub variables: usize,
}

/// Runtime checks of the termination argument. All lists stay empty on a
/// correct run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub components: usize,
    pub var_bound: usize,
    pub max_vars_seen: usize,
    /// Formulas whose term is not a component of the input, or that
    /// contain `;` but do not end in `y`.
    pub shape_violations: Vec<String>,
    /// Steps that neither lowered the node weight nor raised the
    /// decomposition count.
    pub progress_violations: Vec<String>,
    pub duplicate_applications: usize,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.shape_violations.is_empty()
            && self.progress_violations.is_empty()
            && self.duplicate_applications == 0
            && self.max_vars_seen <= self.var_bound
    }
}

#[derive(Debug, Clone)]
pub struct Countermodel {
    pub branch: Branch,
    pub model: Model,
    pub valuation: Valuation,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Proof,
    Countermodel(Box<Countermodel>),
}

impl Verdict {
    pub fn is_proof(&self) -> bool {
        matches!(self, Verdict::Proof)
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// The input after the one-identities.
    pub term: RelTerm,
    pub verdict: Verdict,
    pub tree: DeductionTree,
    pub stats: Stats,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("not in the decidable fragment: {0}")]
    Fragment(Rejection),
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceExhausted { what: &'static str, limit: usize },
}

#[derive(Debug, Error)]
#[error("branch is not saturated")]
pub struct BranchNotSaturated;

/// Observable events of a search, in the order they happen.
#[derive(Debug)]
pub enum TraceEvent<'a> {
    Applied {
        node: usize,
        rule: RuleTag,
        premise: &'a RelFormula,
        var: Option<&'a ObjVar>,
    },
    Closed { node: usize },
    Saturated { node: usize },
}

/// Decides validity of `x P y`.
pub fn run_procedure(p: &RelTerm, limits: &Limits) -> Result<SearchReport, EngineError> {
    run_procedure_traced(p, limits, &mut |_| {})
}

pub fn run_procedure_traced(
    p: &RelTerm,
    limits: &Limits,
    observer: &mut dyn FnMut(&TraceEvent),
) -> Result<SearchReport, EngineError> {
    let term = simplify_ones(p);
    if let FragmentVerdict::Reject(r) = fragment_check(&term) {
        return Err(EngineError::Fragment(r));
    }
    let cp = components(&term);
    let root = RelFormula::new(ObjVar::x(), term.clone(), ObjVar::y());
    let mut search = Search {
        tree: DeductionTree {
            input: root.clone(),
            nodes: Vec::new(),
        },
        stats: Stats::default(),
        diagnostics: Diagnostics {
            components: cp.len(),
            var_bound: limits.var_bound_factor * cp.len() * cp.len() + 2,
            ..Diagnostics::default()
        },
        cp,
        limits: *limits,
        observer,
    };
    let first = Branch::new(root.clone());
    search.tree.push(None, first.leaf.clone(), None);
    search.check_shape(&FormulaSet::new(), &first.leaf);

    // pending right children: (branch at the split, formulas, step)
    let mut stack: Vec<(Branch, Option<(FormulaSet, RuleTag, RelFormula)>)> = vec![(first, None)];
    let mut verdict = Verdict::Proof;
    while let Some((mut b, pending)) = stack.pop() {
        if let Some((formulas, rule, premise)) = pending {
            search.commit(&mut b, formulas, rule, premise, None);
        }
        search.stats.branches += 1;
        if let Some(open) = search.expand(&mut b, &mut stack)? {
            verdict = Verdict::Countermodel(Box::new(open));
            break;
        }
    }
    search.stats.variables = search.diagnostics.max_vars_seen;
    weight::check_progress(&search.tree, &mut search.diagnostics);
    Ok(SearchReport {
        term,
        verdict,
        tree: search.tree,
        stats: search.stats,
        diagnostics: search.diagnostics,
    })
}

struct Search<'o> {
    tree: DeductionTree,
    stats: Stats,
    diagnostics: Diagnostics,
    cp: IndexSet<RelTerm>,
    limits: Limits,
    observer: &'o mut dyn FnMut(&TraceEvent),
}

type Pending = (Branch, Option<(FormulaSet, RuleTag, RelFormula)>);

impl Search<'_> {
    /// Expands `b` until it closes or saturates. Returns the countermodel
    /// when it saturates open.
    fn expand(&mut self, b: &mut Branch, stack: &mut Vec<Pending>) -> Result<Option<Countermodel>, EngineError> {
        loop {
            let leaf = *b.path.last().expect("nonempty path");
            self.diagnostics.max_vars_seen = self.diagnostics.max_vars_seen.max(b.vars.len());
            if self.tree.nodes[leaf].closed {
                (self.observer)(&TraceEvent::Closed { node: leaf });
                return Ok(None);
            }
            let Some(action) = rules::next_action(b) else {
                b.saturated = true;
                blocking::collect_lit_negcomp(b);
                (self.observer)(&TraceEvent::Saturated { node: leaf });
                let (model, valuation) = extract_model(b).expect("saturated");
                return Ok(Some(Countermodel {
                    branch: b.clone(),
                    model,
                    valuation,
                }));
            };
            if self.stats.steps >= self.limits.max_steps {
                return Err(EngineError::ResourceExhausted {
                    what: "rule applications",
                    limit: self.limits.max_steps,
                });
            }
            self.stats.steps += 1;
            match action {
                rules::Action::Boolean(f) => {
                    let (rule, succ) = apply_boolean(b, &f).expect("selected action applies");
                    match succ {
                        Successors::One(next) => self.commit(b, next, rule, f, None),
                        Successors::Two(left, right) => {
                            stack.push((b.clone(), Some((right, rule, f.clone()))));
                            self.commit(b, left, rule, f, None);
                        }
                    }
                }
                rules::Action::NegComp(f) => match apply_negcomp(b, &f).expect("selected action applies") {
                    NegCompOutcome::Decomposed { rule, var, node } => {
                        if b.vars.len() > self.limits.max_vars {
                            return Err(EngineError::ResourceExhausted {
                                what: "object variables",
                                limit: self.limits.max_vars,
                            });
                        }
                        self.commit(b, node, rule, f, Some(var));
                    }
                    other => unreachable!("selected (-;) action did not decompose: {other:?}"),
                },
                rules::Action::CompA(f, z) => {
                    let next = apply_comp_a(b, &f, &z).expect("selected action applies");
                    self.commit(b, next, RuleTag::CompA, f, Some(z));
                }
                rules::Action::CompB(f, z) => {
                    let next = apply_comp_b(b, &f, &z).expect("selected action applies");
                    self.commit(b, next, RuleTag::CompB, f, Some(z));
                }
            }
        }
    }

    fn commit(&mut self, b: &mut Branch, next: FormulaSet, rule: RuleTag, premise: RelFormula, var: Option<ObjVar>) {
        let parent = *b.path.last().expect("nonempty path");
        self.check_shape(&b.leaf, &next);
        let key = Applied {
            rule,
            premise: premise.clone(),
            var: var.clone(),
        };
        if !b.applied.insert(key) {
            self.diagnostics.duplicate_applications += 1;
        }
        let id = self.tree.push(Some(parent), next.clone(), Some((rule, premise, var)));
        b.advance(next);
        b.path.push(id);
        let node = &self.tree.nodes[id];
        (self.observer)(&TraceEvent::Applied {
            node: id,
            rule,
            premise: node.premise.as_ref().expect("set above"),
            var: node.var.as_ref(),
        });
    }

    /// Every new formula `x' R x''` has `R` among the input's components,
    /// and ends in `y` when `R` contains a composition.
    fn check_shape(&mut self, before: &FormulaSet, after: &FormulaSet) {
        for f in after.iter().filter(|f| !before.contains(f)) {
            if !self.cp.contains(&f.term) {
                self.diagnostics.shape_violations.push(format!("{f}: term is not a component"));
            } else if f.term.contains_comp() && f.right != ObjVar::y() {
                self.diagnostics.shape_violations.push(format!("{f}: composition away from y"));
            }
        }
    }
}

/// The model read off an open saturated branch: its object variables as
/// universe, each named as itself, and `(a, b)` in `r` exactly when
/// `a -r b` is a literal of the branch or of its blocked formulas.
pub fn extract_model(b: &Branch) -> Result<(Model, Valuation), BranchNotSaturated> {
    if !b.saturated {
        return Err(BranchNotSaturated);
    }
    let universe: Vec<_> = b.vars.iter().map(|v| std::sync::Arc::from(v.name())).collect();
    let n = universe.len();
    let mut model = Model::new(universe);
    let mut names: IndexSet<_> = IndexSet::new();
    for f in b.history.iter() {
        names.extend(f.term.variables());
    }
    let mut rels: IndexMap<_, _> = names.into_iter().map(|r| (r, PairSet::empty(n))).collect();
    let pos = |v: &ObjVar| b.vars.get_index_of(v).expect("branch variable");
    for lit in b.history.literals().chain(b.lit_negcomp.iter()) {
        if let RelTerm::Cmpl(inner) = &lit.term {
            if let RelTerm::Var(r) = &**inner {
                rels.get_mut(r).expect("collected").insert(pos(&lit.left), pos(&lit.right));
            }
        }
    }
    rels.sort_keys();
    for (r, rel) in rels {
        model.interpret(&*r, rel);
    }
    let valuation = b.vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok((model, valuation))
}
