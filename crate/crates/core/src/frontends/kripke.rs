//! Exhaustive search for a pointed Kripke model refuting a modal formula.
//!
//! Same scheme as the relational oracle: bit `j·n² + (a·n + b)` of the
//! interpretation mask is the pair `(a, b)` of the `j`-th accessibility
//! variable, followed by `k·n + w` for "proposition `k` holds at world `w`"
//! (both lists sorted by name). The low bits are evaluated in parallel lanes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::ModalFormula;
use crate::relterm::RelTerm;
use crate::semantics::{lane_pattern, OracleRefused, PairSet, LANE_BITS};

pub const DEFAULT_KRIPKE_BUDGET: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: usize,
    pub relations: BTreeMap<Arc<str>, PairSet>,
    /// Truth value of each proposition at each world.
    pub valuation: BTreeMap<Arc<str>, Vec<bool>>,
}

impl KripkeModel {
    fn program(&self, a: &RelTerm) -> PairSet {
        match a {
            RelTerm::Var(r) => self.relations.get(r).cloned().unwrap_or_else(|| PairSet::empty(self.worlds)),
            RelTerm::Union(l, r) => self.program(l).union(&self.program(r)),
            RelTerm::Inter(l, r) => self.program(l).intersection(&self.program(r)),
            other => panic!("program `{other}` is not plain Boolean"),
        }
    }

    pub fn holds(&self, world: usize, f: &ModalFormula) -> bool {
        match f {
            ModalFormula::Prop(p) => self.valuation.get(p).is_some_and(|v| v[world]),
            ModalFormula::Not(g) => !self.holds(world, g),
            ModalFormula::And(a, b) => self.holds(world, a) && self.holds(world, b),
            ModalFormula::Or(a, b) => self.holds(world, a) || self.holds(world, b),
            ModalFormula::Box(a, g) => {
                let acc = self.program(a);
                (0..self.worlds).all(|v| !acc.contains(world, v) || self.holds(v, g))
            }
            ModalFormula::Dia(a, g) => {
                let acc = self.program(a);
                (0..self.worlds).any(|v| acc.contains(world, v) && self.holds(v, g))
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    /// Accessibility variable; one lane vector per pair.
    Rel(usize),
    Union(usize, usize),
    Inter(usize, usize),
    /// Proposition; one lane vector per world.
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Box(usize, usize),
    Dia(usize, usize),
}

struct Compiler<'a> {
    rels: &'a [Arc<str>],
    props: &'a [Arc<str>],
    ops: Vec<Op>,
    programs: HashMap<RelTerm, usize>,
    formulas: HashMap<ModalFormula, usize>,
}

impl Compiler<'_> {
    fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn program(&mut self, a: &RelTerm) -> usize {
        if let Some(&i) = self.programs.get(a) {
            return i;
        }
        let op = match a {
            RelTerm::Var(r) => Op::Rel(self.rels.binary_search(r).expect("collected")),
            RelTerm::Union(l, r) => Op::Union(self.program(l), self.program(r)),
            RelTerm::Inter(l, r) => Op::Inter(self.program(l), self.program(r)),
            other => panic!("program `{other}` is not plain Boolean"),
        };
        let i = self.push(op);
        self.programs.insert(a.clone(), i);
        i
    }

    fn formula(&mut self, f: &ModalFormula) -> usize {
        if let Some(&i) = self.formulas.get(f) {
            return i;
        }
        let op = match f {
            ModalFormula::Prop(p) => Op::Prop(self.props.binary_search(p).expect("collected")),
            ModalFormula::Not(g) => Op::Not(self.formula(g)),
            ModalFormula::And(a, b) => Op::And(self.formula(a), self.formula(b)),
            ModalFormula::Or(a, b) => Op::Or(self.formula(a), self.formula(b)),
            ModalFormula::Box(a, g) => Op::Box(self.program(a), self.formula(g)),
            ModalFormula::Dia(a, g) => Op::Dia(self.program(a), self.formula(g)),
        };
        let i = self.push(op);
        self.formulas.insert(f.clone(), i);
        i
    }
}

/// The first model of at most `max_worlds` worlds, with a world where `f`
/// fails, searching by size, then interpretation mask, then world.
pub fn kripke_countermodel(f: &ModalFormula, max_worlds: usize) -> Result<Option<(KripkeModel, usize)>, OracleRefused> {
    kripke_countermodel_with(f, max_worlds, DEFAULT_KRIPKE_BUDGET)
}

pub fn kripke_countermodel_with(
    f: &ModalFormula,
    max_worlds: usize,
    budget_bits: usize,
) -> Result<Option<(KripkeModel, usize)>, OracleRefused> {
    assert!(max_worlds >= 1, "a Kripke model needs a world");
    let rels: Vec<Arc<str>> = f.accessibility_vars().into_iter().collect();
    let props: Vec<Arc<str>> = f.propositions().into_iter().collect();
    let bits = rels.len() * max_worlds * max_worlds + props.len() * max_worlds;
    if bits > budget_bits {
        return Err(OracleRefused {
            bits,
            budget: budget_bits,
        });
    }
    let mut c = Compiler {
        rels: &rels,
        props: &props,
        ops: Vec::new(),
        programs: HashMap::new(),
        formulas: HashMap::new(),
    };
    let root = c.formula(f);
    let ops = c.ops;
    for n in 1..=max_worlds {
        if let Some((mask, world)) = search(&ops, root, rels.len(), props.len(), n) {
            let m = decode(&rels, &props, n, mask);
            assert!(!m.holds(world, f), "Kripke witness does not refute {f}");
            return Ok(Some((m, world)));
        }
    }
    Ok(None)
}

fn decode(rels: &[Arc<str>], props: &[Arc<str>], n: usize, mask: u64) -> KripkeModel {
    let nn = n * n;
    let bit = |i: usize| mask >> i & 1 == 1;
    let relations = rels
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let pairs = (0..nn).filter(|p| bit(j * nn + p)).map(|p| (p / n, p % n));
            (r.clone(), PairSet::from_pairs(n, pairs))
        })
        .collect();
    let base = rels.len() * nn;
    let valuation = props
        .iter()
        .enumerate()
        .map(|(k, p)| (p.clone(), (0..n).map(|w| bit(base + k * n + w)).collect()))
        .collect();
    KripkeModel {
        worlds: n,
        relations,
        valuation,
    }
}

fn search(ops: &[Op], root: usize, nrels: usize, nprops: usize, n: usize) -> Option<(u64, usize)> {
    let nn = n * n;
    let total = nrels * nn + nprops * n;
    let low = total.min(LANE_BITS);
    let lanes = 1usize << low;
    let words = (lanes / 64).max(1);
    let valid = if lanes < 64 { (1u64 << lanes) - 1 } else { !0 };
    // programs hold n² vectors, formulas n; use the larger stride for both
    let stride = nn * words;
    let mut buf = vec![0u64; ops.len() * stride];
    let fill = |dst: &mut [u64], bit: usize, batch: u64| {
        if bit < low {
            for (w, d) in dst.iter_mut().enumerate() {
                *d = lane_pattern(bit, w);
            }
        } else {
            dst.fill(if batch >> (bit - low) & 1 == 1 { !0 } else { 0 });
        }
    };

    for batch in 0..1u64 << (total - low) {
        for (i, op) in ops.iter().enumerate() {
            let (done, rest) = buf.split_at_mut(i * stride);
            let out = &mut rest[..stride];
            let slot = |k: usize, p: usize| &done[k * stride + p * words..k * stride + (p + 1) * words];
            match *op {
                Op::Rel(j) => {
                    for p in 0..nn {
                        fill(&mut out[p * words..(p + 1) * words], j * nn + p, batch);
                    }
                }
                Op::Prop(k) => {
                    for w in 0..n {
                        fill(&mut out[w * words..(w + 1) * words], nrels * nn + k * n + w, batch);
                    }
                }
                Op::Union(a, b) | Op::Inter(a, b) | Op::And(a, b) | Op::Or(a, b) => {
                    let or = matches!(op, Op::Union(..) | Op::Or(..));
                    let len = if matches!(op, Op::Union(..) | Op::Inter(..)) { nn } else { n };
                    for p in 0..len {
                        let dst = &mut out[p * words..(p + 1) * words];
                        for ((d, l), r) in dst.iter_mut().zip(slot(a, p)).zip(slot(b, p)) {
                            *d = if or { l | r } else { l & r };
                        }
                    }
                }
                Op::Not(a) => {
                    for w in 0..n {
                        for (d, s) in out[w * words..(w + 1) * words].iter_mut().zip(slot(a, w)) {
                            *d = !s;
                        }
                    }
                }
                Op::Box(a, g) | Op::Dia(a, g) => {
                    let dia = matches!(op, Op::Dia(..));
                    for u in 0..n {
                        let dst = &mut out[u * words..(u + 1) * words];
                        dst.fill(if dia { 0 } else { !0 });
                        for v in 0..n {
                            for ((d, acc), val) in dst.iter_mut().zip(slot(a, u * n + v)).zip(slot(g, v)) {
                                if dia {
                                    *d |= acc & val;
                                } else {
                                    *d &= !acc | val;
                                }
                            }
                        }
                    }
                }
            }
        }
        let top = &buf[root * stride..root * stride + n * words];
        for w in 0..words {
            let held = (0..n).fold(!0u64, |acc, u| acc & top[u * words + w]);
            let bad = !held & valid;
            if bad != 0 {
                let lane = w * 64 + bad.trailing_zeros() as usize;
                let world = (0..n)
                    .find(|u| top[u * words + lane / 64] >> (lane % 64) & 1 == 0)
                    .expect("some world fails in this lane");
                return Some(((batch << low) | lane as u64, world));
            }
        }
    }
    None
}
