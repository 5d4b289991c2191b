//! Exhaustive search for a falsifying model of `x P y`.
//!
//! Interpretations are numbered by a bitmask: bit `j·n² + (a·n + b)` says
//! whether the pair `(a, b)` belongs to the `j`-th relational variable
//! (variables sorted by name). The low [`LANE_BITS`] bits of the mask are
//! evaluated in parallel, one interpretation per bit lane, so each pass
//! over the term handles 4096 interpretations.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use super::{satisfies, Model, PairSet, Valuation};
use crate::formulas::{ObjVar, RelFormula};
use crate::relterm::RelTerm;

/// Default cap on `variables · size²`.
pub const DEFAULT_BUDGET_BITS: usize = 27;

pub(crate) const LANE_BITS: usize = 12;

const LOW_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Word `word` of the lane vector whose lane `l` holds bit `bit` of `l`.
pub(crate) fn lane_pattern(bit: usize, word: usize) -> u64 {
    if bit < 6 {
        LOW_MASKS[bit]
    } else if (word >> (bit - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search space of {bits} interpretation bits exceeds the budget of {budget}")]
pub struct OracleRefused {
    pub bits: usize,
    pub budget: usize,
}

#[derive(Clone, Copy)]
enum Op {
    One,
    Var(usize),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Comp(usize, usize),
    Conv(usize),
}

fn compile(t: &RelTerm, vars: &[Arc<str>], memo: &mut HashMap<RelTerm, usize>, ops: &mut Vec<Op>) -> usize {
    if let Some(&i) = memo.get(t) {
        return i;
    }
    let op = match t {
        RelTerm::One => Op::One,
        RelTerm::Var(name) => Op::Var(vars.binary_search(name).expect("collected variable")),
        RelTerm::Cmpl(c) => Op::Not(compile(c, vars, memo, ops)),
        RelTerm::Conv(c) => Op::Conv(compile(c, vars, memo, ops)),
        RelTerm::Union(l, r) => Op::Or(compile(l, vars, memo, ops), compile(r, vars, memo, ops)),
        RelTerm::Inter(l, r) => Op::And(compile(l, vars, memo, ops), compile(r, vars, memo, ops)),
        RelTerm::Comp(l, r) => Op::Comp(compile(l, vars, memo, ops), compile(r, vars, memo, ops)),
    };
    ops.push(op);
    memo.insert(t.clone(), ops.len() - 1);
    ops.len() - 1
}

/// Returns the first `(M, v)` with `M, v ⊭ x P y`, searching universes of
/// size 1 to `max_universe`, then interpretations by mask, then `(v(x), v(y))`
/// lexicographically. Elements are named `a`, `b`, `c`, …
pub fn brute_force_countermodel(
    p: &RelTerm,
    max_universe: usize,
) -> Result<Option<(Model, Valuation)>, OracleRefused> {
    brute_force_countermodel_with(p, max_universe, DEFAULT_BUDGET_BITS)
}

pub fn brute_force_countermodel_with(
    p: &RelTerm,
    max_universe: usize,
    budget_bits: usize,
) -> Result<Option<(Model, Valuation)>, OracleRefused> {
    assert!(max_universe >= 1, "universe size must be positive");
    let vars: Vec<Arc<str>> = p.variables().into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let bits = vars.len() * max_universe * max_universe;
    if bits > budget_bits {
        return Err(OracleRefused {
            bits,
            budget: budget_bits,
        });
    }
    let mut ops = Vec::new();
    let root = compile(p, &vars, &mut HashMap::new(), &mut ops);
    for n in 1..=max_universe {
        if let Some((mask, pair)) = search(&ops, root, vars.len(), n) {
            let found = decode(&vars, n, mask, pair);
            let goal = RelFormula::new(ObjVar::x(), p.clone(), ObjVar::y());
            assert_eq!(
                satisfies(&found.0, &found.1, &goal),
                Ok(false),
                "oracle witness does not falsify {goal}"
            );
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn decode(vars: &[Arc<str>], n: usize, mask: u64, pair: usize) -> (Model, Valuation) {
    let universe: Vec<Arc<str>> = (0..n).map(|i| Arc::from(element_name(i))).collect();
    let mut m = Model::new(universe);
    let nn = n * n;
    for (j, name) in vars.iter().enumerate() {
        let rel = PairSet::from_pairs(
            n,
            (0..nn)
                .filter(|p| mask >> (j * nn + p) & 1 == 1)
                .map(|p| (p / n, p % n)),
        );
        m.interpret(name, rel);
    }
    let v = [(ObjVar::x(), pair / n), (ObjVar::y(), pair % n)].into_iter().collect();
    (m, v)
}

pub(crate) fn element_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

/// First failing `(interpretation mask, pair index)` at universe size `n`.
fn search(ops: &[Op], root: usize, nvars: usize, n: usize) -> Option<(u64, usize)> {
    let nn = n * n;
    let total = nvars * nn;
    let low = total.min(LANE_BITS);
    let lanes = 1usize << low;
    let words = (lanes / 64).max(1);
    let valid = if lanes < 64 { (1u64 << lanes) - 1 } else { !0 };
    let stride = nn * words;
    let mut buf = vec![0u64; ops.len() * stride];

    for batch in 0..1u64 << (total - low) {
        for (i, op) in ops.iter().enumerate() {
            let (done, rest) = buf.split_at_mut(i * stride);
            let out = &mut rest[..stride];
            let slot = |k: usize, p: usize| &done[k * stride + p * words..k * stride + (p + 1) * words];
            match *op {
                Op::One => out.fill(!0),
                Op::Var(j) => {
                    for p in 0..nn {
                        let bit = j * nn + p;
                        let dst = &mut out[p * words..(p + 1) * words];
                        if bit < low {
                            for (w, d) in dst.iter_mut().enumerate() {
                                *d = lane_pattern(bit, w);
                            }
                        } else {
                            dst.fill(if batch >> (bit - low) & 1 == 1 { !0 } else { 0 });
                        }
                    }
                }
                Op::Not(a) => {
                    for p in 0..nn {
                        for (d, s) in out[p * words..(p + 1) * words].iter_mut().zip(slot(a, p)) {
                            *d = !s;
                        }
                    }
                }
                Op::Or(a, b) | Op::And(a, b) => {
                    let or = matches!(op, Op::Or(..));
                    for p in 0..nn {
                        let dst = &mut out[p * words..(p + 1) * words];
                        for ((d, l), r) in dst.iter_mut().zip(slot(a, p)).zip(slot(b, p)) {
                            *d = if or { l | r } else { l & r };
                        }
                    }
                }
                Op::Comp(a, b) => {
                    for x in 0..n {
                        for y in 0..n {
                            let dst = &mut out[(x * n + y) * words..(x * n + y + 1) * words];
                            dst.fill(0);
                            for c in 0..n {
                                for ((d, l), r) in dst.iter_mut().zip(slot(a, x * n + c)).zip(slot(b, c * n + y)) {
                                    *d |= l & r;
                                }
                            }
                        }
                    }
                }
                Op::Conv(a) => {
                    for x in 0..n {
                        for y in 0..n {
                            out[(x * n + y) * words..(x * n + y + 1) * words].copy_from_slice(slot(a, y * n + x));
                        }
                    }
                }
            }
        }
        let top = &buf[root * stride..(root + 1) * stride];
        for w in 0..words {
            let held = (0..nn).fold(!0u64, |acc, p| acc & top[p * words + w]);
            let bad = !held & valid;
            if bad != 0 {
                let lane = w * 64 + bad.trailing_zeros() as usize;
                let pair = (0..nn)
                    .find(|p| top[p * words + lane / 64] >> (lane % 64) & 1 == 0)
                    .expect("some pair fails in this lane");
                return Some(((batch << low) | lane as u64, pair));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relterm::parse_term;

    fn refute(s: &str, max: usize) -> Option<(Model, Valuation)> {
        brute_force_countermodel(&parse_term(s).unwrap(), max).unwrap()
    }

    #[test]
    fn single_variable_falls_at_size_one() {
        let (m, v) = refute("r", 3).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.relation("r").unwrap().is_empty());
        assert_eq!(v[&ObjVar::x()], 0);
        assert_eq!(v[&ObjVar::y()], 0);
    }

    #[test]
    fn excluded_middle_survives() {
        assert!(refute("r | -r", 3).is_none());
        assert!(refute("1", 4).is_none());
    }

    #[test]
    fn entailment_instance_survives_size_three() {
        assert!(refute("(1 ; ((r & (s1 | s2)) ; 1)) | (-s1 | -r)", 3).is_none());
    }

    #[test]
    fn needs_two_elements() {
        // r;-r is refuted at size 1 already (r empty); -r | (r;1) needs nothing.
        assert!(refute("-r | (r ; 1)", 3).is_none());
        // x (1;r) y fails only when r is empty everywhere
        let (m, _) = refute("1 ; r", 2).unwrap();
        assert!(m.relation("r").unwrap().is_empty());
        // r ; s holds in size 1 unless r or s is empty: first mask is all empty
        let (m, _) = refute("(r ; s) | -(r ; 1) | -(1 ; s)", 2).unwrap();
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn budget_guard() {
        let t = parse_term("r | s | p | q").unwrap();
        assert!(brute_force_countermodel(&t, 3).is_err());
        assert!(brute_force_countermodel_with(&t, 3, 36).is_ok());
    }

    #[test]
    fn word_sized_lanes_agree_with_narrow_ones() {
        // three variables at size 2 use 12 bits: a single full batch
        let t = parse_term("(r & s) | -p | (r ; -s)").unwrap();
        let (m, v) = brute_force_countermodel(&t, 2).unwrap().unwrap();
        let f = RelFormula::new(ObjVar::x(), t, ObjVar::y());
        assert!(!satisfies(&m, &v, &f).unwrap());
    }
}
