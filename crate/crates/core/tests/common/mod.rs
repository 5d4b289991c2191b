//! Seeded generator for fragment terms shared by the integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reltab::relterm::{fragment_check, simplify_ones, RelTerm};

pub const SEED: u64 = 0x5eed_2024;
pub const VARS: [&str; 3] = ["r", "s", "p"];

struct Gen {
    rng: ChaCha8Rng,
    vars: usize,
}

impl Gen {
    fn var(&mut self) -> RelTerm {
        RelTerm::var(VARS[self.rng.random_range(0..self.vars)])
    }

    /// Complement-free, `1`-free Boolean term.
    fn plain(&mut self, depth: usize) -> RelTerm {
        if depth <= 1 || self.rng.random_bool(0.6) {
            return self.var();
        }
        let (l, r) = (self.plain(depth - 1), self.plain(depth - 1));
        if self.rng.random_bool(0.5) {
            RelTerm::union(l, r)
        } else {
            RelTerm::inter(l, r)
        }
    }

    /// A term whose only `1`s sit inside `(B ; 1)`; with `top` it may also
    /// use `1`, `-1` and `(1 ; S)`.
    fn term(&mut self, depth: usize, top: bool) -> RelTerm {
        if depth <= 1 {
            return match self.rng.random_range(0..if top { 6 } else { 4 }) {
                0 | 1 => self.var(),
                2 | 3 => RelTerm::cmpl(self.var()),
                4 => RelTerm::One,
                _ => RelTerm::neg_one(),
            };
        }
        match self.rng.random_range(0..if top { 9 } else { 8 }) {
            0 => self.var(),
            1 => RelTerm::cmpl(self.var()),
            2 => RelTerm::union(self.term(depth - 1, top), self.term(depth - 1, top)),
            3 => RelTerm::inter(self.term(depth - 1, top), self.term(depth - 1, top)),
            4 => RelTerm::cmpl(self.term(depth - 1, top)),
            5 | 6 => {
                let b = self.plain(depth - 1);
                RelTerm::comp(b, self.term(depth - 1, false))
            }
            7 => RelTerm::comp(self.plain(depth - 1), RelTerm::One),
            _ => RelTerm::comp(RelTerm::One, self.term(depth - 1, false)),
        }
    }
}

impl Gen {
    /// Enlarges the left sides of compositions, so that `-t | weaken(t)` is
    /// valid.
    fn weaken(&mut self, t: &RelTerm) -> RelTerm {
        match t {
            RelTerm::Comp(b, s) if b.is_plain_boolean() && self.rng.random_bool(0.5) => {
                RelTerm::comp(RelTerm::union((**b).clone(), self.var()), (**s).clone())
            }
            RelTerm::Comp(b, s) => RelTerm::comp((**b).clone(), self.weaken(s)),
            RelTerm::Union(a, b) => RelTerm::union(self.weaken(a), self.weaken(b)),
            RelTerm::Inter(a, b) => RelTerm::inter(self.weaken(a), self.weaken(b)),
            _ => t.clone(),
        }
    }

    /// Mostly valid shapes built from random parts.
    fn entailment(&mut self, depth: usize) -> RelTerm {
        let a = self.term(depth - 1, false);
        match self.rng.random_range(0..3) {
            0 => {
                let w = self.weaken(&a);
                RelTerm::union(RelTerm::cmpl(a), w)
            }
            1 => {
                let b = self.term(depth - 1, false);
                RelTerm::union(RelTerm::cmpl(RelTerm::inter(a.clone(), b)), a)
            }
            _ => {
                let b = self.plain(2);
                let s = self.term(depth - 2, false);
                // -(B ; S) | ((B | x) ; S) with the inner part weakened
                let w = self.weaken(&s);
                RelTerm::union(
                    RelTerm::cmpl(RelTerm::comp(b.clone(), s)),
                    RelTerm::comp(RelTerm::union(b, self.var()), w),
                )
            }
        }
    }
}

/// `count` distinct fragment terms of depth at most `max_depth`, after the
/// one-identities, over at most `vars` relational variables.
pub fn corpus(seed: u64, count: usize, max_depth: usize, vars: usize) -> Vec<RelTerm> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vars,
    };
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let depth = g.rng.random_range(3..=max_depth);
        let raw = if depth >= 3 && g.rng.random_bool(0.4) {
            g.entailment(depth)
        } else {
            g.term(depth, true)
        };
        let t = simplify_ones(&raw);
        if t.depth() <= max_depth && fragment_check(&t).is_accept() && seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

/// Every term of depth at most `depth` over `names` and `1`.
pub fn all_terms(depth: usize, names: &[&str]) -> Vec<RelTerm> {
    let mut levels: Vec<Vec<RelTerm>> = Vec::new();
    let atoms: Vec<RelTerm> = names
        .iter()
        .map(|n| RelTerm::var(n))
        .chain(std::iter::once(RelTerm::One))
        .collect();
    levels.push(atoms);
    for d in 1..depth {
        let below: Vec<RelTerm> = levels.iter().flatten().cloned().collect();
        let prev = &levels[d - 1];
        let mut next = Vec::new();
        for t in prev {
            next.push(RelTerm::cmpl(t.clone()));
        }
        for a in &below {
            for b in &below {
                let fresh = prev.contains(a) || prev.contains(b);
                if fresh {
                    next.push(RelTerm::union(a.clone(), b.clone()));
                    next.push(RelTerm::inter(a.clone(), b.clone()));
                    next.push(RelTerm::comp(a.clone(), b.clone()));
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

pub mod strategies {
    use std::sync::Arc;

    use proptest::prelude::*;
    use reltab::formulas::ObjVar;
    use reltab::relterm::{fragment_check, simplify_ones, RelTerm};
    use reltab::semantics::{Model, PairSet, Valuation};

    use super::VARS;

    fn var() -> impl Strategy<Value = RelTerm> {
        prop::sample::select(&VARS[..]).prop_map(RelTerm::var)
    }

    pub fn plain() -> impl Strategy<Value = RelTerm> {
        var().prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::union(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| RelTerm::inter(a, b)),
            ]
        })
    }

    /// Any term over the variables, `1`, all operators but converse.
    pub fn any_term() -> impl Strategy<Value = RelTerm> {
        prop_oneof![var(), Just(RelTerm::One)].prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(RelTerm::cmpl),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::union(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::inter(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| RelTerm::comp(a, b)),
            ]
        })
    }

    /// Boolean terms over the variables and `1`.
    pub fn boolean() -> impl Strategy<Value = RelTerm> {
        prop_oneof![var(), Just(RelTerm::One)].prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(RelTerm::cmpl),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::union(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| RelTerm::inter(a, b)),
            ]
        })
    }

    /// Right arguments of compositions: `1` only inside `(B ; 1)`.
    fn right_side() -> impl Strategy<Value = RelTerm> {
        prop_oneof![var(), var().prop_map(RelTerm::cmpl)].prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(RelTerm::cmpl),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::union(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::inter(a, b)),
                (plain(), inner).prop_map(|(b, s)| RelTerm::comp(b, s)),
                plain().prop_map(|b| RelTerm::comp(b, RelTerm::One)),
            ]
        })
    }

    /// Terms of the decidable fragment, after the one-identities.
    pub fn fragment_term() -> impl Strategy<Value = RelTerm> {
        let leaf = prop_oneof![
            var(),
            var().prop_map(RelTerm::cmpl),
            right_side(),
            right_side().prop_map(|s| RelTerm::comp(RelTerm::One, s)),
        ];
        leaf.prop_recursive(2, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(RelTerm::cmpl),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RelTerm::union(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| RelTerm::inter(a, b)),
            ]
        })
        .prop_map(|t| simplify_ones(&t))
        .prop_filter("in the fragment", |t| fragment_check(t).is_accept())
    }

    /// A model of size 1 to 3 interpreting every variable, with a
    /// valuation of `x` and `y`.
    pub fn model() -> impl Strategy<Value = (Model, Valuation)> {
        (1usize..=3).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(any::<bool>(), n * n), VARS.len()),
                0..n,
                0..n,
            )
                .prop_map(move |(bits, x, y)| {
                    let names = (0..n).map(|i| Arc::from(format!("e{i}"))).collect();
                    let mut m = Model::new(names);
                    for (name, row) in VARS.iter().zip(bits) {
                        let pairs = row.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| (i / n, i % n));
                        m.interpret(name, PairSet::from_pairs(n, pairs));
                    }
                    let v = [(ObjVar::x(), x), (ObjVar::y(), y)].into_iter().collect();
                    (m, v)
                })
        })
    }
}
