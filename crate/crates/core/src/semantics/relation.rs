use std::fmt;

/// A binary relation over `{0, …, n-1}`, stored as an `n × n` bit matrix
/// in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    bits: Vec<u64>,
}

impl PairSet {
    pub fn empty(n: usize) -> Self {
        PairSet {
            n,
            bits: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = PairSet::empty(n);
        for a in 0..n {
            for b in 0..n {
                s.insert(a, b);
            }
        }
        s
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut s = PairSet::empty(n);
        for (a, b) in pairs {
            s.insert(a, b);
        }
        s
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn index(&self, a: usize, b: usize) -> usize {
        assert!(a < self.n && b < self.n, "pair ({a},{b}) outside universe of size {}", self.n);
        a * self.n + b
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        let i = self.index(a, b);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        let i = self.index(a, b);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        let i = self.index(a, b);
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |i| self.bits[i / 64] >> (i % 64) & 1 == 1)
            .map(move |i| (i / n, i % n))
    }

    pub fn complement(&self) -> Self {
        let mut out = PairSet::full(self.n);
        for (o, s) in out.bits.iter_mut().zip(&self.bits) {
            *o &= !s;
        }
        out
    }

    pub fn union(&self, other: &PairSet) -> Self {
        assert_eq!(self.n, other.n);
        PairSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &PairSet) -> Self {
        assert_eq!(self.n, other.n);
        PairSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn compose(&self, other: &PairSet) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = PairSet::empty(n);
        for a in 0..n {
            for c in 0..n {
                if !self.contains(a, c) {
                    continue;
                }
                for b in 0..n {
                    if other.contains(c, b) {
                        out.insert(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        PairSet::from_pairs(self.n, self.pairs().map(|(a, b)| (b, a)))
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_on_three_elements() {
        let r = PairSet::from_pairs(3, [(0, 1), (1, 2)]);
        assert_eq!(r.compose(&r).pairs().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(r.transpose().pairs().collect::<Vec<_>>(), vec![(1, 0), (2, 1)]);
        assert_eq!(r.complement().len(), 7);
        assert!(r.intersection(&r.complement()).is_empty());
        assert_eq!(r.union(&r.complement()), PairSet::full(3));
    }

    #[test]
    fn large_universe_spans_words() {
        let mut r = PairSet::empty(10);
        r.insert(9, 9);
        r.insert(6, 5);
        assert!(r.contains(9, 9));
        r.remove(9, 9);
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(6, 5)]);
        assert_eq!(PairSet::full(10).complement(), PairSet::empty(10));
    }
}
