//! Dense digraphs over `0..n` stored as bit rows.
//!
//! Every graph in this crate is small (a few hundred vertices at most), so
//! reachability is computed once by Warshall's closure over `u64` words.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / WORD] |= 1 << (j % WORD);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Ordered pairs `(i, j)` with the bit set, in row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn arc_count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Transitive closure: bit `(i, j)` is set iff `j` is reachable from `i`
    /// by a path of one or more arcs.
    pub fn transitive_closure(&self) -> BitMatrix {
        let mut c = self.clone();
        let w = c.words;
        for k in 0..c.n {
            let row_k: Vec<u64> = c.row(k).to_vec();
            for i in 0..c.n {
                if c.get(i, k) {
                    let row_i = &mut c.data[i * w..(i + 1) * w];
                    for (a, b) in row_i.iter_mut().zip(&row_k) {
                        *a |= *b;
                    }
                }
            }
        }
        c
    }

    pub fn is_acyclic(&self) -> bool {
        let c = self.transitive_closure();
        (0..self.n).all(|i| !c.get(i, i))
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (_, j) in self.arcs() {
            deg[j] += 1;
        }
        deg
    }

    /// Kahn's algorithm, always removing the smallest-index source.
    /// Returns `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut deg = self.in_degrees();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&v| deg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for u in 0..self.n {
                if self.get(v, u) {
                    deg[u] -= 1;
                    if deg[u] == 0 {
                        ready.push(Reverse(u));
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Kahn's algorithm removing a uniformly chosen source at each step.
    /// Every topological order has positive probability.
    pub fn random_topological_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<usize>> {
        let mut deg = self.in_degrees();
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| deg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while !ready.is_empty() {
            let v = ready.swap_remove(rng.gen_range(0..ready.len()));
            order.push(v);
            for u in 0..self.n {
                if self.get(v, u) {
                    deg[u] -= 1;
                    if deg[u] == 0 {
                        ready.push(u);
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.arcs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain(n: usize) -> BitMatrix {
        let mut g = BitMatrix::new(n);
        for i in 1..n {
            g.set(i - 1, i);
        }
        g
    }

    #[test]
    fn closure_of_chain_is_strict_upper_triangle() {
        let c = chain(70).transitive_closure();
        for i in 0..70 {
            for j in 0..70 {
                assert_eq!(c.get(i, j), i < j, "({i},{j})");
            }
        }
    }

    #[test]
    fn cycle_detected() {
        let mut g = chain(4);
        assert!(g.is_acyclic());
        g.set(3, 1);
        assert!(!g.is_acyclic());
        assert!(g.topological_order().is_none());
    }

    #[test]
    fn min_index_tie_breaking() {
        let mut g = BitMatrix::new(4);
        g.set(2, 0);
        assert_eq!(g.topological_order().unwrap(), vec![1, 2, 0, 3]);
    }

    #[test]
    fn random_orders_respect_arcs() {
        let mut g = BitMatrix::new(6);
        g.set(0, 3);
        g.set(3, 5);
        g.set(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let order = g.random_topological_order(&mut rng).unwrap();
            let mut pos = [0; 6];
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
            for (a, b) in g.arcs() {
                assert!(pos[a] < pos[b]);
            }
        }
    }
}
