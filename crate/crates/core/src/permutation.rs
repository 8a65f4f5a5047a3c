//! Permutations on `0..n`, the digraph `G_pi`, and the barred patterns
//! 21-3bar-54 (plane) and 45-3bar-12 (the second biplane pattern).
//!
//! A permutation is stored by its image: `pi.apply(i)` is the rank of
//! element `i`, so `i` precedes `j` in `pi` iff `pi.apply(i) < pi.apply(j)`.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::digraph::BitMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Builds from a 0-based image, checking that it is a bijection.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(Error::NotABijection(format!("value {} outside 1..={n}", v + 1)));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotABijection(format!("value {} repeated", v + 1)));
            }
        }
        Ok(Permutation { image })
    }

    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if let Some(&v) = image.iter().find(|&&v| v == 0) {
            return Err(Error::NotABijection(format!("value {v} outside 1..={}", image.len())));
        }
        Permutation::new(image.iter().map(|&v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    /// `i` comes before `j` in the order induced by `self`.
    #[inline]
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.image[i] < self.image[j]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// Value complement: `i -> n - 1 - pi(i)` (0-based).
    pub fn negate(&self) -> Permutation {
        let n = self.len();
        Permutation { image: self.image.iter().map(|&v| n - 1 - v).collect() }
    }

    /// Pointwise composition `outer(inner(i))`.
    pub fn compose(outer: &Permutation, inner: &Permutation) -> Result<Permutation> {
        if outer.len() != inner.len() {
            return Err(Error::SizeMismatch { expected: outer.len(), found: inner.len() });
        }
        Ok(Permutation { image: inner.image.iter().map(|&v| outer.image[v]).collect() })
    }

    /// Elements listed in the order the permutation induces.
    pub fn order(&self) -> Vec<usize> {
        self.inverse().image
    }

    /// The permutation whose induced order lists `order[0]` first, then
    /// `order[1]`, and so on.
    pub fn from_order(order: &[usize]) -> Result<Permutation> {
        Ok(Permutation::new(order.to_vec())?.inverse())
    }

    /// Arcs `(i, j)` with `i < j`, `pi(i) < pi(j)` and nothing in between
    /// on both axes.
    pub fn digraph(&self) -> PermDigraph {
        let n = self.len();
        let mut arcs = BitMatrix::new(n);
        for i in 0..n {
            // Scanning right from i, j is a cover of i iff pi(j) is above pi(i)
            // and below every value seen so far above pi(i).
            let mut ceiling = usize::MAX;
            for j in i + 1..n {
                let v = self.image[j];
                if v > self.image[i] && v < ceiling {
                    arcs.set(i, j);
                    ceiling = v;
                }
            }
        }
        PermDigraph { arcs }
    }

    /// `j` is reachable from `i` in `G_pi` (reflexively).
    pub fn reachable(&self, i: usize, j: usize) -> Result<bool> {
        let n = self.len();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx + 1, n });
            }
        }
        Ok(i <= j && self.image[i] <= self.image[j])
    }

    /// An occurrence `(i, j, l, m)` of 21-3bar-54: positions `i<j<l<m` with
    /// `pi(j) < pi(i) < pi(m) < pi(l)` and no `k` in `j<k<l` with
    /// `pi(i) < pi(k) < pi(m)`.
    pub fn find_plane_violation(&self) -> Option<[usize; 4]> {
        find_barred_pattern(&self.image)
    }

    pub fn is_plane(&self) -> bool {
        self.find_plane_violation().is_none()
    }

    /// Avoids both 21-3bar-54 and 45-3bar-12.
    pub fn is_biplane(&self) -> bool {
        self.is_plane() && self.negate().is_plane()
    }

    pub fn is_in(&self, class: PermClass) -> bool {
        match class {
            PermClass::Plane => self.is_plane(),
            PermClass::Biplane => self.is_biplane(),
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_based())
    }
}

/// Number of points `(p, v)` with `p < pos` and `v < val`, for all `pos, val`.
struct DominanceCounts {
    side: usize,
    cells: Vec<u32>,
}

impl DominanceCounts {
    fn new(values: &[usize]) -> Self {
        let n = values.len();
        let side = n + 1;
        let mut cells = vec![0u32; side * side];
        for p in 0..n {
            for v in 0..side {
                cells[(p + 1) * side + v] = cells[p * side + v] + u32::from(values[p] < v);
            }
        }
        DominanceCounts { side, cells }
    }

    #[inline]
    fn at(&self, pos: usize, val: usize) -> u32 {
        self.cells[pos * self.side + val]
    }

    /// Points with `p0 <= p < p1` and `v0 <= v < v1`.
    #[inline]
    fn count(&self, p0: usize, p1: usize, v0: usize, v1: usize) -> u32 {
        self.at(p1, v1) + self.at(p0, v0) - self.at(p0, v1) - self.at(p1, v0)
    }
}

pub(crate) fn find_barred_pattern(values: &[usize]) -> Option<[usize; 4]> {
    let n = values.len();
    if n < 4 {
        return None;
    }
    let counts = DominanceCounts::new(values);
    for i in 0..n {
        let vi = values[i];
        for j in i + 1..n {
            if values[j] >= vi {
                continue;
            }
            for l in j + 1..n {
                let vl = values[l];
                if vl <= vi + 1 {
                    continue;
                }
                for m in l + 1..n {
                    let vm = values[m];
                    if vm > vi && vm < vl && counts.count(j + 1, l, vi + 1, vm) == 0 {
                        return Some([i, j, l, m]);
                    }
                }
            }
        }
    }
    None
}

/// `G_pi`: arcs join pairs increasing in both position and value with no
/// element strictly between them on both axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermDigraph {
    arcs: BitMatrix,
}

impl PermDigraph {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs.get(i, j)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.arcs()
    }

    pub fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.arcs.get(i, j))
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.arcs.get(i, j))
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.arcs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermClass {
    Plane,
    Biplane,
}

impl std::str::FromStr for PermClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(PermClass::Plane),
            "biplane" => Ok(PermClass::Biplane),
            other => Err(Error::Format(format!("unknown permutation class {other:?}"))),
        }
    }
}

/// All permutations of `0..n` with first value `first`, in lexicographic order.
fn with_first(n: usize, first: usize) -> impl Iterator<Item = Vec<usize>> {
    let rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
    let k = rest.len();
    rest.into_iter().permutations(k).map(move |tail| {
        let mut image = Vec::with_capacity(n);
        image.push(first);
        image.extend(tail);
        image
    })
}

/// Every permutation of `[n]` in `class`, lexicographic by image. Filters
/// all `n!` permutations, split across threads by first value.
pub fn enumerate(n: usize, class: PermClass) -> Vec<Permutation> {
    if n == 0 {
        return vec![Permutation::identity(0)];
    }
    let parts: Vec<Vec<Permutation>> = (0..n)
        .into_par_iter()
        .map(|first| {
            with_first(n, first)
                .map(|image| Permutation { image })
                .filter(|p| p.is_in(class))
                .collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

pub fn enumerate_plane(n: usize) -> Vec<Permutation> {
    enumerate(n, PermClass::Plane)
}

pub fn enumerate_biplane(n: usize) -> Vec<Permutation> {
    enumerate(n, PermClass::Biplane)
}

pub fn count(n: usize, class: PermClass) -> usize {
    if n == 0 {
        return 1;
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            with_first(n, first)
                .filter(|image| {
                    find_barred_pattern(image).is_none()
                        && (class == PermClass::Plane || find_barred_pattern(&complement(image)).is_none())
                })
                .count()
        })
        .sum()
}

fn complement(values: &[usize]) -> Vec<usize> {
    let n = values.len();
    values.iter().map(|&v| n - 1 - v).collect()
}

/// Backtracking generator: a prefix is abandoned as soon as its last entry
/// completes a forbidden pattern. All four pattern positions then lie in the
/// prefix, and every value not yet placed sits to the right of them, so the
/// window is already final.
pub fn enumerate_pruned(n: usize, class: PermClass) -> Vec<Permutation> {
    if n == 0 {
        return vec![Permutation::identity(0)];
    }
    let parts: Vec<Vec<Permutation>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut search = PrunedSearch::new(n, class);
            search.push(first);
            search.run();
            search.found
        })
        .collect();
    parts.into_iter().flatten().collect()
}

struct PrunedSearch {
    n: usize,
    class: PermClass,
    prefix: Vec<usize>,
    used: Vec<bool>,
    // rows[p][v] = number of prefix positions < p with value < v
    rows: Vec<Vec<u32>>,
    found: Vec<Permutation>,
}

impl PrunedSearch {
    fn new(n: usize, class: PermClass) -> Self {
        PrunedSearch {
            n,
            class,
            prefix: Vec::with_capacity(n),
            used: vec![false; n],
            rows: vec![vec![0; n + 1]],
            found: Vec::new(),
        }
    }

    fn push(&mut self, v: usize) {
        let last = self.rows.last().expect("row 0");
        let next: Vec<u32> = (0..=self.n).map(|w| last[w] + u32::from(v < w)).collect();
        self.rows.push(next);
        self.prefix.push(v);
        self.used[v] = true;
    }

    fn pop(&mut self) {
        let v = self.prefix.pop().expect("nonempty prefix");
        self.rows.pop();
        self.used[v] = false;
    }

    fn window(&self, p0: usize, p1: usize, v0: usize, v1: usize) -> u32 {
        if p0 >= p1 || v0 >= v1 {
            return 0;
        }
        self.rows[p1][v1] + self.rows[p0][v0] - self.rows[p0][v1] - self.rows[p1][v0]
    }

    /// Does the last prefix entry complete 21-3bar-54 (or, for biplane,
    /// 45-3bar-12)?
    fn last_completes_pattern(&self) -> bool {
        let m = self.prefix.len() - 1;
        let vm = self.prefix[m];
        let p = &self.prefix;
        for l in 2..m {
            let vl = p[l];
            for j in 1..l {
                let vj = p[j];
                for i in 0..j {
                    let vi = p[i];
                    // 21-3bar-54
                    if vj < vi && vi < vm && vm < vl && self.window(j + 1, l, vi + 1, vm) == 0 {
                        return true;
                    }
                    // 45-3bar-12: complement order, window between pi(m) and pi(i)
                    if self.class == PermClass::Biplane
                        && vj > vi
                        && vi > vm
                        && vm > vl
                        && self.window(j + 1, l, vm + 1, vi) == 0
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn run(&mut self) {
        if self.prefix.len() >= 4 && self.last_completes_pattern() {
            return;
        }
        if self.prefix.len() == self.n {
            self.found.push(Permutation { image: self.prefix.clone() });
            return;
        }
        for v in 0..self.n {
            if !self.used[v] {
                self.push(v);
                self.run();
                self.pop();
            }
        }
    }
}
