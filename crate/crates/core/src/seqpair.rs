//! Sequence pairs, their extraction from placements through constraint
//! graphs, and bad quartets.

use std::fmt;

use rand::Rng;

use crate::digraph::BitMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Placement, RelationSets, Representation, SpatialRelation};
use crate::permutation::{find_barred_pattern, Permutation};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequencePair {
    pi: Permutation,
    rho: Permutation,
}

impl SequencePair {
    pub fn new(pi: Permutation, rho: Permutation) -> Result<Self> {
        if pi.len() != rho.len() {
            return Err(Error::SizeMismatch { expected: pi.len(), found: rho.len() });
        }
        Ok(SequencePair { pi, rho })
    }

    pub fn identity(n: usize) -> Self {
        SequencePair { pi: Permutation::identity(n), rho: Permutation::identity(n) }
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn rho(&self) -> &Permutation {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// Relation of `(i, j)` for `i != j`:
    ///
    /// | pi      | rho     | relation |
    /// |---------|---------|----------|
    /// | i < j   | j < i   | west     |
    /// | i < j   | i < j   | south    |
    /// | j < i   | i < j   | east     |
    /// | j < i   | j < i   | north    |
    #[inline]
    pub fn relation(&self, i: usize, j: usize) -> SpatialRelation {
        debug_assert_ne!(i, j);
        match (self.pi.precedes(i, j), self.rho.precedes(i, j)) {
            (true, false) => SpatialRelation::West,
            (true, true) => SpatialRelation::South,
            (false, true) => SpatialRelation::East,
            (false, false) => SpatialRelation::North,
        }
    }

    pub fn relation_of(&self, i: usize, j: usize) -> Result<SpatialRelation> {
        let n = self.len();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx + 1, n });
            }
        }
        if i == j {
            return Err(Error::DiagonalPair(i + 1));
        }
        Ok(self.relation(i, j))
    }

    pub fn to_representation(&self) -> Representation {
        Representation::from_upper(self.len(), |i, j| self.relation(i, j))
    }

    /// `sigma(t)` is the rho-rank of the element at pi-rank `t`, i.e.
    /// `rho . pi^-1`. The pair has no bad quartet iff `sigma` is plane.
    pub fn relabel_to_plane_test(&self) -> Permutation {
        Permutation::compose(&self.rho, &self.pi.inverse()).expect("equal sizes")
    }

    /// Inverse of [`relabel_to_plane_test`](Self::relabel_to_plane_test) for a fixed `pi`.
    pub fn from_relabeling(pi: Permutation, sigma: &Permutation) -> Result<Self> {
        let rho = Permutation::compose(sigma, &pi)?;
        Ok(SequencePair { pi, rho })
    }

    pub fn is_bad_quartet(&self, q: BadQuartet) -> bool {
        let BadQuartet { a, b, c, d } = q;
        let (pi, rho) = (&self.pi, &self.rho);
        pi.precedes(a, b)
            && pi.precedes(b, c)
            && pi.precedes(c, d)
            && rho.precedes(b, a)
            && rho.precedes(a, d)
            && rho.precedes(d, c)
            && !(0..self.len()).any(|e| {
                pi.precedes(b, e) && pi.precedes(e, c) && rho.precedes(a, e) && rho.precedes(e, d)
            })
    }

    pub fn is_extreme(&self, q: BadQuartet) -> bool {
        self.is_bad_quartet(q)
            && self.pi.apply(q.c) == self.pi.apply(q.b) + 1
            && self.rho.apply(q.d) == self.rho.apply(q.a) + 1
    }

    /// Any bad quartet, searched in `(pi-rank, rho-rank)` space with a
    /// dominance-count table for the emptiness condition.
    pub fn find_bad_quartet(&self) -> Option<BadQuartet> {
        let sigma = self.relabel_to_plane_test();
        let order = self.pi.order();
        find_barred_pattern(sigma.image()).map(|[t1, t2, t3, t4]| BadQuartet {
            a: order[t1],
            b: order[t2],
            c: order[t3],
            d: order[t4],
        })
    }

    /// An extreme bad quartet: `b, c` adjacent in pi and `a, d` adjacent in rho.
    pub fn find_extreme_bad_quartet(&self) -> Option<BadQuartet> {
        let n = self.len();
        let pi_order = self.pi.order();
        let rho_order = self.rho.order();
        for t in 0..n.saturating_sub(1) {
            let (b, c) = (pi_order[t], pi_order[t + 1]);
            for s in 0..n - 1 {
                let (a, d) = (rho_order[s], rho_order[s + 1]);
                let q = BadQuartet { a, b, c, d };
                if self.pi.precedes(a, b)
                    && self.pi.precedes(c, d)
                    && self.rho.precedes(b, a)
                    && self.rho.precedes(d, c)
                {
                    debug_assert!(self.is_extreme(q));
                    return Some(q);
                }
            }
        }
        None
    }

    fn phi(&self, q: BadQuartet) -> usize {
        (self.pi.apply(q.c) - self.pi.apply(q.b) - 1) + (self.rho.apply(q.d) - self.rho.apply(q.a) - 1)
    }

    /// Shrinks a bad quartet to an extreme one by repeatedly replacing one
    /// member with an element inside the pi-gap of `b, c` or the rho-gap of
    /// `a, d`. Each step strictly lowers the total gap size. Returns the
    /// extreme quartet and the number of steps taken.
    pub fn reduce_to_extreme(&self, q: BadQuartet) -> Result<(BadQuartet, usize)> {
        if !self.is_bad_quartet(q) {
            return Err(Error::NotBadQuartet { a: q.a + 1, b: q.b + 1, c: q.c + 1, d: q.d + 1 });
        }
        let pi_order = self.pi.order();
        let rho_order = self.rho.order();
        let mut cur = q;
        let mut steps = 0;
        loop {
            let phi = self.phi(cur);
            let BadQuartet { a, b, c, d } = cur;
            let next = if self.pi.apply(c) > self.pi.apply(b) + 1 {
                let e = pi_order[self.pi.apply(b) + 1];
                if self.rho.precedes(e, a) {
                    BadQuartet { a, b: e, c, d }
                } else {
                    BadQuartet { a, b, c: e, d }
                }
            } else if self.rho.apply(d) > self.rho.apply(a) + 1 {
                let e = rho_order[self.rho.apply(a) + 1];
                if self.pi.precedes(c, e) {
                    BadQuartet { a, b, c, d: e }
                } else {
                    BadQuartet { a: e, b, c, d }
                }
            } else {
                return Ok((cur, steps));
            };
            assert!(self.is_bad_quartet(next), "replacement step left the bad quartets");
            assert!(self.phi(next) < phi, "replacement step did not shrink the gaps");
            cur = next;
            steps += 1;
        }
    }
}

impl fmt::Debug for SequencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.pi, self.rho)
    }
}

/// Elements `(a, b, c, d)` ordered `a b c d` in pi and `b a d c` in rho,
/// with no element between `b, c` in pi and between `a, d` in rho.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BadQuartet {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphLabel {
    G1,
    G2,
    G1Augmented,
    G2Augmented,
}

impl GraphLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphLabel::G1 => "G1",
            GraphLabel::G2 => "G2",
            GraphLabel::G1Augmented => "G1'",
            GraphLabel::G2Augmented => "G2'",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGraph {
    pub label: GraphLabel,
    arcs: BitMatrix,
}

impl ConstraintGraph {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.arcs.get(a, b)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.arcs()
    }

    pub fn is_acyclic(&self) -> bool {
        self.arcs.is_acyclic()
    }

    /// Topological order as a permutation (rank of each vertex), always
    /// taking the smallest-index source.
    pub fn topological_order(&self) -> Permutation {
        let order = self.arcs.topological_order().expect("constraint graphs are acyclic");
        Permutation::from_order(&order).expect("topological order is a permutation")
    }

    pub fn random_topological_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let order = self
            .arcs
            .random_topological_order(rng)
            .expect("constraint graphs are acyclic");
        Permutation::from_order(&order).expect("topological order is a permutation")
    }

    /// Arc list as sorted `i j` lines, 1-based.
    pub fn dump(&self) -> String {
        self.arcs().map(|(a, b)| format!("{} {}\n", a + 1, b + 1)).collect()
    }
}

fn minus<'a>(a: &'a BitMatrix, b: &'a BitMatrix) -> impl Fn(usize, usize) -> bool + 'a {
    move |i, j| a.get(i, j) && !b.get(i, j)
}

/// Builds `G1 = (S\E) u (W\N)` and `G2 = (S\W) u (E\N)`. With `augmented`,
/// `G1` also gains every `(a, b)` in `N n W` such that `a` is not reachable
/// from `b` in the unaugmented `G1` (all such arcs in one pass), and `G2`
/// likewise with `N n E`.
pub fn build_constraint_graphs(placement: &Placement, augmented: bool) -> Result<(ConstraintGraph, ConstraintGraph)> {
    placement.ensure_feasible()?;
    Ok(constraint_graphs_from_sets(&placement.relation_sets(), augmented))
}

pub fn constraint_graphs_from_sets(sets: &RelationSets, augmented: bool) -> (ConstraintGraph, ConstraintGraph) {
    let n = sets.north.len();
    let RelationSets { north, south, east, west } = sets;
    let s_not_e = minus(south, east);
    let w_not_n = minus(west, north);
    let s_not_w = minus(south, west);
    let e_not_n = minus(east, north);

    let mut g1 = BitMatrix::new(n);
    let mut g2 = BitMatrix::new(n);
    for a in 0..n {
        for b in 0..n {
            if s_not_e(a, b) || w_not_n(a, b) {
                g1.set(a, b);
            }
            if s_not_w(a, b) || e_not_n(a, b) {
                g2.set(a, b);
            }
        }
    }

    let (l1, l2) = if augmented {
        let reach1 = g1.transitive_closure();
        let reach2 = g2.transitive_closure();
        let mut add1 = Vec::new();
        let mut add2 = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if north.get(a, b) && west.get(a, b) && !reach1.get(b, a) {
                    add1.push((a, b));
                }
                if north.get(a, b) && east.get(a, b) && !reach2.get(b, a) {
                    add2.push((a, b));
                }
            }
        }
        for (a, b) in add1 {
            g1.set(a, b);
        }
        for (a, b) in add2 {
            g2.set(a, b);
        }
        (GraphLabel::G1Augmented, GraphLabel::G2Augmented)
    } else {
        (GraphLabel::G1, GraphLabel::G2)
    };

    assert!(g1.is_acyclic(), "{} has a cycle", l1.as_str());
    assert!(g2.is_acyclic(), "{} has a cycle", l2.as_str());
    (ConstraintGraph { label: l1, arcs: g1 }, ConstraintGraph { label: l2, arcs: g2 })
}

/// A sequence pair representing `placement`: topological orders of the
/// constraint graphs, augmented when `restricted` so the result has no bad
/// quartet.
pub fn extract_sequence_pair(placement: &Placement, restricted: bool) -> Result<SequencePair> {
    let (g1, g2) = build_constraint_graphs(placement, restricted)?;
    let sp = SequencePair { pi: g1.topological_order(), rho: g2.topological_order() };
    debug_assert!(sp.to_representation().represents(placement)?);
    debug_assert!(!restricted || sp.find_bad_quartet().is_none());
    Ok(sp)
}
