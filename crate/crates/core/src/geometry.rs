//! Placements of axis-aligned rectangles with exact rational coordinates.
//!
//! Rectangles are closed boxes and all separations use non-strict
//! comparisons, so rectangles sharing an edge are still disjoint for the
//! purpose of feasibility.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::digraph::BitMatrix;
use crate::error::{Error, Result};
use crate::permutation::Permutation;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialRelation {
    West,
    South,
    East,
    North,
}

impl SpatialRelation {
    pub const ALL: [SpatialRelation; 4] = [
        SpatialRelation::West,
        SpatialRelation::South,
        SpatialRelation::East,
        SpatialRelation::North,
    ];

    pub fn flip(self) -> SpatialRelation {
        match self {
            SpatialRelation::West => SpatialRelation::East,
            SpatialRelation::East => SpatialRelation::West,
            SpatialRelation::South => SpatialRelation::North,
            SpatialRelation::North => SpatialRelation::South,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SpatialRelation::West => "west",
            SpatialRelation::South => "south",
            SpatialRelation::East => "east",
            SpatialRelation::North => "north",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for SpatialRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpatialRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "west" => Ok(SpatialRelation::West),
            "south" => Ok(SpatialRelation::South),
            "east" => Ok(SpatialRelation::East),
            "north" => Ok(SpatialRelation::North),
            other => Err(Error::Format(format!("unknown spatial relation {other:?}"))),
        }
    }
}

/// A subset of the four spatial relations.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RelationSet(u8);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);

    pub fn single(rel: SpatialRelation) -> Self {
        RelationSet(rel.bit())
    }

    pub fn insert(&mut self, rel: SpatialRelation) {
        self.0 |= rel.bit();
    }

    pub fn contains(self, rel: SpatialRelation) -> bool {
        self.0 & rel.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The relation, if it is the only member.
    pub fn only(self) -> Option<SpatialRelation> {
        SpatialRelation::ALL.into_iter().find(|r| self.0 == r.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = SpatialRelation> {
        SpatialRelation::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn flip(self) -> RelationSet {
        let mut out = RelationSet::EMPTY;
        for r in self.iter() {
            out.insert(r.flip());
        }
        out
    }
}

impl FromIterator<SpatialRelation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = SpatialRelation>>(iter: I) -> Self {
        let mut s = RelationSet::EMPTY;
        for r in iter {
            s.insert(r);
        }
        s
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub xmin: Rational,
    pub ymin: Rational,
    pub xmax: Rational,
    pub ymax: Rational,
}

impl Rect {
    pub fn new(xmin: Rational, ymin: Rational, xmax: Rational, ymax: Rational) -> Self {
        Rect { xmin, ymin, xmax, ymax }
    }

    pub fn from_ints(xmin: i64, ymin: i64, xmax: i64, ymax: i64) -> Self {
        Rect::new(int(xmin), int(ymin), int(xmax), int(ymax))
    }

    pub fn width(&self) -> Rational {
        &self.xmax - &self.xmin
    }

    pub fn height(&self) -> Rational {
        &self.ymax - &self.ymin
    }

    fn is_proper(&self) -> bool {
        self.xmin < self.xmax && self.ymin < self.ymax
    }

    /// Relations of `self` with respect to `other`.
    pub fn relations_to(&self, other: &Rect) -> RelationSet {
        let mut s = RelationSet::EMPTY;
        if self.xmax <= other.xmin {
            s.insert(SpatialRelation::West);
        }
        if self.ymax <= other.ymin {
            s.insert(SpatialRelation::South);
        }
        if other.xmax <= self.xmin {
            s.insert(SpatialRelation::East);
        }
        if other.ymax <= self.ymin {
            s.insert(SpatialRelation::North);
        }
        s
    }
}

/// `n` rectangles indexed `0..n`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    rects: Vec<Rect>,
}

impl Placement {
    pub fn new(rects: Vec<Rect>) -> Result<Self> {
        if rects.is_empty() {
            return Err(Error::Format("a placement needs at least one rectangle".into()));
        }
        if let Some(i) = rects.iter().position(|r| !r.is_proper()) {
            return Err(Error::DegenerateRect(i + 1));
        }
        Ok(Placement { rects })
    }

    /// Convenience constructor from `(xmin, ymin, xmax, ymax)` tuples.
    pub fn from_ints(coords: &[(i64, i64, i64, i64)]) -> Result<Self> {
        Placement::new(
            coords
                .iter()
                .map(|&(a, b, c, d)| Rect::from_ints(a, b, c, d))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn rect(&self, i: usize) -> &Rect {
        &self.rects[i]
    }

    pub fn into_rects(self) -> Vec<Rect> {
        self.rects
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, n: self.len() })
        }
    }

    /// The relations that hold for the ordered pair `(i, j)`.
    pub fn spatial_relations(&self, i: usize, j: usize) -> Result<RelationSet> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::DiagonalPair(i + 1));
        }
        Ok(self.rects[i].relations_to(&self.rects[j]))
    }

    /// Relations for every ordered pair, computed once.
    pub fn relation_table(&self) -> RelationTable {
        let n = self.len();
        let mut sets = vec![RelationSet::EMPTY; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let s = self.rects[i].relations_to(&self.rects[j]);
                sets[i * n + j] = s;
                sets[j * n + i] = s.flip();
            }
        }
        RelationTable { n, sets }
    }

    /// First pair `i < j` (0-based) for which no relation holds.
    pub fn first_overlap(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.rects[i].relations_to(&self.rects[j]).is_empty())
    }

    pub fn is_feasible(&self) -> bool {
        self.first_overlap().is_none()
    }

    pub fn ensure_feasible(&self) -> Result<()> {
        match self.first_overlap() {
            None => Ok(()),
            Some((i, j)) => Err(Error::Infeasible(i + 1, j + 1)),
        }
    }

    pub fn relation_sets(&self) -> RelationSets {
        self.relation_table().relation_sets()
    }

    /// Forced relations: `(i, j) -> a` iff `j` is reachable from `i` through
    /// pairs whose only relation is `a`.
    pub fn forced_relations(&self) -> Result<ForcedRelationMap> {
        self.ensure_feasible()?;
        Ok(self.relation_table().forced_relations())
    }

    pub fn is_forcing(&self) -> bool {
        self.is_feasible() && self.relation_table().forced_relations().is_total()
    }

    /// Reads each pair's unique forced relation off a forcing placement.
    pub fn canonical_representation(&self) -> Result<Representation> {
        let forced = self.forced_relations()?;
        if let Some((i, j)) = forced.missing_pairs().next() {
            return Err(Error::NotForcing(i + 1, j + 1));
        }
        Ok(Representation::from_upper(self.len(), |i, j| {
            forced.get(i, j).expect("total map")
        }))
    }

    /// Relabels rectangles: rectangle `i` of the result is rectangle
    /// `perm(i)` of `self`.
    pub fn permute(&self, perm: &Permutation) -> Result<Placement> {
        if perm.len() != self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: perm.len() });
        }
        Ok(Placement {
            rects: (0..self.len()).map(|i| self.rects[perm.apply(i)].clone()).collect(),
        })
    }

    /// Exchanges the roles of the x and y coordinates.
    pub fn swap_axes(&self) -> Placement {
        Placement {
            rects: self
                .rects
                .iter()
                .map(|r| Rect::new(r.ymin.clone(), r.xmin.clone(), r.ymax.clone(), r.xmax.clone()))
                .collect(),
        }
    }
}

/// Precomputed relation sets for all ordered pairs of a placement.
#[derive(Clone, Debug)]
pub struct RelationTable {
    n: usize,
    sets: Vec<RelationSet>,
}

impl RelationTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> RelationSet {
        self.sets[i * self.n + j]
    }

    pub fn is_feasible(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || !self.get(i, j).is_empty()))
    }

    fn pairs_with(&self, rel: SpatialRelation) -> BitMatrix {
        let mut m = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.get(i, j).contains(rel) {
                    m.set(i, j);
                }
            }
        }
        m
    }

    pub fn relation_sets(&self) -> RelationSets {
        RelationSets {
            north: self.pairs_with(SpatialRelation::North),
            south: self.pairs_with(SpatialRelation::South),
            east: self.pairs_with(SpatialRelation::East),
            west: self.pairs_with(SpatialRelation::West),
        }
    }

    /// Only-relation digraph for `rel`: arc `(a, b)` iff `rel` is the sole
    /// relation of `(a, b)`.
    pub fn only_digraph(&self, rel: SpatialRelation) -> BitMatrix {
        let mut m = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.get(i, j).only() == Some(rel) {
                    m.set(i, j);
                }
            }
        }
        m
    }

    /// Forced relations; the caller must ensure feasibility.
    pub fn forced_relations(&self) -> ForcedRelationMap {
        let n = self.n;
        let mut rels = vec![None; n * n];
        for rel in SpatialRelation::ALL {
            let reach = self.only_digraph(rel).transitive_closure();
            for (i, j) in reach.arcs() {
                if i == j {
                    continue;
                }
                let slot: &mut Option<SpatialRelation> = &mut rels[i * n + j];
                assert!(
                    slot.is_none(),
                    "pair ({}, {}) has two forced relations",
                    i + 1,
                    j + 1
                );
                *slot = Some(rel);
            }
        }
        ForcedRelationMap { n, rels }
    }
}

/// The four relation sets of a placement as 0-based ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSets {
    pub north: BitMatrix,
    pub south: BitMatrix,
    pub east: BitMatrix,
    pub west: BitMatrix,
}

impl RelationSets {
    pub fn of(&self, rel: SpatialRelation) -> &BitMatrix {
        match rel {
            SpatialRelation::North => &self.north,
            SpatialRelation::South => &self.south,
            SpatialRelation::East => &self.east,
            SpatialRelation::West => &self.west,
        }
    }
}

/// An assignment of one spatial relation to every ordered pair `i != j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    n: usize,
    rels: Vec<Option<SpatialRelation>>,
}

impl Representation {
    /// Builds a flip-consistent representation from its upper triangle.
    pub fn from_upper(n: usize, mut rel: impl FnMut(usize, usize) -> SpatialRelation) -> Self {
        let mut rels = vec![None; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let r = rel(i, j);
                rels[i * n + j] = Some(r);
                rels[j * n + i] = Some(r.flip());
            }
        }
        Representation { n, rels }
    }

    /// Builds a representation pair by pair without imposing flip-consistency.
    pub fn from_ordered(n: usize, mut rel: impl FnMut(usize, usize) -> SpatialRelation) -> Self {
        let mut rels = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    rels[i * n + j] = Some(rel(i, j));
                }
            }
        }
        Representation { n, rels }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Relation of `(i, j)`. Panics on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> SpatialRelation {
        self.rels[i * self.n + j].expect("representation is undefined on the diagonal")
    }

    pub fn is_flip_consistent(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(j, i) == self.get(i, j).flip()))
    }

    /// Upper-triangle entries `(i, j, rel)` with `i < j`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, SpatialRelation)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// First ordered pair whose assigned relation does not hold in `table`.
    pub fn first_violation_in(&self, table: &RelationTable) -> Option<(usize, usize)> {
        debug_assert_eq!(self.n, table.len());
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !table.get(i, j).contains(self.get(i, j)))
    }

    pub fn first_violation(&self, placement: &Placement) -> Result<Option<(usize, usize)>> {
        if placement.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: placement.len() });
        }
        Ok(self.first_violation_in(&placement.relation_table()))
    }

    /// True iff every assigned relation holds in `placement`.
    pub fn represents(&self, placement: &Placement) -> Result<bool> {
        Ok(self.first_violation(placement)?.is_none())
    }

    pub fn represents_table(&self, table: &RelationTable) -> bool {
        self.first_violation_in(table).is_none()
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    m.entry(&(i + 1, j + 1), &self.get(i, j));
                }
            }
        }
        m.finish()
    }
}

/// Partial map from ordered pairs to their forced relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedRelationMap {
    n: usize,
    rels: Vec<Option<SpatialRelation>>,
}

impl ForcedRelationMap {
    pub fn from_fn(n: usize, mut rel: impl FnMut(usize, usize) -> Option<SpatialRelation>) -> Self {
        let mut rels = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    rels[i * n + j] = rel(i, j);
                }
            }
        }
        ForcedRelationMap { n, rels }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rels.iter().all(Option::is_none)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<SpatialRelation> {
        self.rels[i * self.n + j]
    }

    /// Ordered pairs `i != j` without a forced relation.
    pub fn missing_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .flat_map(move |i| (0..self.n).map(move |j| (i, j)))
            .filter(move |&(i, j)| i != j && self.get(i, j).is_none())
    }

    pub fn is_total(&self) -> bool {
        self.missing_pairs().next().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpatialRelation::*;

    fn fig1a() -> Placement {
        Placement::new(vec![
            Rect::new(int(1), int(1), frac(5, 2), int(3)),
            Rect::new(frac(5, 2), int(1), int(4), int(2)),
            Rect::new(int(1), int(3), frac(5, 2), int(4)),
            Rect::new(frac(5, 2), int(2), int(4), int(4)),
        ])
        .unwrap()
    }

    fn stacked() -> Placement {
        Placement::from_ints(&[(0, 0, 1, 1), (0, 1, 1, 2)]).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        assert!(fig1a().is_feasible());
        assert!(Placement::from_ints(&[(0, 0, 1, 1)]).unwrap().is_feasible());
        let same = Placement::from_ints(&[(0, 0, 1, 1), (0, 0, 1, 1)]).unwrap();
        assert!(!same.is_feasible());
        assert!(matches!(same.ensure_feasible(), Err(Error::Infeasible(1, 2))));
    }

    #[test]
    fn degenerate_rect_rejected() {
        assert!(matches!(
            Placement::from_ints(&[(0, 0, 1, 1), (2, 0, 2, 1)]),
            Err(Error::DegenerateRect(2))
        ));
    }

    #[test]
    fn spatial_relations_fig1a_pair_2_3() {
        let s = fig1a().spatial_relations(1, 2).unwrap();
        assert_eq!(s, [South, East].into_iter().collect());
    }

    #[test]
    fn spatial_relations_errors() {
        let p = fig1a();
        assert!(matches!(p.spatial_relations(2, 2), Err(Error::DiagonalPair(3))));
        assert!(matches!(p.spatial_relations(0, 4), Err(Error::IndexOutOfRange { index: 5, n: 4 })));
    }

    #[test]
    fn relation_sets_of_stacked_pair() {
        let sets = stacked().relation_sets();
        assert_eq!(sets.south.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(sets.north.arcs().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(sets.east.arc_count() + sets.west.arc_count(), 0);
        let single = Placement::from_ints(&[(0, 0, 1, 1)]).unwrap().relation_sets();
        assert_eq!(single.north.arc_count() + single.south.arc_count(), 0);
    }

    #[test]
    fn relation_set_only() {
        assert_eq!(RelationSet::single(North).only(), Some(North));
        assert_eq!([North, West].into_iter().collect::<RelationSet>().only(), None);
        assert_eq!(RelationSet::EMPTY.only(), None);
    }

    #[test]
    fn canonical_of_stacked_pair() {
        let r = stacked().canonical_representation().unwrap();
        assert_eq!(r.get(0, 1), South);
        assert_eq!(r.get(1, 0), North);
    }

    #[test]
    fn forced_of_single_rect_is_empty() {
        let f = Placement::from_ints(&[(0, 0, 1, 1)]).unwrap().forced_relations().unwrap();
        assert!(f.is_empty());
        assert!(f.is_total());
    }

    #[test]
    fn forced_relations_reject_infeasible() {
        let same = Placement::from_ints(&[(0, 0, 1, 1), (0, 0, 1, 1)]).unwrap();
        assert!(same.forced_relations().is_err());
        assert!(!same.is_forcing());
    }

    #[test]
    fn swap_axes_stacked_becomes_side_by_side() {
        let s = stacked().swap_axes();
        assert_eq!(s.spatial_relations(0, 1).unwrap(), RelationSet::single(West));
        assert_eq!(s.swap_axes(), stacked());
    }

    #[test]
    fn permute_by_identity_and_swap() {
        let p = fig1a();
        assert_eq!(p.permute(&Permutation::identity(4)).unwrap(), p);
        let swapped = p.permute(&Permutation::from_one_based(&[2, 1, 3, 4]).unwrap()).unwrap();
        assert_eq!(swapped.rect(0), p.rect(1));
        assert_eq!(swapped.rect(1), p.rect(0));
        assert!(p.permute(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn represents_size_mismatch() {
        let r = Representation::from_upper(3, |_, _| West);
        assert!(r.represents(&fig1a()).is_err());
    }

    #[test]
    fn non_flip_consistent_representation_is_accepted() {
        // Both rectangles can be read as south of each other only if they overlap,
        // so use a pair that admits west and south simultaneously.
        let p = Placement::from_ints(&[(0, 0, 1, 1), (1, 1, 2, 2)]).unwrap();
        let r = Representation::from_ordered(2, |i, _| if i == 0 { West } else { North });
        assert!(!r.is_flip_consistent());
        assert!(r.represents(&p).unwrap());
    }
}
