//! Forcing placements for biplane permutations.
//!
//! For a biplane `pi` the builder produces a placement whose canonical
//! representation is `r_pi = r_(id, pi)`: every arc of `G_pi` is an
//! only-south pair and every arc of `G_-pi` an only-west pair. Relabeling
//! that placement by any permutation yields further canonical
//! representations, which is what [`CanonicalFamily`] enumerates.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{int, Placement, Rational, Rect, Representation};
use crate::permutation::{enumerate_biplane, Permutation};
use crate::seqpair::SequencePair;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingCertificate {
    pub pi: Permutation,
    pub placement: Placement,
    pub checked: bool,
}

/// How often the builder re-verifies its invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckLevel {
    /// After every inductive step and every in-place adjustment.
    Every,
    /// Only the finished placement.
    Root,
}

/// `(i, j)` in `G_pi` must be only-south and `(i, j)` in `G_-pi` only-west.
/// Equivalent to: `placement` is forcing with canonical representation `r_pi`.
pub fn verify_forcing_for(pi: &Permutation, placement: &Placement) -> Result<bool> {
    if pi.len() != placement.len() {
        return Err(Error::SizeMismatch { expected: pi.len(), found: placement.len() });
    }
    placement.ensure_feasible()?;
    Ok(forcing_conditions_hold(pi, placement.rects()))
}

fn forcing_conditions_hold(pi: &Permutation, rects: &[Rect]) -> bool {
    use crate::geometry::{RelationSet, SpatialRelation};
    let only = |i: usize, j: usize, rel| rects[i].relations_to(&rects[j]) == RelationSet::single(rel);
    pi.digraph().arcs().all(|(i, j)| only(i, j, SpatialRelation::South))
        && pi.negate().digraph().arcs().all(|(i, j)| only(i, j, SpatialRelation::West))
}

fn check_step(pi: &Permutation, rects: &[Rect], what: &str) {
    let p = Placement::new(rects.to_vec()).expect("builder keeps rectangles proper");
    assert!(p.is_feasible(), "{what}: placement for {pi:?} became infeasible");
    assert!(forcing_conditions_hold(pi, rects), "{what}: forcing conditions fail for {pi:?}");
}

/// `r_pi` itself: the representation of the sequence pair `(id, pi)`.
pub fn target_representation(pi: &Permutation) -> Representation {
    SequencePair::new(Permutation::identity(pi.len()), pi.clone())
        .expect("equal sizes")
        .to_representation()
}

pub fn construct_forcing_placement(pi: &Permutation) -> Result<ForcingCertificate> {
    construct_forcing_placement_with(pi, CheckLevel::Every)
}

pub fn construct_forcing_placement_with(pi: &Permutation, level: CheckLevel) -> Result<ForcingCertificate> {
    if pi.is_empty() {
        return Err(Error::Format("a placement needs at least one rectangle".into()));
    }
    if !pi.is_biplane() {
        return Err(Error::NotBiplane);
    }
    let rects = build(pi, level);
    check_step(pi, &rects, "result");
    Ok(ForcingCertificate {
        pi: pi.clone(),
        placement: Placement::new(rects).expect("proper rectangles"),
        checked: true,
    })
}

/// Drops the last element and closes the gap in the values.
fn delete_last(pi: &Permutation) -> Permutation {
    let m = pi.len() - 1;
    let top = pi.apply(m);
    let image = (0..m)
        .map(|i| if pi.apply(i) < top { pi.apply(i) } else { pi.apply(i) - 1 })
        .collect();
    Permutation::new(image).expect("deleting one entry keeps a bijection")
}

fn max_of<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values.max().cloned().expect("nonempty")
}

fn min_of<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values.min().cloned().expect("nonempty")
}

fn build(pi: &Permutation, level: CheckLevel) -> Vec<Rect> {
    let n = pi.len();
    if n == 1 {
        return vec![Rect::from_ints(0, 0, 1, 1)];
    }
    let m = n - 1;
    let rects = if pi.precedes(m - 1, m) {
        let sub = delete_last(pi);
        let mut rects = build(&sub, level);
        if pi.apply(m) == m {
            // m goes north of everything, spanning the full width.
            let top = max_of(rects.iter().map(|r| &r.ymax));
            rects.push(Rect::new(
                min_of(rects.iter().map(|r| &r.xmin)),
                top.clone(),
                max_of(rects.iter().map(|r| &r.xmax)),
                top + Rational::one(),
            ));
        } else {
            extend_beside(pi, &sub, &mut rects, level);
        }
        rects
    } else {
        // m precedes m-1: build for -pi, where the order is reversed, and
        // exchange the axes.
        build(&pi.negate(), level)
            .into_iter()
            .map(|r| Rect::new(r.ymin, r.xmin, r.ymax, r.xmax))
            .collect()
    };
    if level == CheckLevel::Every {
        check_step(pi, &rects, "inductive step");
    }
    rects
}

/// The case `m-1 <pi m` with `pi(m) != m`: `m` is placed east of its unique
/// `G_-pi` predecessor `j`, level with the top of `j`, after `j` has been
/// made the tallest rectangle.
fn extend_beside(pi: &Permutation, sub: &Permutation, rects: &mut Vec<Rect>, level: CheckLevel) {
    let m = pi.len() - 1;
    let g_pos = pi.digraph();
    let g_neg = pi.negate().digraph();

    let neg_preds: Vec<usize> = g_neg.predecessors(m).collect();
    let j = *neg_preds.last().expect("m is reachable in G_-pi from the element of value n");
    assert_eq!(neg_preds, [j], "{pi:?}: {} must be the only G_-pi predecessor of {}", j + 1, m + 1);
    assert!(
        sub.digraph().successors(j).next().is_none(),
        "{pi:?}: {} has an outgoing arc in the reduced G_pi",
        j + 1
    );

    // Nothing is only-north of j, so j may grow upward until it is taller
    // than everything else by one unit.
    let others_top = max_of(rects.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, r)| &r.ymax));
    let raised = others_top + Rational::one();
    if rects[j].ymax < raised {
        rects[j].ymax = raised;
    }
    if level == CheckLevel::Every {
        check_step(sub, rects, "raising j");
    }

    let pos_preds: Vec<usize> = g_pos.predecessors(m).collect();
    let i = pos_preds[0];
    if i < j {
        assert!(
            pos_preds.iter().all(|&l| l == i || l > j),
            "{pi:?}: {} must be the only G_pi predecessor of {} below {}",
            i + 1,
            m + 1,
            j + 1
        );
        if rects[j].xmax >= rects[i].xmax {
            let left = (&rects[i].xmin).max(&rects[j].xmin).clone();
            let two = int(2);
            rects[j].xmax = (left + &rects[i].xmax) / two;
            assert!(rects[j].xmax < rects[i].xmax);
            if level == CheckLevel::Every {
                check_step(sub, rects, "narrowing j");
            }
        }
    }

    let jr = rects[j].clone();
    rects.push(Rect::new(
        jr.xmax.clone(),
        &jr.ymax - Rational::one(),
        max_of(rects.iter().map(|r| &r.xmax)),
        jr.ymax,
    ));
}

/// A denominator that is a power of two.
pub fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    !d.is_zero() && (d & (d - 1u32)).is_zero()
}

pub fn placement_is_dyadic(p: &Placement) -> bool {
    p.rects()
        .iter()
        .all(|r| [&r.xmin, &r.ymin, &r.xmax, &r.ymax].into_iter().all(is_dyadic))
}

/// `r_(pi, rho . pi)` together with a forcing placement that has it as
/// canonical representation: the placement built for `rho`, relabeled by
/// `pi`.
pub fn canonical_family_member(pi: &Permutation, rho: &Permutation) -> Result<(Representation, Placement)> {
    if pi.len() != rho.len() {
        return Err(Error::SizeMismatch { expected: rho.len(), found: pi.len() });
    }
    let cert = construct_forcing_placement(rho)?;
    member_from_base(pi, rho, &cert.placement)
}

fn member_from_base(pi: &Permutation, rho: &Permutation, base: &Placement) -> Result<(Representation, Placement)> {
    let witness = base.permute(pi)?;
    let rep = SequencePair::new(pi.clone(), Permutation::compose(rho, pi)?)?.to_representation();
    let canonical = witness.canonical_representation()?;
    assert_eq!(canonical, rep, "relabeled witness has the wrong canonical representation");
    Ok((rep, witness))
}

/// All `r_(pi, rho . pi)` for `pi` any permutation and `rho` biplane, in
/// the order (rho lexicographic, then pi lexicographic).
pub struct CanonicalFamily {
    pub n: usize,
    pub members: Vec<(Permutation, Permutation, Representation)>,
}

impl CanonicalFamily {
    pub fn generate(n: usize) -> Result<Self> {
        let perms = all_permutations(n);
        let bases: Vec<(Permutation, Placement)> = enumerate_biplane(n)
            .into_par_iter()
            .map(|rho| {
                let cert = construct_forcing_placement_with(&rho, CheckLevel::Root)?;
                Ok((rho, cert.placement))
            })
            .collect::<Result<_>>()?;
        let members = bases
            .par_iter()
            .map(|(rho, base)| {
                perms
                    .iter()
                    .map(|pi| member_from_base(pi, rho, base).map(|(r, _)| (pi.clone(), rho.clone(), r)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(CanonicalFamily { n, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn distinct_count(&self) -> usize {
        self.members
            .iter()
            .map(|(_, _, r)| r)
            .collect::<std::collections::HashSet<_>>()
            .len()
    }
}

/// Every permutation of `[n]`, lexicographic by image.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    use itertools::Itertools;
    (0..n)
        .permutations(n)
        .map(|image| Permutation::new(image).expect("permutation of 0..n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{frac, SpatialRelation};

    fn p(image: &[usize]) -> Permutation {
        Permutation::from_one_based(image).unwrap()
    }

    #[test]
    fn verify_trivial_cases() {
        let unit = Placement::from_ints(&[(0, 0, 1, 1)]).unwrap();
        assert!(verify_forcing_for(&Permutation::identity(1), &unit).unwrap());
        let stacked = Placement::from_ints(&[(0, 0, 1, 1), (0, 1, 1, 2)]).unwrap();
        assert!(verify_forcing_for(&Permutation::identity(2), &stacked).unwrap());
        assert!(!verify_forcing_for(&p(&[2, 1]), &stacked).unwrap());
        assert!(verify_forcing_for(&Permutation::identity(3), &stacked).is_err());
    }

    #[test]
    fn base_case_is_unit_square() {
        let cert = construct_forcing_placement(&Permutation::identity(1)).unwrap();
        assert_eq!(cert.placement, Placement::from_ints(&[(0, 0, 1, 1)]).unwrap());
    }

    #[test]
    fn identity_of_two_stacks() {
        let cert = construct_forcing_placement(&p(&[1, 2])).unwrap();
        assert_eq!(cert.placement, Placement::from_ints(&[(0, 0, 1, 1), (0, 1, 1, 2)]).unwrap());
        let r = cert.placement.canonical_representation().unwrap();
        assert_eq!(r.get(0, 1), SpatialRelation::South);
    }

    #[test]
    fn reversal_of_two_goes_side_by_side() {
        let cert = construct_forcing_placement(&p(&[2, 1])).unwrap();
        assert_eq!(cert.placement, Placement::from_ints(&[(0, 0, 1, 1), (1, 0, 2, 1)]).unwrap());
        assert_eq!(cert.placement.canonical_representation().unwrap(), target_representation(&p(&[2, 1])));
    }

    #[test]
    fn rejects_non_biplane() {
        assert!(matches!(construct_forcing_placement(&p(&[3, 4, 1, 2])), Err(Error::NotBiplane)));
        assert!(matches!(construct_forcing_placement(&p(&[2, 1, 4, 3])), Err(Error::NotBiplane)));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&frac(3, 8)));
        assert!(is_dyadic(&int(5)));
        assert!(!is_dyadic(&frac(1, 3)));
    }

    #[test]
    fn family_member_for_identity_relabeling() {
        let rho = p(&[2, 3, 1]);
        let (rep, witness) = canonical_family_member(&Permutation::identity(3), &rho).unwrap();
        assert_eq!(rep, target_representation(&rho));
        assert_eq!(witness, construct_forcing_placement(&rho).unwrap().placement);
        assert!(canonical_family_member(&Permutation::identity(4), &p(&[3, 4, 1, 2])).is_err());
    }
}
