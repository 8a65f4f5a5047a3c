//! Brute-force references. Nothing here shares code paths with the fast
//! routines it is used to check: no prefix counts, no transitive closures,
//! no closed-form reachability.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{int, ForcedRelationMap, Placement, Rect, SpatialRelation};
use crate::permutation::Permutation;
use crate::seqpair::{BadQuartet, SequencePair};

/// Direct scan over all `(i, j, l, m)` and all `k`.
pub fn naive_is_plane(pi: &Permutation) -> bool {
    let n = pi.len();
    let v = |x: usize| pi.apply(x);
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                for m in l + 1..n {
                    let pattern = v(j) < v(i) && v(i) < v(m) && v(m) < v(l);
                    if pattern && !(j + 1..l).any(|k| v(i) < v(k) && v(k) < v(m)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn naive_is_biplane(pi: &Permutation) -> bool {
    naive_is_plane(pi) && naive_is_plane(&pi.negate())
}

fn only_relation(p: &Placement, a: usize, b: usize) -> Option<SpatialRelation> {
    let (ra, rb) = (p.rect(a), p.rect(b));
    let holds = [
        (SpatialRelation::West, ra.xmax <= rb.xmin),
        (SpatialRelation::South, ra.ymax <= rb.ymin),
        (SpatialRelation::East, rb.xmax <= ra.xmin),
        (SpatialRelation::North, rb.ymax <= ra.ymin),
    ];
    let mut it = holds.iter().filter(|(_, h)| *h);
    match (it.next(), it.next()) {
        (Some((rel, _)), None) => Some(*rel),
        _ => None,
    }
}

/// Forced relations by breadth-first search from every rectangle in every
/// only-relation digraph.
pub fn naive_forced(p: &Placement) -> Result<ForcedRelationMap> {
    p.ensure_feasible()?;
    let n = p.len();
    let mut forced = vec![vec![None; n]; n];
    for rel in SpatialRelation::ALL {
        for src in 0..n {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([src]);
            while let Some(a) = queue.pop_front() {
                for b in 0..n {
                    if a != b && !seen[b] && only_relation(p, a, b) == Some(rel) {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
            for (dst, reached) in seen.into_iter().enumerate() {
                if reached && dst != src {
                    assert!(forced[src][dst].is_none(), "two forced relations for one pair");
                    forced[src][dst] = Some(rel);
                }
            }
        }
    }
    Ok(ForcedRelationMap::from_fn(n, |i, j| forced[i][j]))
}

/// Scan over all element quadruples and all witnesses `e`.
pub fn naive_bad_quartet(sp: &SequencePair) -> Option<BadQuartet> {
    let n = sp.len();
    let (pi, rho) = (sp.pi(), sp.rho());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let ordered = pi.precedes(a, b)
                        && pi.precedes(b, c)
                        && pi.precedes(c, d)
                        && rho.precedes(b, a)
                        && rho.precedes(a, d)
                        && rho.precedes(d, c);
                    if !ordered {
                        continue;
                    }
                    let blocked = (0..n).any(|e| {
                        pi.precedes(b, e) && pi.precedes(e, c) && rho.precedes(a, e) && rho.precedes(e, d)
                    });
                    if !blocked {
                        return Some(BadQuartet { a, b, c, d });
                    }
                }
            }
        }
    }
    None
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::new(image).expect("shuffle of 0..n")
}

pub fn random_sequence_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SequencePair {
    SequencePair::new(random_permutation(n, rng), random_permutation(n, rng)).expect("equal sizes")
}

/// A feasible placement determined by `(n, seed)`: a random sequence pair and
/// integer sizes in `[1, 8]` are packed left and down along the pair's
/// west and south constraints, with a random slack in `[0, 2]` (zero half of
/// the time) inserted in front of every rectangle on each axis.
pub fn random_feasible_placement(n: usize, seed: u64) -> Placement {
    assert!(n >= 1, "placements need at least one rectangle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    let sp = random_sequence_pair(n, &mut rng);
    let widths: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
    let heights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
    let mut slack = || if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=2) };
    let slack_x: Vec<i64> = (0..n).map(|_| slack()).collect();
    let slack_y: Vec<i64> = (0..n).map(|_| slack()).collect();

    // West and south arcs both point forward in pi-order.
    let order = sp.pi().order();
    let mut x = vec![0i64; n];
    let mut y = vec![0i64; n];
    for (t, &b) in order.iter().enumerate() {
        let mut bx = 0;
        let mut by = 0;
        for &a in &order[..t] {
            match sp.relation(a, b) {
                SpatialRelation::West => bx = bx.max(x[a] + widths[a]),
                SpatialRelation::South => by = by.max(y[a] + heights[a]),
                _ => {}
            }
        }
        x[b] = bx + slack_x[b];
        y[b] = by + slack_y[b];
    }
    let rects = (0..n)
        .map(|i| Rect::new(int(x[i]), int(y[i]), int(x[i] + widths[i]), int(y[i] + heights[i])))
        .collect();
    Placement::new(rects).expect("positive sizes")
}
