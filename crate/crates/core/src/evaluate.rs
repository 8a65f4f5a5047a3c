//! Packing a sequence pair into its minimal placement, objectives over
//! placements, and exhaustive optimization over full or restricted sets of
//! sequence pairs.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forcing::all_permutations;
use crate::geometry::{int, Placement, Rational, Rect, SpatialRelation};
use crate::permutation::{enumerate_plane, Permutation};
use crate::seqpair::SequencePair;

pub const DEFAULT_SEARCH_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimensions {
    widths: Vec<Rational>,
    heights: Vec<Rational>,
}

impl Dimensions {
    pub fn new(widths: Vec<Rational>, heights: Vec<Rational>) -> Result<Self> {
        if widths.len() != heights.len() {
            return Err(Error::InvalidDimensions(format!(
                "{} widths but {} heights",
                widths.len(),
                heights.len()
            )));
        }
        if widths.is_empty() {
            return Err(Error::InvalidDimensions("no rectangles".into()));
        }
        if let Some(i) = widths.iter().chain(&heights).position(|v| !v.is_positive()) {
            return Err(Error::InvalidDimensions(format!(
                "entry {} is not strictly positive",
                i % widths.len() + 1
            )));
        }
        Ok(Dimensions { widths, heights })
    }

    pub fn from_ints(widths: &[i64], heights: &[i64]) -> Result<Self> {
        Dimensions::new(widths.iter().map(|&w| int(w)).collect(), heights.iter().map(|&h| int(h)).collect())
    }

    /// Sizes of the rectangles of an existing placement.
    pub fn of_placement(p: &Placement) -> Self {
        Dimensions {
            widths: p.rects().iter().map(Rect::width).collect(),
            heights: p.rects().iter().map(Rect::height).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    pub fn widths(&self) -> &[Rational] {
        &self.widths
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Netlist {
    nets: Vec<Vec<usize>>,
}

impl Netlist {
    /// Nets of 0-based rectangle indices, each with at least two members.
    pub fn new(nets: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(k) = nets.iter().position(|net| net.len() < 2) {
            return Err(Error::InvalidNetlist(format!("net {} has fewer than two pins", k + 1)));
        }
        Ok(Netlist { nets })
    }

    pub fn empty() -> Self {
        Netlist::default()
    }

    pub fn nets(&self) -> &[Vec<usize>] {
        &self.nets
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.nets.iter().flatten().find(|&&i| i >= n) {
            Some(&i) => Err(Error::IndexOutOfRange { index: i + 1, n }),
            None => Ok(()),
        }
    }
}

/// Lower-left packing: `x_min(b)` is the longest width-weighted path into
/// `b` over west pairs, `y_min(b)` the longest height-weighted path over
/// south pairs.
pub fn compact(sp: &SequencePair, dims: &Dimensions) -> Result<Placement> {
    let n = sp.len();
    if dims.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: dims.len() });
    }
    let order = sp.pi().order();
    let mut x: Vec<Rational> = vec![Rational::zero(); n];
    let mut y: Vec<Rational> = vec![Rational::zero(); n];
    for (t, &b) in order.iter().enumerate() {
        // West and south predecessors of b both come earlier in pi.
        for &a in &order[..t] {
            match sp.relation(a, b) {
                SpatialRelation::West => {
                    let reach = &x[a] + &dims.widths[a];
                    if reach > x[b] {
                        x[b] = reach;
                    }
                }
                SpatialRelation::South => {
                    let reach = &y[a] + &dims.heights[a];
                    if reach > y[b] {
                        y[b] = reach;
                    }
                }
                _ => {}
            }
        }
    }
    let rects = x
        .into_iter()
        .zip(y)
        .enumerate()
        .map(|(i, (x0, y0))| {
            let x1 = &x0 + &dims.widths[i];
            let y1 = &y0 + &dims.heights[i];
            Rect::new(x0, y0, x1, y1)
        })
        .collect();
    Placement::new(rects)
}

pub fn bounding_box(p: &Placement) -> (Rational, Rational) {
    let rs = p.rects();
    let span = |lo: fn(&Rect) -> &Rational, hi: fn(&Rect) -> &Rational| {
        let min = rs.iter().map(lo).min().expect("nonempty");
        let max = rs.iter().map(hi).max().expect("nonempty");
        max - min
    };
    (span(|r| &r.xmin, |r| &r.xmax), span(|r| &r.ymin, |r| &r.ymax))
}

/// Sum over nets of the half perimeter of the box around the member centers.
pub fn hpwl(p: &Placement, nets: &Netlist) -> Result<Rational> {
    nets.check_range(p.len())?;
    let two = int(2);
    let cx: Vec<Rational> = p.rects().iter().map(|r| (&r.xmin + &r.xmax) / &two).collect();
    let cy: Vec<Rational> = p.rects().iter().map(|r| (&r.ymin + &r.ymax) / &two).collect();
    let spread = |c: &[Rational], net: &[usize]| {
        let max = net.iter().map(|&i| &c[i]).max().expect("net has pins");
        let min = net.iter().map(|&i| &c[i]).min().expect("net has pins");
        max - min
    };
    Ok(nets
        .nets
        .iter()
        .map(|net| spread(&cx, net) + spread(&cy, net))
        .fold(Rational::zero(), |acc, v| acc + v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Area,
    Hpwl,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Area => "area",
            Objective::Hpwl => "hpwl",
        }
    }

    pub fn evaluate(self, p: &Placement, nets: &Netlist) -> Result<Rational> {
        match self {
            Objective::Area => {
                let (w, h) = bounding_box(p);
                Ok(w * h)
            }
            Objective::Hpwl => hpwl(p, nets),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "area" => Ok(Objective::Area),
            "hpwl" => Ok(Objective::Hpwl),
            other => Err(Error::Format(format!("unknown objective {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub sequence_pair: SequencePair,
    pub placement: Placement,
    /// Number of sequence pairs evaluated.
    pub candidates: usize,
}

pub fn exhaustive_optimum(dims: &Dimensions, nets: &Netlist, objective: Objective, restricted: bool) -> Result<Optimum> {
    exhaustive_optimum_limited(dims, nets, objective, restricted, DEFAULT_SEARCH_LIMIT)
}

/// Minimizes `objective(compact(sp, dims))` over all `(n!)^2` sequence pairs,
/// or with `restricted` over those without a bad quartet, generated as
/// `(pi, sigma . pi)` for plane `sigma`. Ties go to the lexicographically
/// smallest `(pi, rho)`.
pub fn exhaustive_optimum_limited(
    dims: &Dimensions,
    nets: &Netlist,
    objective: Objective,
    restricted: bool,
    limit: usize,
) -> Result<Optimum> {
    let n = dims.len();
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    nets.check_range(n)?;
    let perms = all_permutations(n);
    let seconds: Vec<Permutation> = if restricted { enumerate_plane(n) } else { perms.clone() };

    let best = perms
        .par_iter()
        .map(|pi| -> Result<Option<(Rational, SequencePair)>> {
            let mut best: Option<(Rational, SequencePair)> = None;
            for second in &seconds {
                let sp = if restricted {
                    SequencePair::from_relabeling(pi.clone(), second)?
                } else {
                    SequencePair::new(pi.clone(), second.clone())?
                };
                let value = objective.evaluate(&compact(&sp, dims)?, nets)?;
                let better = match &best {
                    None => true,
                    Some((bv, bsp)) => (&value, &sp) < (bv, bsp),
                };
                if better {
                    best = Some((value, sp));
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min()
        .expect("at least one sequence pair");

    let (value, sequence_pair) = best;
    let placement = compact(&sequence_pair, dims)?;
    Ok(Optimum { value, sequence_pair, placement, candidates: perms.len() * seconds.len() })
}
