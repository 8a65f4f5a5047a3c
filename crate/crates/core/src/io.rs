//! JSON wire formats. Indices and permutation values are 1-based on the
//! wire. Rationals are written as JSON integers when integral and as
//! `"p/q"` strings otherwise; either form is accepted on input.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::evaluate::{Dimensions, Netlist};
use crate::geometry::{Placement, Rational, Rect, Representation, SpatialRelation};
use crate::permutation::Permutation;
use crate::seqpair::{BadQuartet, SequencePair};

/// Serde adapter for [`Rational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn rational_to_json(r: &Rational) -> Value {
    if r.denom().is_one() {
        if let Some(v) = r.numer().to_i64() {
            return Value::from(v);
        }
    }
    Value::from(r.to_string())
}

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        rational_to_json(&self.0).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(deserializer)? {
            Value::Number(n) => match n.as_i64() {
                Some(v) => Ok(JsonRational(Rational::from_integer(BigInt::from(v)))),
                None => Err(D::Error::custom(format!("{n} is not an integer; write fractions as \"p/q\""))),
            },
            Value::String(s) => parse_rational(&s).map(JsonRational).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected a number or \"p/q\" string, got {other}"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RectJson {
    id: usize,
    xmin: JsonRational,
    ymin: JsonRational,
    xmax: JsonRational,
    ymax: JsonRational,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementJson {
    n: usize,
    rects: Vec<RectJson>,
}

pub fn placement_to_value(p: &Placement) -> Value {
    let doc = PlacementJson {
        n: p.len(),
        rects: p
            .rects()
            .iter()
            .enumerate()
            .map(|(i, r)| RectJson {
                id: i + 1,
                xmin: JsonRational(r.xmin.clone()),
                ymin: JsonRational(r.ymin.clone()),
                xmax: JsonRational(r.xmax.clone()),
                ymax: JsonRational(r.ymax.clone()),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("placement serializes")
}

pub fn placement_from_value(v: Value) -> Result<Placement> {
    let doc: PlacementJson = serde_json::from_value(v)?;
    if doc.rects.len() != doc.n {
        return Err(Error::Format(format!("n = {} but {} rects listed", doc.n, doc.rects.len())));
    }
    let mut slots: Vec<Option<Rect>> = vec![None; doc.n];
    for r in doc.rects {
        if r.id == 0 || r.id > doc.n || slots[r.id - 1].is_some() {
            return Err(Error::Format(format!("rectangle ids must be exactly 1..={}; bad id {}", doc.n, r.id)));
        }
        slots[r.id - 1] = Some(Rect::new(r.xmin.0, r.ymin.0, r.xmax.0, r.ymax.0));
    }
    Placement::new(slots.into_iter().map(|r| r.expect("all ids seen")).collect())
}

pub fn parse_placement(s: &str) -> Result<Placement> {
    placement_from_value(serde_json::from_str(s)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    i: usize,
    j: usize,
    rel: SpatialRelation,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepresentationJson {
    n: usize,
    pairs: Vec<PairJson>,
}

/// Upper triangle only; the lower triangle follows by flipping.
pub fn representation_to_value(r: &Representation) -> Value {
    let doc = RepresentationJson {
        n: r.len(),
        pairs: r.upper().map(|(i, j, rel)| PairJson { i: i + 1, j: j + 1, rel }).collect(),
    };
    serde_json::to_value(doc).expect("representation serializes")
}

pub fn representation_from_value(v: Value) -> Result<Representation> {
    let doc: RepresentationJson = serde_json::from_value(v)?;
    let n = doc.n;
    let mut rels = vec![None; n * n];
    for p in &doc.pairs {
        if !(1 <= p.i && p.i < p.j && p.j <= n) {
            return Err(Error::Format(format!("pair ({}, {}) is not an upper-triangle pair of 1..={n}", p.i, p.j)));
        }
        let slot = &mut rels[(p.i - 1) * n + (p.j - 1)];
        if slot.replace(p.rel).is_some() {
            return Err(Error::Format(format!("pair ({}, {}) listed twice", p.i, p.j)));
        }
    }
    if doc.pairs.len() != n * n.saturating_sub(1) / 2 {
        return Err(Error::Format("representation must list every pair i < j".into()));
    }
    Ok(Representation::from_upper(n, |i, j| rels[i * n + j].expect("checked complete")))
}

pub fn parse_representation(s: &str) -> Result<Representation> {
    representation_from_value(serde_json::from_str(s)?)
}

pub fn permutation_to_value(p: &Permutation) -> Value {
    Value::from(p.to_one_based())
}

pub fn permutation_from_value(v: Value) -> Result<Permutation> {
    let image: Vec<usize> = serde_json::from_value(v)?;
    if image.is_empty() {
        return Err(Error::Format("empty permutation".into()));
    }
    Permutation::from_one_based(&image)
}

pub fn parse_permutation(s: &str) -> Result<Permutation> {
    permutation_from_value(serde_json::from_str(s)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequencePairJson {
    pi: Vec<usize>,
    rho: Vec<usize>,
}

pub fn sequence_pair_to_value(sp: &SequencePair) -> Value {
    serde_json::to_value(SequencePairJson { pi: sp.pi().to_one_based(), rho: sp.rho().to_one_based() })
        .expect("sequence pair serializes")
}

pub fn sequence_pair_from_value(v: Value) -> Result<SequencePair> {
    let doc: SequencePairJson = serde_json::from_value(v)?;
    if doc.pi.is_empty() {
        return Err(Error::Format("empty sequence pair".into()));
    }
    if doc.pi.len() != doc.rho.len() {
        return Err(Error::Format(format!("pi has {} entries, rho has {}", doc.pi.len(), doc.rho.len())));
    }
    SequencePair::new(Permutation::from_one_based(&doc.pi)?, Permutation::from_one_based(&doc.rho)?)
}

pub fn parse_sequence_pair(s: &str) -> Result<SequencePair> {
    sequence_pair_from_value(serde_json::from_str(s)?)
}

pub fn bad_quartet_to_value(q: &BadQuartet) -> Value {
    serde_json::json!({ "a": q.a + 1, "b": q.b + 1, "c": q.c + 1, "d": q.d + 1 })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionsJson {
    widths: Vec<JsonRational>,
    heights: Vec<JsonRational>,
}

pub fn dimensions_to_value(d: &Dimensions) -> Value {
    let wrap = |v: &[Rational]| v.iter().cloned().map(JsonRational).collect();
    serde_json::to_value(DimensionsJson { widths: wrap(d.widths()), heights: wrap(d.heights()) })
        .expect("dimensions serialize")
}

pub fn dimensions_from_value(v: Value) -> Result<Dimensions> {
    let doc: DimensionsJson = serde_json::from_value(v)?;
    Dimensions::new(
        doc.widths.into_iter().map(|r| r.0).collect(),
        doc.heights.into_iter().map(|r| r.0).collect(),
    )
}

pub fn parse_dimensions(s: &str) -> Result<Dimensions> {
    dimensions_from_value(serde_json::from_str(s)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetlistJson {
    nets: Vec<Vec<usize>>,
}

pub fn netlist_to_value(nets: &Netlist) -> Value {
    let nets = nets.nets().iter().map(|net| net.iter().map(|i| i + 1).collect()).collect();
    serde_json::to_value(NetlistJson { nets }).expect("netlist serializes")
}

pub fn netlist_from_value(v: Value) -> Result<Netlist> {
    let doc: NetlistJson = serde_json::from_value(v)?;
    let mut nets = Vec::with_capacity(doc.nets.len());
    for net in doc.nets {
        if net.contains(&0) {
            return Err(Error::Format("netlist indices are 1-based".into()));
        }
        let distinct: BTreeSet<usize> = net.iter().copied().collect();
        if distinct.len() != net.len() {
            return Err(Error::InvalidNetlist(format!("net {net:?} repeats a rectangle")));
        }
        nets.push(net.into_iter().map(|i| i - 1).collect());
    }
    Netlist::new(nets)
}

pub fn parse_netlist(s: &str) -> Result<Netlist> {
    netlist_from_value(serde_json::from_str(s)?)
}

/// Sidecar written next to a constructed forcing placement.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub pi: Vec<usize>,
    pub verified: bool,
}
