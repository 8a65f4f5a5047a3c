//! SVG drawings: placements as labeled boxes, permutations as the natural
//! embedding of `G_pi` (vertex `i` at `(i, pi(i))`, straight arcs).

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::evaluate::bounding_box;
use crate::geometry::{Placement, Rational};
use crate::permutation::Permutation;

const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;

fn f(r: &Rational) -> f64 {
    r.to_f64().expect("finite coordinate")
}

pub fn placement_svg(p: &Placement) -> String {
    let x0 = p.rects().iter().map(|r| &r.xmin).min().expect("nonempty");
    let y0 = p.rects().iter().map(|r| &r.ymin).min().expect("nonempty");
    let (w, h) = bounding_box(p);
    let (w, h) = (f(&w) * SCALE + 2.0 * MARGIN, f(&h) * SCALE + 2.0 * MARGIN);
    let top = f(y0) * SCALE;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    for (i, r) in p.rects().iter().enumerate() {
        let x = MARGIN + (f(&r.xmin) - f(x0)) * SCALE;
        // SVG y grows downward.
        let y = h - MARGIN - (f(&r.ymax) * SCALE - top);
        let rw = f(&r.width()) * SCALE;
        let rh = f(&r.height()) * SCALE;
        writeln!(
            svg,
            r##"  <rect x="{x:.2}" y="{y:.2}" width="{rw:.2}" height="{rh:.2}" fill="#e0e0e0" stroke="black"/>"##
        )
        .unwrap();
        writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle" dominant-baseline="central" font-size="14">{}</text>"#,
            x + rw / 2.0,
            y + rh / 2.0,
            i + 1
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn embedding_svg(pi: &Permutation) -> String {
    let n = pi.len() as f64;
    let size = n * SCALE + 2.0 * MARGIN;
    let pos = |i: usize| {
        let x = MARGIN + (i as f64 + 0.5) * SCALE;
        let y = size - MARGIN - (pi.apply(i) as f64 + 0.5) * SCALE;
        (x, y)
    };
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.2}" height="{size:.2}" viewBox="0 0 {size:.2} {size:.2}">"#
    )
    .unwrap();
    svg.push_str(concat!(
        "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"16\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n"
    ));
    for (i, j) in pi.digraph().arcs() {
        let (x1, y1) = pos(i);
        let (x2, y2) = pos(j);
        writeln!(
            svg,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="2" marker-end="url(#arrow)"/>"#
        )
        .unwrap();
    }
    for i in 0..pi.len() {
        let (x, y) = pos(i);
        writeln!(svg, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="10" fill="white" stroke="black"/>"#).unwrap();
        writeln!(
            svg,
            r#"  <text x="{x:.2}" y="{y:.2}" text-anchor="middle" dominant-baseline="central" font-size="12">{}</text>"#,
            i + 1
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placement_drawing_has_one_box_per_rect() {
        let p = Placement::from_ints(&[(0, 0, 1, 1), (0, 1, 1, 2), (1, 0, 3, 2)]).unwrap();
        let svg = placement_svg(&p);
        assert_eq!(svg.matches("<rect").count(), 3);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn embedding_draws_digraph_arcs() {
        let pi = Permutation::from_one_based(&[2, 5, 7, 6, 1, 3, 8, 4]).unwrap();
        let svg = embedding_svg(&pi);
        assert_eq!(svg.matches("<line").count(), 9);
        assert_eq!(svg.matches("<circle").count(), 8);
    }
}
