use std::f64::consts::PI;

use super::overlay::union_positive;
use crate::geometry::{signed_area, Point2, Polygon2};

/// Arc segments per quarter turn of a round join.
pub const ARC_SEGMENTS_PER_QUADRANT: usize = 8;

/// Drops consecutive repeats, including a closing repeat of the first point.
fn dedup_ring(ring: &[Point2]) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(ring.len());
    for &p in ring {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn oriented(ring: &[Point2], ccw: bool) -> Vec<Point2> {
    let mut r = dedup_ring(ring);
    if (signed_area(&r) > 0.0) != ccw {
        r.reverse();
    }
    r
}

/// Raw offset curve of a ring whose interior lies on its left.
///
/// Edges move `d` to the right. Where the offset opens a gap the corner is
/// filled with a round arc; elsewhere the two offset edges are joined
/// through the original vertex, which leaves loops of non-positive winding
/// for the union to discard.
pub fn offset_ring(ring: &[Point2], d: f64) -> Vec<Point2> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n * 3);
    let step = PI / (2 * ARC_SEGMENTS_PER_QUADRANT) as f64;
    let normal = |a: Point2, b: Point2| {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        [dy / len, -dx / len]
    };
    for i in 0..n {
        let (p, v, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
        let (e1, e2) = ([v[0] - p[0], v[1] - p[1]], [q[0] - v[0], q[1] - v[1]]);
        let (n1, n2) = (normal(p, v), normal(v, q));
        let cross = e1[0] * e2[1] - e1[1] * e2[0];
        let dot = e1[0] * e2[0] + e1[1] * e2[1];
        let mut turn = cross.atan2(dot);
        if cross == 0.0 && dot < 0.0 {
            // A full reversal is capped around the outside.
            turn = PI.copysign(d);
        }
        let at = |nx: f64, ny: f64| [v[0] + d * nx, v[1] + d * ny];
        if turn * d > 0.0 {
            let k = (turn.abs() / step - 1e-9).ceil().max(1.0) as usize;
            for s in 0..=k {
                let (sin, cos) = (turn * s as f64 / k as f64).sin_cos();
                out.push(at(n1[0] * cos - n1[1] * sin, n1[0] * sin + n1[1] * cos));
            }
        } else if turn == 0.0 {
            out.push(at(n1[0], n1[1]));
        } else {
            out.push(at(n1[0], n1[1]));
            out.push(v);
            out.push(at(n2[0], n2[1]));
        }
    }
    out
}

/// Minkowski sum (`distance > 0`) or difference (`distance < 0`) of `poly`
/// with a disk, arcs approximated by inscribed chords.
///
/// Positive distances may close holes and merge lobes; negative ones may
/// split the polygon or remove it. Output rings are simple with shells
/// counterclockwise and holes clockwise. A zero distance returns the input.
pub fn buffer(poly: &Polygon2, distance: f64) -> Vec<Polygon2> {
    if distance == 0.0 {
        return vec![poly.clone()];
    }
    let shell = oriented(&poly.shell, true);
    if shell.len() < 3 {
        return Vec::new();
    }
    let mut rings = vec![offset_ring(&shell, distance)];
    for h in &poly.holes {
        let h = oriented(h, false);
        if h.len() >= 3 {
            rings.push(offset_ring(&h, distance));
        }
    }
    union_positive(&rings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polygon2 {
        Polygon2::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], vec![])
    }

    #[test]
    fn square_dilation_matches_inscribed_arcs() {
        let out = buffer(&unit_square(), 0.5);
        assert_eq!(out.len(), 1);
        // Four quarter arcs of eight chords each.
        let arcs = 4.0 * 8.0 * 0.5 * 0.25 * (PI / 16.0).sin();
        let expect = 1.0 + 4.0 * 0.5 + arcs;
        assert!((out[0].area() - expect).abs() < 1e-8, "{}", out[0].area());
        assert!(out[0].area() < 1.0 + 2.0 + PI * 0.25);
        assert_eq!(out[0].shell.len(), 4 * 9);
    }

    #[test]
    fn over_erosion_leaves_nothing() {
        assert!(buffer(&unit_square(), -0.6).is_empty());
    }

    #[test]
    fn erosion_shrinks_exactly() {
        let out = buffer(&unit_square(), -0.25);
        assert_eq!(out.len(), 1);
        assert!((out[0].area() - 0.25).abs() < 1e-8);
        assert_eq!(out[0].shell.len(), 4);
    }

    #[test]
    fn narrow_hole_fills_and_stays_filled() {
        let shell = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let hole = vec![[0.5, 0.95], [1.5, 0.95], [1.5, 1.05], [0.5, 1.05]];
        let poly = Polygon2::new(shell, vec![hole]);
        let grown = buffer(&poly, 0.06);
        assert_eq!(grown.len(), 1);
        assert!(grown[0].holes.is_empty());
        let back = buffer(&grown[0], -0.06);
        assert_eq!(back.len(), 1);
        assert!(back[0].holes.is_empty());
        // Chords sit inside the true arcs, so the corners come back clipped
        // by about the chord sag.
        assert!((back[0].area() - 4.0).abs() < 1e-5, "{}", back[0].area());
    }

    #[test]
    fn erosion_splits_a_dumbbell() {
        let shell = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 0.45],
            [2.0, 0.45],
            [2.0, 0.0],
            [3.0, 0.0],
            [3.0, 1.0],
            [2.0, 1.0],
            [2.0, 0.55],
            [1.0, 0.55],
            [1.0, 1.0],
            [0.0, 1.0],
        ];
        let out = buffer(&Polygon2::new(shell, vec![]), -0.1);
        assert_eq!(out.len(), 2, "{out:?}");
        for p in &out {
            // Each lobe is the inset square plus a sliver at the neck corners.
            assert!(p.area() > 0.64 && p.area() < 0.645, "{}", p.area());
        }
    }

    #[test]
    fn clockwise_input_is_treated_as_a_shell() {
        let mut cw = unit_square();
        cw.shell.reverse();
        let out = buffer(&cw, 0.5);
        assert_eq!(out.len(), 1);
        assert!((out[0].area() - buffer(&unit_square(), 0.5)[0].area()).abs() < 1e-12);
    }
}
