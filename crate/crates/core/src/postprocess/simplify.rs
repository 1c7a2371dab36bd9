use crate::geometry::{Point2, Polygon2};
use crate::{Error, Result};

/// Distance from `p` to the segment `a`-`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Douglas-Peucker on a closed ring.
///
/// The ring is cut at its first vertex and at the vertex farthest from it,
/// and each half is simplified on its own. Every dropped vertex lies within
/// `alpha` of the chord that replaced it.
pub fn simplify_ring(ring: &[Point2], alpha: f64) -> Vec<Point2> {
    let n = ring.len();
    if alpha <= 0.0 || n <= 3 {
        return ring.to_vec();
    }
    let dist = |a: Point2, b: Point2| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let far = (1..n).fold(1, |best, i| if dist(ring[i], ring[0]) > dist(ring[best], ring[0]) { i } else { best });

    let mut keep = vec![false; n];
    keep[0] = true;
    keep[far] = true;
    // Spans are index pairs where `n` stands for the first vertex again.
    let mut stack = vec![(0, far), (far, n)];
    while let Some((i, j)) = stack.pop() {
        let (a, b) = (ring[i], ring[j % n]);
        let mut worst = 0.0;
        let mut at = None;
        for (k, &p) in ring.iter().enumerate().take(j).skip(i + 1) {
            let d = point_segment_distance(p, a, b);
            if d > worst {
                worst = d;
                at = Some(k);
            }
        }
        if let Some(k) = at.filter(|_| worst > alpha) {
            keep[k] = true;
            stack.push((i, k));
            stack.push((k, j));
        }
    }
    ring.iter().zip(&keep).filter(|(_, &k)| k).map(|(&p, _)| p).collect()
}

/// Simplifies every ring of `poly`. Holes that fall below three points are
/// dropped; a shell that does is an error.
pub fn simplify(poly: &Polygon2, alpha: f64) -> Result<Polygon2> {
    let shell = simplify_ring(&poly.shell, alpha);
    if shell.len() < 3 {
        return Err(Error::DegeneratePolygon("shell simplified below three points".into()));
    }
    let holes = poly
        .holes
        .iter()
        .map(|h| simplify_ring(h, alpha))
        .filter(|h| h.len() >= 3)
        .collect();
    Ok(Polygon2 { shell, holes })
}
