//! Union of closed rings under the positive winding rule.
//!
//! Coordinates are snapped to a fixed grid and all predicates run exactly on
//! the grid integers. Edges are split at every crossing, each edge learns the
//! winding numbers on both of its sides, and the edges separating positive
//! from non-positive winding are linked into rings.

use std::collections::{BTreeMap, HashMap};

use crate::geometry::{point_in_ring, signed_area, Point2, Polygon2};

/// Grid spacing of the snapped coordinates, in input units.
pub const SNAP: f64 = 1e-9;

/// Splitting passes before giving up on newly created crossings.
const MAX_PASSES: usize = 16;

type P = (i64, i64);

fn snap(p: Point2) -> P {
    ((p[0] / SNAP).round() as i64, (p[1] / SNAP).round() as i64)
}

fn unsnap(p: P) -> Point2 {
    [p.0 as f64 * SNAP, p.1 as f64 * SNAP]
}

/// Twice the signed area of `a, b, c`; positive when counterclockwise.
fn orient(a: P, b: P, c: P) -> i128 {
    let (abx, aby) = ((b.0 - a.0) as i128, (b.1 - a.1) as i128);
    let (acx, acy) = ((c.0 - a.0) as i128, (c.1 - a.1) as i128);
    abx * acy - aby * acx
}

/// `p` is collinear with `a`-`b` and strictly between the endpoints.
fn strictly_inside(p: P, a: P, b: P) -> bool {
    p != a && p != b && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: P,
    b: P,
}

impl Seg {
    fn min_x(&self) -> i64 {
        self.a.0.min(self.b.0)
    }
    fn max_x(&self) -> i64 {
        self.a.0.max(self.b.0)
    }
}

/// Records where `s` and `t` need to be cut so that they only meet at
/// shared endpoints.
fn cut_points(s: Seg, t: Seg, at_s: &mut Vec<P>, at_t: &mut Vec<P>) {
    if s.a.1.min(s.b.1) > t.a.1.max(t.b.1) || t.a.1.min(t.b.1) > s.a.1.max(s.b.1) {
        return;
    }
    let d1 = orient(t.a, t.b, s.a).signum();
    let d2 = orient(t.a, t.b, s.b).signum();
    let d3 = orient(s.a, s.b, t.a).signum();
    let d4 = orient(s.a, s.b, t.b).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        let (o1, o2) = (orient(t.a, t.b, s.a) as f64, orient(t.a, t.b, s.b) as f64);
        let u = o1 / (o1 - o2);
        let x = s.a.0 as f64 + u * (s.b.0 - s.a.0) as f64;
        let y = s.a.1 as f64 + u * (s.b.1 - s.a.1) as f64;
        let p = (x.round() as i64, y.round() as i64);
        at_s.push(p);
        at_t.push(p);
        return;
    }
    if d1 == 0 && strictly_inside(s.a, t.a, t.b) {
        at_t.push(s.a);
    }
    if d2 == 0 && strictly_inside(s.b, t.a, t.b) {
        at_t.push(s.b);
    }
    if d3 == 0 && strictly_inside(t.a, s.a, s.b) {
        at_s.push(t.a);
    }
    if d4 == 0 && strictly_inside(t.b, s.a, s.b) {
        at_s.push(t.b);
    }
}

/// One splitting pass. Returns `None` once no segment needs cutting.
fn split_pass(segs: &[Seg]) -> Option<Vec<Seg>> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by_key(|&i| segs[i].min_x());
    let mut cuts: Vec<Vec<P>> = vec![Vec::new(); segs.len()];
    for (oi, &i) in order.iter().enumerate() {
        let s = segs[i];
        for &j in &order[oi + 1..] {
            let t = segs[j];
            if t.min_x() > s.max_x() {
                break;
            }
            let (mut at_s, mut at_t) = (Vec::new(), Vec::new());
            cut_points(s, t, &mut at_s, &mut at_t);
            cuts[i].extend(at_s);
            cuts[j].extend(at_t);
        }
    }
    if cuts.iter().all(Vec::is_empty) {
        return None;
    }
    let mut out = Vec::with_capacity(segs.len() * 2);
    for (s, mut at) in segs.iter().zip(cuts) {
        let along = |p: &P| ((p.0 - s.a.0) as i128).abs() + ((p.1 - s.a.1) as i128).abs();
        at.sort_by_key(along);
        let mut prev = s.a;
        for p in at.into_iter().chain(std::iter::once(s.b)) {
            if p != prev {
                out.push(Seg { a: prev, b: p });
                prev = p;
            }
        }
    }
    Some(out)
}

/// Buckets edges by the horizontal slab they span so a horizontal ray only
/// tests the edges that can reach its height.
struct SlabIndex {
    lo: i64,
    width: i64,
    slabs: Vec<Vec<usize>>,
}

impl SlabIndex {
    fn new(edges: &[(P, P, i64)]) -> Self {
        let lo = edges.iter().map(|e| e.0 .1.min(e.1 .1)).min().unwrap_or(0);
        let hi = edges.iter().map(|e| e.0 .1.max(e.1 .1)).max().unwrap_or(0);
        let count = ((edges.len() as f64).sqrt().ceil() as i64).max(1);
        let width = ((hi - lo) / count + 1).max(1);
        let mut slabs = vec![Vec::new(); count as usize + 1];
        for (i, e) in edges.iter().enumerate() {
            let (y0, y1) = (e.0 .1.min(e.1 .1), e.0 .1.max(e.1 .1));
            for s in ((y0 - lo) / width)..=((y1 - lo) / width) {
                slabs[s as usize].push(i);
            }
        }
        SlabIndex { lo, width, slabs }
    }

    /// Edges whose y-range may contain the doubled height `y2 / 2`.
    fn candidates(&self, y2: i128) -> &[usize] {
        let y = (y2.div_euclid(2)) as i64;
        let s = (y - self.lo).div_euclid(self.width);
        if s < 0 || s as usize >= self.slabs.len() {
            return &[];
        }
        &self.slabs[s as usize]
    }
}

/// Winding number, ignoring edge `skip`, of the midpoint of edge `skip`,
/// using a ray towards +x. Coordinates are doubled to keep the midpoint on
/// the integer grid.
fn winding_right_of(edges: &[(P, P, i64)], index: &SlabIndex, skip: usize) -> i64 {
    let (a, b, _) = edges[skip];
    let m = ((a.0 + b.0) as i128, (a.1 + b.1) as i128);
    let mut w = 0;
    for &j in index.candidates(m.1) {
        if j == skip {
            continue;
        }
        let (p, q, k) = edges[j];
        let (px, py, qx, qy) = (2 * p.0 as i128, 2 * p.1 as i128, 2 * q.0 as i128, 2 * q.1 as i128);
        let side = (qx - px) * (m.1 - py) - (qy - py) * (m.0 - px);
        if py <= m.1 && qy > m.1 && side > 0 {
            w += k;
        } else if qy <= m.1 && py > m.1 && side < 0 {
            w -= k;
        }
    }
    w
}

/// Splits a closed walk at repeated vertices into simple loops.
fn simple_loops(walk: &[P]) -> Vec<Vec<P>> {
    let mut loops = Vec::new();
    let mut stack: Vec<P> = Vec::new();
    let mut at: HashMap<P, usize> = HashMap::new();
    for &p in walk {
        if let Some(&i) = at.get(&p) {
            let lp: Vec<P> = stack.drain(i..).collect();
            for q in &lp {
                at.remove(q);
            }
            loops.push(lp);
        }
        at.insert(p, stack.len());
        stack.push(p);
    }
    if !stack.is_empty() {
        loops.push(stack);
    }
    loops
}

/// Region covered with positive winding by the given closed rings, as
/// polygons with simple, non-crossing rings. Shells come out
/// counterclockwise and holes clockwise.
pub fn union_positive(rings: &[Vec<Point2>]) -> Vec<Polygon2> {
    let mut segs = Vec::new();
    for ring in rings {
        let pts: Vec<P> = ring.iter().map(|&p| snap(p)).collect();
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            if a != b {
                segs.push(Seg { a, b });
            }
        }
    }
    for _ in 0..MAX_PASSES {
        match split_pass(&segs) {
            Some(next) => segs = next,
            None => break,
        }
    }

    // Net multiplicity of every undirected edge, stored low to high.
    let mut net: BTreeMap<(P, P), i64> = BTreeMap::new();
    for s in &segs {
        if s.a < s.b {
            *net.entry((s.a, s.b)).or_default() += 1;
        } else {
            *net.entry((s.b, s.a)).or_default() -= 1;
        }
    }
    let edges: Vec<(P, P, i64)> = net.into_iter().filter(|e| e.1 != 0).map(|((a, b), k)| (a, b, k)).collect();

    // Steep edges are probed with a horizontal ray, flat ones in a frame
    // turned a quarter clockwise so the ray runs along +y.
    let turned: Vec<(P, P, i64)> = edges.iter().map(|&(a, b, k)| ((a.1, -a.0), (b.1, -b.0), k)).collect();
    let (straight_index, turned_index) = (SlabIndex::new(&edges), SlabIndex::new(&turned));

    let mut boundary: Vec<(P, P)> = Vec::new();
    for (i, &(a, b, k)) in edges.iter().enumerate() {
        let steep = (b.1 - a.1).abs() >= (b.0 - a.0).abs();
        let (frame, index) = if steep { (&edges, &straight_index) } else { (&turned, &turned_index) };
        let w = winding_right_of(frame, index, i);
        let (fa, fb, _) = frame[i];
        // The ray side is the right of a->b when the edge runs upward.
        let (left, right) = if fb.1 > fa.1 { (w + k, w) } else { (w, w - k) };
        match (left > 0, right > 0) {
            (true, false) => boundary.push((a, b)),
            (false, true) => boundary.push((b, a)),
            _ => {}
        }
    }
    boundary.sort();

    // Trace the filled face on the left: at each vertex take the outgoing
    // edge reached first when sweeping clockwise from the reversed incoming
    // direction.
    let mut outgoing: HashMap<P, Vec<usize>> = HashMap::new();
    for (i, e) in boundary.iter().enumerate() {
        outgoing.entry(e.0).or_default().push(i);
    }
    let next: Vec<usize> = boundary
        .iter()
        .map(|&(a, b)| {
            let back = ((a.0 - b.0) as f64, (a.1 - b.1) as f64);
            let cw_angle = |j: usize| {
                let c = boundary[j].1;
                let o = ((c.0 - b.0) as f64, (c.1 - b.1) as f64);
                let ang = (o.0 * back.1 - o.1 * back.0).atan2(o.0 * back.0 + o.1 * back.1);
                if ang <= 0.0 {
                    ang + std::f64::consts::TAU
                } else {
                    ang
                }
            };
            outgoing[&b]
                .iter()
                .copied()
                .min_by(|&x, &y| cw_angle(x).total_cmp(&cw_angle(y)))
                .expect("boundary edges are balanced at every vertex")
        })
        .collect();

    let mut used = vec![false; boundary.len()];
    let mut shells: Vec<Vec<P>> = Vec::new();
    let mut holes: Vec<Vec<P>> = Vec::new();
    for start in 0..boundary.len() {
        if used[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut e = start;
        while !used[e] {
            used[e] = true;
            walk.push(boundary[e].0);
            e = next[e];
        }
        for lp in simple_loops(&walk) {
            if lp.len() < 3 {
                continue;
            }
            let twice: i128 = (0..lp.len())
                .map(|i| {
                    let (p, q) = (lp[i], lp[(i + 1) % lp.len()]);
                    p.0 as i128 * q.1 as i128 - q.0 as i128 * p.1 as i128
                })
                .sum();
            match twice.signum() {
                1 => shells.push(lp),
                -1 => holes.push(lp),
                _ => {}
            }
        }
    }

    let to_f = |r: &Vec<P>| -> Vec<Point2> { r.iter().map(|&p| unsnap(p)).collect() };
    let mut out: Vec<Polygon2> = shells.iter().map(|s| Polygon2::new(to_f(s), Vec::new())).collect();
    let areas: Vec<f64> = out.iter().map(|p| signed_area(&p.shell)).collect();
    for h in &holes {
        // The midpoint of a hole edge is never on another ring.
        let (p, q) = (unsnap(h[0]), unsnap(h[1]));
        let probe = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        let owner = (0..out.len())
            .filter(|&i| point_in_ring(probe, &out[i].shell))
            .min_by(|&i, &j| areas[i].total_cmp(&areas[j]));
        if let Some(i) = owner {
            out[i].holes.push(to_f(h));
        }
    }
    out
}
