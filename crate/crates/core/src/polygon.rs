//! Boundary following: segment triangles to a shell ring plus hole rings.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::f64::consts::TAU;

use crate::geometry::{LinearRing, Plane, PlaneProjector, Point2, Polygon};
use crate::mesh::HalfEdgeMesh;
use crate::{Error, Result};

/// Boundary half-edges of a segment, indexed by origin point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryEdgeSet {
    /// Ascending half-edge ids.
    pub edges: Vec<usize>,
    pub point_to_edges: HashMap<usize, Vec<usize>>,
}

/// Half-edges of `segment` whose twin is missing or lies outside it.
pub fn find_boundary_edges(segment: &[usize], mesh: &HalfEdgeMesh) -> BoundaryEdgeSet {
    let members: HashSet<usize> = segment.iter().copied().collect();
    let mut edges = Vec::new();
    let mut point_to_edges: HashMap<usize, Vec<usize>> = HashMap::new();
    for &t in segment {
        for he in 3 * t..3 * t + 3 {
            let inside = mesh.twin(he).is_some_and(|tw| members.contains(&(tw / 3)));
            if !inside {
                edges.push(he);
            }
        }
    }
    edges.sort_unstable();
    for &he in &edges {
        point_to_edges.entry(mesh.halfedge_points(he).0).or_default().push(he);
    }
    BoundaryEdgeSet { edges, point_to_edges }
}

/// CCW angle of `d` in `[0, 2π)`.
#[inline]
fn heading(d: Point2) -> f64 {
    let a = d[1].atan2(d[0]);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

struct Walker<'a> {
    mesh: &'a HalfEdgeMesh,
    projected: HashMap<usize, Point2>,
    point_to_edges: HashMap<usize, Vec<usize>>,
    remaining: BTreeSet<usize>,
}

impl Walker<'_> {
    fn direction(&self, he: usize) -> Point2 {
        let (a, b) = self.mesh.halfedge_points(he);
        let (pa, pb) = (self.projected[&a], self.projected[&b]);
        [pb[0] - pa[0], pb[1] - pa[1]]
    }

    /// Among `candidates`, the edge making the sharpest right turn after
    /// arriving along `incoming`: the first one met rotating counter-clockwise
    /// from the reversed incoming direction.
    fn rightmost(&self, incoming: Point2, candidates: impl Iterator<Item = usize>) -> Option<usize> {
        let back = heading([-incoming[0], -incoming[1]]);
        let mut best: Option<(f64, usize)> = None;
        for he in candidates {
            let mut turn = heading(self.direction(he)) - back;
            if turn <= 0.0 {
                turn += TAU;
            }
            if best.map_or(true, |(b, _)| turn < b) {
                best = Some((turn, he));
            }
        }
        best.map(|(_, he)| he)
    }

    /// Follows boundary edges from `start` until the walk would reuse it.
    fn walk(&mut self, start: usize) -> Result<Vec<usize>> {
        self.remaining.remove(&start);
        let start_point = self.mesh.halfedge_points(start).0;
        let mut ring = vec![start_point];
        let mut current = start;
        loop {
            let here = self.mesh.halfedge_points(current).1;
            let outgoing = self.point_to_edges.get(&here).map(Vec::as_slice).unwrap_or(&[]);
            let candidates = outgoing
                .iter()
                .copied()
                .filter(|he| self.remaining.contains(he) || (*he == start));
            let next = self
                .rightmost(self.direction(current), candidates)
                .ok_or(Error::OpenBoundary {
                    start: start_point,
                    stuck: here,
                })?;
            if next == start {
                return Ok(ring);
            }
            self.remaining.remove(&next);
            ring.push(here);
            current = next;
        }
    }
}

/// Shell and holes of a segment in the projection onto `plane`.
///
/// The shell starts at the boundary point with the largest projected x (then
/// y), which always lies on the outer boundary. Remaining boundary cycles
/// become holes, starting from the smallest unused half-edge id; holes with
/// fewer than `vertices_hole_min` points are dropped. With mesh triangles
/// counter-clockwise about the plane normal, the shell comes out CCW and the
/// holes CW.
pub fn extract_polygon(
    segment: &[usize],
    mesh: &HalfEdgeMesh,
    plane: &Plane,
    vertices_hole_min: usize,
) -> Result<Polygon> {
    if segment.is_empty() {
        return Err(Error::DegeneratePolygon("empty segment".into()));
    }
    let boundary = find_boundary_edges(segment, mesh);
    let projector = PlaneProjector::new(plane);
    let projected: HashMap<usize, Point2> = boundary
        .point_to_edges
        .keys()
        .map(|&p| (p, projector.project(mesh.points[p])))
        .collect();

    let (&extreme, _) = projected
        .iter()
        .max_by(|(ia, a), (ib, b)| {
            a[0].total_cmp(&b[0])
                .then(a[1].total_cmp(&b[1]))
                .then(ib.cmp(ia))
        })
        .ok_or_else(|| Error::DegeneratePolygon("segment has no boundary".into()))?;

    let mut walker = Walker {
        mesh,
        projected,
        point_to_edges: boundary.point_to_edges,
        remaining: boundary.edges.iter().copied().collect(),
    };

    // Rotating counter-clockwise from +x, the first outgoing edge at the
    // extreme point bounds the exterior.
    let start = walker
        .rightmost([-1.0, 0.0], walker.point_to_edges[&extreme].iter().copied())
        .expect("boundary point has an outgoing edge");
    let shell = walker.walk(start)?;

    let mut holes = Vec::new();
    while let Some(&first) = walker.remaining.iter().next() {
        let ring = walker.walk(first)?;
        if ring.len() >= vertices_hole_min {
            holes.push(LinearRing::new(ring));
        }
    }

    Ok(Polygon {
        shell: LinearRing::new(shell),
        holes,
        plane: *plane,
    })
}

pub use crate::geometry::signed_area as polygon_area_2d;
