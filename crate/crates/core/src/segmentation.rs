//! Dominant-normal grouping and region growing over the half-edge mesh.

use std::collections::VecDeque;

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{point_to_plane_distance, Plane, Polygon, Vec3};
use crate::mesh::HalfEdgeMesh;
use crate::polygon::extract_polygon;
use crate::{Error, Result};

/// Label of triangles that belong to no group.
pub const UNASSIGNED: u8 = 255;

/// Most dominant normals a single run can group by.
pub const MAX_GROUPS: usize = 254;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentationParams {
    /// Triangles with a longer edge are never grouped, meters.
    pub l_max: f64,
    /// Minimum cosine between a triangle normal and its group normal.
    pub ang_min: f64,
    /// Point-to-plane limit during growth, meters. Zero disables it.
    pub ptp_max: f64,
    pub tri_min: usize,
    pub vertices_hole_min: usize,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        SegmentationParams {
            l_max: 0.1,
            ang_min: 0.94,
            ptp_max: 0.08,
            tri_min: 200,
            vertices_hole_min: 10,
        }
    }
}

impl SegmentationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.l_max > 0.0) {
            return Err(Error::InvalidParameter(format!("l_max must be positive, got {}", self.l_max)));
        }
        if !(self.ang_min > 0.0 && self.ang_min <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ang_min must lie in (0, 1], got {}",
                self.ang_min
            )));
        }
        if !(self.ptp_max >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ptp_max must be non-negative, got {}",
                self.ptp_max
            )));
        }
        if self.tri_min == 0 {
            return Err(Error::InvalidParameter("tri_min must be at least 1".into()));
        }
        if self.vertices_hole_min < 3 {
            return Err(Error::InvalidParameter(format!(
                "vertices_hole_min must be at least 3, got {}",
                self.vertices_hole_min
            )));
        }
        Ok(())
    }
}

/// An edge-connected set of triangles sharing one group label.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSegment {
    /// Ascending triangle indices.
    pub triangles: Vec<usize>,
    pub group: u8,
    pub plane: Plane,
}

/// Everything found for one dominant normal.
#[derive(Debug)]
pub struct PlaneGroup {
    pub label: u8,
    pub normal: Vec3,
    pub segments: Vec<PlanarSegment>,
    /// One entry per segment, in the same order.
    pub polygons: Vec<Result<Polygon>>,
}

/// Labels every triangle with the index of its closest dominant normal, or
/// [`UNASSIGNED`].
pub fn group_assignment(
    mesh: &HalfEdgeMesh,
    dominant_normals: &[Vec3],
    l_max: f64,
    ang_min: f64,
) -> Result<Vec<u8>> {
    if dominant_normals.len() > MAX_GROUPS {
        return Err(Error::TooManyNormals(dominant_normals.len()));
    }
    Ok((0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            if !(mesh.max_edge_length(t) <= l_max) {
                return UNASSIGNED;
            }
            let n = mesh.normals[t];
            let mut best = f64::NEG_INFINITY;
            let mut label = UNASSIGNED;
            for (j, d) in dominant_normals.iter().enumerate() {
                let dot = n.dot(*d);
                if dot > best {
                    best = dot;
                    label = j as u8;
                }
            }
            if best < ang_min {
                UNASSIGNED
            } else {
                label
            }
        })
        .collect())
}

/// Breadth-first growth from `seed` across twin edges.
///
/// A neighbor joins when it carries the seed's label, is unvisited, and
/// (for positive `ptp_max`) all of its vertices lie within `ptp_max` of the
/// plane through the seed centroid with normal `normal`. Joined triangles are
/// marked in `visited`. Returns ascending triangle indices.
pub fn extract_planar_segment(
    seed: usize,
    mesh: &HalfEdgeMesh,
    groups: &[u8],
    normal: Vec3,
    ptp_max: f64,
    visited: &mut [bool],
) -> Vec<usize> {
    let label = groups[seed];
    let anchor = Plane {
        normal,
        point: mesh.centroid(seed),
    };
    let planar = |t: usize| {
        ptp_max <= 0.0
            || mesh
                .triangle_points(t)
                .iter()
                .all(|&p| point_to_plane_distance(p, &anchor).abs() <= ptp_max)
    };

    let mut members = vec![seed];
    let mut queue = VecDeque::from([seed]);
    visited[seed] = true;
    while let Some(t) = queue.pop_front() {
        for he in 3 * t..3 * t + 3 {
            let Some(twin) = mesh.twin(he) else { continue };
            let nb = twin / 3;
            if visited[nb] || groups[nb] != label || !planar(nb) {
                continue;
            }
            visited[nb] = true;
            members.push(nb);
            queue.push_back(nb);
        }
    }
    members.sort_unstable();
    members
}

/// Segments and polygons for a single label.
///
/// Seeds are scanned in ascending triangle order. Polygon extraction for the
/// kept segments runs in parallel and is joined before returning.
pub fn region_growing_task(
    mesh: &HalfEdgeMesh,
    groups: &[u8],
    label: u8,
    normal: Vec3,
    params: &SegmentationParams,
) -> (Vec<PlanarSegment>, Vec<Result<Polygon>>) {
    let mut visited = vec![false; mesh.num_triangles()];
    let mut segments = Vec::new();
    for t in 0..mesh.num_triangles() {
        if groups[t] != label || visited[t] {
            continue;
        }
        let triangles = extract_planar_segment(t, mesh, groups, normal, params.ptp_max, &mut visited);
        if triangles.len() >= params.tri_min {
            let plane = fit_segment_plane(&triangles, mesh, normal);
            segments.push(PlanarSegment {
                triangles,
                group: label,
                plane,
            });
        }
    }
    let polygons = segments
        .par_iter()
        .map(|s| extract_polygon(&s.triangles, mesh, &s.plane, params.vertices_hole_min))
        .collect();
    (segments, polygons)
}

/// Runs grouping and region growing for every dominant normal, one task per
/// label.
pub fn extract_planes_and_polygons(
    mesh: &HalfEdgeMesh,
    dominant_normals: &[Vec3],
    params: &SegmentationParams,
) -> Result<Vec<PlaneGroup>> {
    params.validate()?;
    let groups = group_assignment(mesh, dominant_normals, params.l_max, params.ang_min)?;
    Ok(dominant_normals
        .par_iter()
        .enumerate()
        .map(|(j, &normal)| {
            let label = j as u8;
            let (segments, polygons) = region_growing_task(mesh, &groups, label, normal, params);
            PlaneGroup {
                label,
                normal,
                segments,
                polygons,
            }
        })
        .collect())
}

/// Least-squares plane of the segment's unique vertices, oriented to agree
/// with `normal`. Falls back to `normal` through the centroid when the
/// vertices do not span a plane.
pub fn fit_segment_plane(triangles: &[usize], mesh: &HalfEdgeMesh, normal: Vec3) -> Plane {
    let mut ids: Vec<usize> = triangles.iter().flat_map(|&t| mesh.triangles[t]).collect();
    ids.sort_unstable();
    ids.dedup();
    let points: Vec<Vec3> = ids.iter().map(|&i| mesh.points[i]).collect();
    match fit_plane_pca(&points) {
        Some(mut plane) => {
            if plane.normal.dot(normal) < 0.0 {
                plane.normal = -plane.normal;
            }
            plane
        }
        None => {
            let centroid = points.iter().fold(Vec3::ZERO, |a, &p| a + p) / points.len().max(1) as f64;
            Plane::new(normal, centroid)
        }
    }
}

/// Total-least-squares plane through `points`; `None` when they are fewer
/// than three or collinear.
pub fn fit_plane_pca(points: &[Vec3]) -> Option<Plane> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vec3::ZERO, |a, &p| a + p) / n;
    let mut cov = Matrix3::<f64>::zeros();
    for p in points {
        let d = *p - centroid;
        let d = nalgebra::Vector3::new(d.x, d.y, d.z);
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (mid, high) = (eig.eigenvalues[order[1]], eig.eigenvalues[order[2]]);
    if !(high > 0.0) || mid <= high * 1e-12 {
        return None;
    }
    let v = eig.eigenvectors.column(order[0]);
    Some(Plane::new(Vec3::new(v[0], v[1], v[2]), centroid))
}
