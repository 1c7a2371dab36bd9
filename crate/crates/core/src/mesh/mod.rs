//! Half-edge triangle meshes and the front-ends that build them.
//!
//! Every input class ends up as a [`HalfEdgeMesh`]: a point array, CCW
//! triangles, a twin array with one entry per half-edge, and per-triangle
//! unit normals. Half-edge `j` belongs to triangle `j / 3` and runs from
//! vertex `j % 3` to vertex `(j + 1) % 3` of that triangle.

mod delaunay;
mod opc;
mod user;

pub use delaunay::triangulate_unorganized;
pub use opc::{
    extract_halfedges_opc, extract_triangles_opc, gid_to_quad, mesh_from_opc, quad_to_gid, TriMap,
    NO_TRIANGLE,
};
pub use user::{build_halfedges_user, mesh_from_triangles};

use rayon::prelude::*;

use crate::geometry::{triangle_normal, Vec3};

/// Twin entry for a border half-edge.
pub const NO_TWIN: usize = usize::MAX;

/// A triangle mesh with explicit twin half-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfEdgeMesh {
    pub points: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    pub halfedges: Vec<usize>,
    pub normals: Vec<Vec3>,
    /// Only set for meshes built from organized clouds.
    pub trimap: Option<TriMap>,
}

impl HalfEdgeMesh {
    /// Assembles a mesh and computes its normals.
    pub fn new(points: Vec<Vec3>, triangles: Vec<[usize; 3]>, halfedges: Vec<usize>) -> Self {
        let mut mesh = HalfEdgeMesh {
            points,
            triangles,
            halfedges,
            normals: Vec::new(),
            trimap: None,
        };
        mesh.normals = compute_normals(&mesh);
        mesh
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Twin of half-edge `he`, if it has one.
    #[inline]
    pub fn twin(&self, he: usize) -> Option<usize> {
        match self.halfedges[he] {
            NO_TWIN => None,
            t => Some(t),
        }
    }

    /// `(origin, destination)` point indices of half-edge `he`.
    #[inline]
    pub fn halfedge_points(&self, he: usize) -> (usize, usize) {
        let tri = &self.triangles[he / 3];
        let k = he % 3;
        (tri[k], tri[(k + 1) % 3])
    }

    #[inline]
    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    pub fn centroid(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle_points(t);
        (a + b + c) / 3.0
    }

    pub fn max_edge_length(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        a.distance(b).max(b.distance(c)).max(c.distance(a))
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation found.
    pub fn validate(&self) -> Result<(), String> {
        if self.halfedges.len() != 3 * self.triangles.len() {
            return Err(format!(
                "{} half-edges for {} triangles",
                self.halfedges.len(),
                self.triangles.len()
            ));
        }
        if self.normals.len() != self.triangles.len() {
            return Err("normal count differs from triangle count".into());
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= self.points.len()) {
                return Err(format!("triangle {t} references a missing point"));
            }
        }
        for he in 0..self.halfedges.len() {
            let Some(tw) = self.twin(he) else { continue };
            if tw >= self.halfedges.len() || self.halfedges[tw] != he {
                return Err(format!("twin involution broken at half-edge {he}"));
            }
            let (a, b) = self.halfedge_points(he);
            if self.halfedge_points(tw) != (b, a) {
                return Err(format!("half-edge {he} and twin {tw} do not share a reversed pair"));
            }
        }
        for (t, n) in self.normals.iter().enumerate() {
            if !n.is_nan() && (n.norm() - 1.0).abs() > 1e-6 {
                return Err(format!("normal of triangle {t} is not unit length"));
            }
        }
        Ok(())
    }
}

/// Unit normals for every triangle; NaN for degenerate ones.
pub fn compute_normals(mesh: &HalfEdgeMesh) -> Vec<Vec3> {
    mesh.triangles
        .par_iter()
        .map(|&[a, b, c]| triangle_normal(mesh.points[a], mesh.points[b], mesh.points[c]))
        .collect()
}
