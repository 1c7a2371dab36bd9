use std::collections::HashMap;

use super::{HalfEdgeMesh, NO_TWIN};
use crate::geometry::Vec3;

/// Twin linkage for an arbitrary CCW triangle list.
///
/// Half-edges are keyed by their ordered vertex pair. When an edge is shared
/// by more than two triangles only the first matching pair is linked and the
/// remaining copies stay on the border.
pub fn build_halfedges_user(triangles: &[[usize; 3]]) -> Vec<usize> {
    let n = 3 * triangles.len();
    let pair = |he: usize| {
        let tri = &triangles[he / 3];
        let k = he % 3;
        (tri[k], tri[(k + 1) % 3])
    };
    let mut first = HashMap::with_capacity(n);
    for he in 0..n {
        first.entry(pair(he)).or_insert(he);
    }
    let mut halfedges = vec![NO_TWIN; n];
    for he in 0..n {
        if halfedges[he] != NO_TWIN {
            continue;
        }
        let (a, b) = pair(he);
        if let Some(&other) = first.get(&(b, a)) {
            if other != he && halfedges[other] == NO_TWIN {
                halfedges[he] = other;
                halfedges[other] = he;
            }
        }
    }
    halfedges
}

/// Mesh for a user-supplied triangle list.
pub fn mesh_from_triangles(points: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> HalfEdgeMesh {
    let halfedges = build_halfedges_user(&triangles);
    HalfEdgeMesh::new(points, triangles, halfedges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_edge() {
        let he = build_halfedges_user(&[[0, 1, 2], [2, 1, 3]]);
        assert_eq!(he, vec![NO_TWIN, 3, NO_TWIN, 1, NO_TWIN, NO_TWIN]);
    }

    #[test]
    fn lone_triangle() {
        assert_eq!(build_halfedges_user(&[[0, 1, 2]]), vec![NO_TWIN; 3]);
    }

    #[test]
    fn fan_around_one_edge_links_first_pair() {
        // Edge 0-1 is used by three triangles: (0,1) twice and (1,0) once.
        let tris = [[0, 1, 2], [1, 0, 3], [0, 1, 4]];
        let he = build_halfedges_user(&tris);
        assert_eq!(he[0], 3);
        assert_eq!(he[3], 0);
        assert_eq!(he[6], NO_TWIN);
        for (i, &t) in he.iter().enumerate() {
            if t != NO_TWIN {
                assert_eq!(he[t], i);
            }
        }
    }
}
