use rayon::prelude::*;

use super::{HalfEdgeMesh, NO_TWIN};
use crate::cloud::OrganizedCloud;
use crate::{Error, Result};

/// TriMap entry for a fully-connected triangle that was not emitted.
pub const NO_TRIANGLE: usize = usize::MAX;

/// Maps global ids of the fully-connected grid triangulation onto the
/// triangles actually emitted for an organized cloud.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMap {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl TriMap {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Emitted triangle for `gid`, if any.
    #[inline]
    pub fn get(&self, gid: usize) -> Option<usize> {
        match self.entries.get(gid) {
            Some(&NO_TRIANGLE) | None => None,
            Some(&t) => Some(t),
        }
    }

    /// Emitted triangle `k` (0 or 1) of quad `(u, v)`, if any. Quads outside
    /// the grid yield `None`.
    #[inline]
    pub fn at(&self, u: isize, v: isize, k: usize) -> Option<usize> {
        if u < 0 || v < 0 || u as usize + 1 >= self.rows || v as usize + 1 >= self.cols {
            return None;
        }
        self.get(quad_to_gid(u as usize, v as usize, k, self.cols))
    }
}

/// Global id of triangle `k` in quad `(u, v)` of a grid with `cols` columns.
#[inline]
pub fn quad_to_gid(u: usize, v: usize, k: usize, cols: usize) -> usize {
    2 * (u * (cols - 1) + v) + k
}

/// Inverse of [`quad_to_gid`].
#[inline]
pub fn gid_to_quad(gid: usize, cols: usize) -> (usize, usize, usize) {
    let quad = gid / 2;
    (quad / (cols - 1), quad % (cols - 1), gid % 2)
}

/// Right-cut triangulation of an organized cloud.
///
/// Quads are processed row by row in parallel; rows are stitched together
/// afterwards so the triangle order matches a sequential raster scan.
pub fn extract_triangles_opc(opc: &OrganizedCloud) -> Result<(Vec<[usize; 3]>, TriMap)> {
    let (rows, cols) = (opc.rows(), opc.cols());
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateInput(format!(
            "organized cloud must be at least 2x2, got {rows}x{cols}"
        )));
    }
    let valid = |u: usize, v: usize| !opc.get(u, v).is_nan();

    let per_row: Vec<Vec<(usize, [usize; 3])>> = (0..rows - 1)
        .into_par_iter()
        .map(|u| {
            let mut out = Vec::with_capacity(2 * (cols - 1));
            for v in 0..cols - 1 {
                let p1 = opc.index(u, v);
                let p2 = opc.index(u, v + 1);
                let p3 = opc.index(u + 1, v + 1);
                let p4 = opc.index(u + 1, v);
                let (v1, v2, v3, v4) = (
                    valid(u, v),
                    valid(u, v + 1),
                    valid(u + 1, v + 1),
                    valid(u + 1, v),
                );
                let gid = quad_to_gid(u, v, 0, cols);
                if v1 && v2 && v3 {
                    out.push((gid, [p3, p2, p1]));
                }
                if v1 && v3 && v4 {
                    out.push((gid + 1, [p1, p4, p3]));
                }
            }
            out
        })
        .collect();

    let total: usize = per_row.iter().map(Vec::len).sum();
    let mut triangles = Vec::with_capacity(total);
    let mut entries = vec![NO_TRIANGLE; 2 * (rows - 1) * (cols - 1)];
    for (gid, tri) in per_row.into_iter().flatten() {
        entries[gid] = triangles.len();
        triangles.push(tri);
    }
    Ok((triangles, TriMap { rows, cols, entries }))
}

/// Twin linkage for an organized-cloud mesh, derived purely from the grid
/// neighborhood of each quad.
pub fn extract_halfedges_opc(trimap: &TriMap, num_triangles: usize) -> Vec<usize> {
    let cols = trimap.cols;
    let mut halfedges = vec![NO_TWIN; 3 * num_triangles];
    // Each emitted triangle writes only its own three slots, so the work can
    // be split by triangle.
    let mut owners = vec![usize::MAX; num_triangles];
    for (gid, &t) in trimap.entries.iter().enumerate() {
        if t != NO_TRIANGLE {
            owners[t] = gid;
        }
    }
    halfedges
        .par_chunks_mut(3)
        .zip(owners.par_iter())
        .for_each(|(slots, &gid)| {
            let (u, v, k) = gid_to_quad(gid, cols);
            let (u, v) = (u as isize, v as isize);
            // (neighbor triangle, edge index on both sides) for edges 0, 1, 2.
            let links = if k == 0 {
                [
                    trimap.at(u, v + 1, 1),
                    trimap.at(u - 1, v, 1),
                    trimap.at(u, v, 1),
                ]
            } else {
                [
                    trimap.at(u, v - 1, 0),
                    trimap.at(u + 1, v, 0),
                    trimap.at(u, v, 0),
                ]
            };
            for (e, link) in links.into_iter().enumerate() {
                if let Some(t) = link {
                    slots[e] = 3 * t + e;
                }
            }
        });
    halfedges
}

/// Full mesh for an organized cloud, including normals and the TriMap.
pub fn mesh_from_opc(opc: &OrganizedCloud) -> Result<HalfEdgeMesh> {
    let (triangles, trimap) = extract_triangles_opc(opc)?;
    let halfedges = extract_halfedges_opc(&trimap, triangles.len());
    let mut mesh = HalfEdgeMesh::new(opc.points().to_vec(), triangles, halfedges);
    mesh.trimap = Some(trimap);
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use std::collections::HashMap;

    fn grid(rows: usize, cols: usize, nan: &[(usize, usize)]) -> OrganizedCloud {
        OrganizedCloud::from_fn(rows, cols, |u, v| {
            if nan.contains(&(u, v)) {
                Vec3::NAN
            } else {
                Vec3::new(v as f64, -(u as f64), 0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn single_quad() {
        let (tris, map) = extract_triangles_opc(&grid(2, 2, &[])).unwrap();
        assert_eq!(tris.len(), 2);
        assert_eq!(map.entries(), &[0, 1]);
        assert_eq!(tris[0], [3, 1, 0]);
        assert_eq!(tris[1], [0, 2, 3]);
    }

    #[test]
    fn single_quad_missing_p2() {
        let (tris, map) = extract_triangles_opc(&grid(2, 2, &[(0, 1)])).unwrap();
        assert_eq!(tris, vec![[0, 2, 3]]);
        assert_eq!(map.entries(), &[NO_TRIANGLE, 0]);
    }

    #[test]
    fn too_small_grid_is_rejected() {
        let one_row = OrganizedCloud::new(1, 3, vec![Vec3::ZERO; 3]).unwrap();
        assert!(matches!(
            extract_triangles_opc(&one_row),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn single_quad_twins() {
        let mesh = mesh_from_opc(&grid(2, 2, &[])).unwrap();
        let expect = [NO_TWIN, NO_TWIN, 5, NO_TWIN, NO_TWIN, 2];
        assert_eq!(mesh.halfedges, expect);
    }

    #[test]
    fn neighboring_quads_share_vertical_edge() {
        let mesh = mesh_from_opc(&grid(2, 3, &[])).unwrap();
        let map = mesh.trimap.as_ref().unwrap();
        let first = map.at(0, 0, 0).unwrap();
        let second = map.at(0, 1, 1).unwrap();
        assert_eq!(mesh.halfedges[3 * first], 3 * second);
        assert_eq!(mesh.halfedges[3 * second], 3 * first);
    }

    #[test]
    fn masked_grid_matches_per_quad_oracle() {
        // Scattered holes plus a missing border row segment.
        let nan = [(1, 1), (2, 4), (3, 3), (5, 0), (6, 5), (6, 6), (0, 3)];
        let opc = grid(7, 7, &nan);
        let (tris, map) = extract_triangles_opc(&opc).unwrap();

        let ok = |u: usize, v: usize| !nan.contains(&(u, v));
        let mut expected = Vec::new();
        for u in 0..6 {
            for v in 0..6 {
                let first = ok(u, v) && ok(u, v + 1) && ok(u + 1, v + 1);
                let second = ok(u, v) && ok(u + 1, v) && ok(u + 1, v + 1);
                expected.push(first);
                expected.push(second);
            }
        }
        assert_eq!(tris.len(), expected.iter().filter(|&&e| e).count());
        for (gid, &e) in expected.iter().enumerate() {
            assert_eq!(map.get(gid).is_some(), e, "gid {gid}");
        }
    }

    #[test]
    fn twins_match_pair_oracle() {
        let opc = grid(6, 8, &[(2, 2), (4, 7), (0, 0), (3, 5)]);
        let mesh = mesh_from_opc(&opc).unwrap();
        mesh.validate().unwrap();
        let mut by_pair = HashMap::new();
        for he in 0..mesh.halfedges.len() {
            by_pair.insert(mesh.halfedge_points(he), he);
        }
        for he in 0..mesh.halfedges.len() {
            let (a, b) = mesh.halfedge_points(he);
            let want = by_pair.get(&(b, a)).copied().unwrap_or(NO_TWIN);
            assert_eq!(mesh.halfedges[he], want, "half-edge {he}");
        }
    }

    #[test]
    fn gid_round_trip() {
        for cols in 2..9 {
            for gid in 0..2 * 7 * (cols - 1) {
                let (u, v, k) = gid_to_quad(gid, cols);
                assert_eq!(quad_to_gid(u, v, k, cols), gid);
            }
        }
    }
}
