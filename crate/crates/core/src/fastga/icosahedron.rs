use std::collections::HashMap;

use crate::geometry::Vec3;
use crate::{Error, Result};

/// Deepest supported refinement.
pub const MAX_LEVEL: u32 = 7;

/// Names of the twelve base vertices: a pole `N`, the five vertices around
/// it (`upper`), the five around the opposite pole (`lower`), and `S`.
/// `lower[i]` sits between `upper[i]` and `upper[i + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BaseLabels {
    pub north: usize,
    pub upper: [usize; 5],
    pub lower: [usize; 5],
    pub south: usize,
}

/// Which of the four faces of strip `i` a base face is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StripFace {
    Top,
    Upper,
    Lower,
    Bottom,
}

/// Base face `4 * i + kind` with its corners in a fixed order.
pub(crate) fn base_face(labels: &BaseLabels, i: usize, kind: StripFace) -> [usize; 3] {
    let j = (i + 1) % 5;
    let (n, u, l, s) = (labels.north, labels.upper, labels.lower, labels.south);
    match kind {
        StripFace::Top => [n, u[i], u[j]],
        StripFace::Upper => [u[i], l[i], u[j]],
        StripFace::Lower => [u[j], l[i], l[j]],
        StripFace::Bottom => [l[i], s, l[j]],
    }
}

pub(crate) fn base_face_index(i: usize, kind: StripFace) -> usize {
    4 * i + kind as usize
}

/// Geodesic sphere from repeated four-way splits of an icosahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedIcosahedron {
    pub level: u32,
    pub vertices: Vec<Vec3>,
    /// Outward counter-clockwise triangles.
    pub triangles: Vec<[usize; 3]>,
    pub(crate) labels: BaseLabels,
    /// Vertex at integer barycentric position `(a, b, c)`, `a + b + c = 2^level`,
    /// of a base face (weights follow the corner order of [`base_face`]).
    pub(crate) lattice: HashMap<(usize, [u32; 3]), usize>,
}

impl RefinedIcosahedron {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Normalized centroid of triangle `t`.
    pub fn triangle_center(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangles[t];
        (self.vertices[a] + self.vertices[b] + self.vertices[c]).normalized()
    }

    /// Vertex adjacency lists, ascending.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[a, b, c] in &self.triangles {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                adj[p].push(q);
                adj[q].push(p);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Triangles around each vertex, ascending.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }
}

fn base_vertices() -> Vec<Vec3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::with_capacity(12);
    for (a, b) in [(1.0, phi), (-1.0, phi), (1.0, -phi), (-1.0, -phi)] {
        v.push(Vec3::new(0.0, a, b));
        v.push(Vec3::new(a, b, 0.0));
        v.push(Vec3::new(b, 0.0, a));
    }
    v.into_iter().map(Vec3::normalized).collect()
}

fn label_base(vertices: &[Vec3]) -> BaseLabels {
    let north = 0;
    let n = vertices[north];
    let south = (0..12)
        .min_by(|&a, &b| vertices[a].dot(n).total_cmp(&vertices[b].dot(n)))
        .unwrap();
    // Adjacent base vertices are the closest ones (dot = 1/sqrt(5)).
    let adjacent = |p: usize| -> Vec<usize> {
        (0..12)
            .filter(|&q| q != p && vertices[p].dot(vertices[q]) > 0.4)
            .collect()
    };
    let seed = if n.z.abs() < 0.9 { Vec3::Z } else { Vec3::X };
    let e1 = n.cross(seed).normalized();
    let e2 = n.cross(e1);
    let mut upper = adjacent(north);
    upper.sort_by(|&a, &b| {
        let az = |p: usize| vertices[p].dot(e2).atan2(vertices[p].dot(e1));
        az(a).total_cmp(&az(b))
    });
    let upper: [usize; 5] = upper.try_into().unwrap();
    let below = adjacent(south);
    let lower: [usize; 5] = std::array::from_fn(|i| {
        let (a, b) = (upper[i], upper[(i + 1) % 5]);
        *below
            .iter()
            .find(|&&l| vertices[l].dot(vertices[a]) > 0.4 && vertices[l].dot(vertices[b]) > 0.4)
            .unwrap()
    });
    BaseLabels {
        north,
        upper,
        lower,
        south,
    }
}

/// Builds the refined icosahedron for `level` in `0..=7`.
pub fn build_refined_icosahedron(level: u32) -> Result<RefinedIcosahedron> {
    if level > MAX_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "icosahedron level must be at most {MAX_LEVEL}, got {level}"
        )));
    }
    let mut vertices = base_vertices();
    let labels = label_base(&vertices);
    let full = 1u32 << level;

    // Each triangle carries its base face and the barycentric lattice
    // position of its corners.
    struct Tri {
        v: [usize; 3],
        face: usize,
        bary: [[u32; 3]; 3],
    }
    let corners = [[full, 0, 0], [0, full, 0], [0, 0, full]];
    let mut tris = Vec::with_capacity(20);
    for i in 0..5 {
        for kind in [StripFace::Top, StripFace::Upper, StripFace::Lower, StripFace::Bottom] {
            tris.push(Tri {
                v: base_face(&labels, i, kind),
                face: base_face_index(i, kind),
                bary: corners,
            });
        }
    }
    tris.sort_by_key(|t| t.face);

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec3>| {
            *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                vertices.push((vertices[a] + vertices[b]).normalized());
                vertices.len() - 1
            })
        };
        let half = |p: [u32; 3], q: [u32; 3]| [(p[0] + q[0]) / 2, (p[1] + q[1]) / 2, (p[2] + q[2]) / 2];
        let mut next = Vec::with_capacity(tris.len() * 4);
        for t in &tris {
            let [a, b, c] = t.v;
            let [pa, pb, pc] = t.bary;
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            let (qab, qbc, qca) = (half(pa, pb), half(pb, pc), half(pc, pa));
            for (v, bary) in [
                ([a, ab, ca], [pa, qab, qca]),
                ([ab, b, bc], [qab, pb, qbc]),
                ([ca, bc, c], [qca, qbc, pc]),
                ([ab, bc, ca], [qab, qbc, qca]),
            ] {
                next.push(Tri { v, face: t.face, bary });
            }
        }
        tris = next;
    }

    let mut lattice = HashMap::with_capacity(tris.len() * 3);
    for t in &tris {
        for k in 0..3 {
            lattice.insert((t.face, t.bary[k]), t.v[k]);
        }
    }
    Ok(RefinedIcosahedron {
        level,
        vertices,
        triangles: tris.iter().map(|t| t.v).collect(),
        labels,
        lattice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_the_refinement_table() {
        for (level, nv, nt) in [(0, 12, 20), (1, 42, 80), (2, 162, 320), (3, 642, 1280), (4, 2562, 5120)] {
            let ico = build_refined_icosahedron(level).unwrap();
            assert_eq!(ico.vertices.len(), nv);
            assert_eq!(ico.triangles.len(), nt);
            assert_eq!(ico.vertices.len(), 10 * 4usize.pow(level) + 2);
        }
        assert!(build_refined_icosahedron(8).is_err());
    }

    #[test]
    fn vertices_are_unit_and_triangles_face_outward() {
        let ico = build_refined_icosahedron(3).unwrap();
        for v in &ico.vertices {
            assert!((v.norm() - 1.0).abs() < 1e-9);
        }
        for &[a, b, c] in &ico.triangles {
            let (pa, pb, pc) = (ico.vertices[a], ico.vertices[b], ico.vertices[c]);
            assert!((pb - pa).cross(pc - pa).dot(pa + pb + pc) > 0.0);
        }
    }

    /// Largest angle between the centers of two cells sharing an edge.
    fn max_neighbor_separation(ico: &RefinedIcosahedron) -> f64 {
        let around = ico.vertex_triangles();
        let mut worst: f64 = 0.0;
        for t in 0..ico.triangles.len() {
            let c = ico.triangle_center(t);
            for &v in &ico.triangles[t] {
                for &u in &around[v] {
                    let shared = ico.triangles[u].iter().filter(|x| ico.triangles[t].contains(x)).count();
                    if shared == 2 {
                        let ang = c.dot(ico.triangle_center(u)).clamp(-1.0, 1.0).acos();
                        worst = worst.max(ang.to_degrees());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn base_cells_are_about_forty_two_degrees_apart() {
        let ico = build_refined_icosahedron(0).unwrap();
        // Dihedral supplement of the icosahedron: acos(sqrt(5) / 3).
        let expect = (5f64.sqrt() / 3.0).acos().to_degrees();
        assert!((max_neighbor_separation(&ico) - expect).abs() < 1e-9);
        assert!((expect - 41.8).abs() < 0.05);
    }

    #[test]
    fn spacing_halves_with_each_level() {
        let seps: Vec<f64> = (0..=4).map(|l| max_neighbor_separation(&build_refined_icosahedron(l).unwrap())).collect();
        for w in seps.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.45..0.55).contains(&ratio), "{seps:?}");
        }
        // 5120 cells of equal area would sit about sqrt(4 pi / 5120) apart.
        let even = (4.0 * std::f64::consts::PI / 5120.0).sqrt().to_degrees();
        assert!((seps[4] - 2.73).abs() < 0.01, "{}", seps[4]);
        assert!(seps[4] < even);
    }

    #[test]
    fn base_labels_are_consistent() {
        let ico = build_refined_icosahedron(0).unwrap();
        let l = ico.labels;
        let v = &ico.vertices;
        assert!((v[l.north] + v[l.south]).norm() < 1e-12);
        let edge = v[l.north].dot(v[l.upper[0]]);
        for i in 0..5 {
            let j = (i + 1) % 5;
            for (a, b) in [(l.upper[i], l.upper[j]), (l.upper[i], l.lower[i]), (l.upper[j], l.lower[i]), (l.lower[i], l.lower[j])] {
                assert!((v[a].dot(v[b]) - edge).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn axes_are_vertices_from_level_one() {
        let ico = build_refined_icosahedron(1).unwrap();
        for axis in [Vec3::X, Vec3::Y, Vec3::Z, -Vec3::X, -Vec3::Y, -Vec3::Z] {
            assert!(ico.vertices.iter().any(|v| v.distance(axis) < 1e-12));
        }
    }

    #[test]
    fn lattice_covers_every_vertex() {
        let ico = build_refined_icosahedron(2).unwrap();
        let mut seen = vec![false; ico.vertices.len()];
        for &v in ico.lattice.values() {
            seen[v] = true;
        }
        assert!(seen.iter().all(|&s| s));
        // 15 lattice points per face at level 2.
        assert_eq!(ico.lattice.len(), 20 * 15);
    }
}
