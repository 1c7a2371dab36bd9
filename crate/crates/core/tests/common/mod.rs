//! Ground-truth scoring for the generated room.
#![allow(dead_code)]

use std::collections::BTreeSet;

use polyplane::config::{InputKind, PipelineConfig};
use polyplane::geometry::{point_in_ring, point_to_plane_distance, PlaneProjector, Vec3};
use polyplane::pipeline::SceneResult;
use polyplane::postprocess::PlanarPolygon;
use polyplane::synthetic::{RoomScene, RoomSpec};

/// Surfaces with fewer visible points are not expected to be recovered.
pub const MIN_SURFACE_POINTS: usize = 150;
pub const OVERLAP: f64 = 0.8;

pub fn room_config() -> PipelineConfig {
    let mut c = PipelineConfig::new(InputKind::Organized);
    c.fastga.level = 4;
    c.fastga.v_min = 15;
    c.fastga.d_peak = 0.1;
    c.segmentation.l_max = 0.2;
    c.segmentation.ang_min = 0.94;
    c.segmentation.ptp_max = 0.05;
    c.segmentation.tri_min = 100;
    c.segmentation.vertices_hole_min = 10;
    c.postprocess.alpha = 0.01;
    c.postprocess.gamma = 0.05;
    c.postprocess.delta = 0.01;
    c
}

pub fn room() -> RoomScene {
    polyplane::synthetic::room_scene(&RoomSpec::default())
}

#[derive(Debug, Clone)]
pub struct SurfaceMatch {
    pub surface: usize,
    pub points: usize,
    /// Best segment and its two overlap ratios.
    pub segment: Option<usize>,
    pub recall: f64,
    pub precision: f64,
    pub rmse: f64,
}

impl SurfaceMatch {
    pub fn recovered(&self) -> bool {
        self.recall >= OVERLAP && self.precision >= OVERLAP
    }
}

pub fn segment_points(result: &SceneResult, seg: usize) -> BTreeSet<usize> {
    let mesh = result.mesh.as_ref().expect("scene produced a mesh");
    result.segments[seg].triangles.iter().flat_map(|&t| mesh.triangles[t]).collect()
}

/// Matches every visible surface to the segment sharing most of its points.
pub fn score(scene: &RoomScene, result: &SceneResult) -> Vec<SurfaceMatch> {
    let seg_points: Vec<BTreeSet<usize>> = (0..result.segments.len()).map(|s| segment_points(result, s)).collect();
    let mut out = Vec::new();
    for k in 0..scene.surfaces.len() {
        let truth: BTreeSet<usize> = scene.points_on(k).into_iter().collect();
        if truth.len() < MIN_SURFACE_POINTS {
            continue;
        }
        let best = seg_points
            .iter()
            .enumerate()
            .map(|(s, pts)| (s, pts.intersection(&truth).count()))
            .max_by_key(|&(_, n)| n)
            .filter(|&(_, n)| n > 0);
        let m = match best {
            Some((s, common)) => {
                let pts = &seg_points[s];
                let plane = &result.segments[s].plane;
                let points = &scene.cloud.points();
                let sq: f64 = pts.iter().map(|&i| point_to_plane_distance(points[i], plane).powi(2)).sum();
                SurfaceMatch {
                    surface: k,
                    points: truth.len(),
                    segment: Some(s),
                    recall: common as f64 / truth.len() as f64,
                    precision: common as f64 / pts.len() as f64,
                    rmse: (sq / pts.len() as f64).sqrt(),
                }
            }
            None => SurfaceMatch {
                surface: k,
                points: truth.len(),
                segment: None,
                recall: 0.0,
                precision: 0.0,
                rmse: f64::INFINITY,
            },
        };
        out.push(m);
    }
    out
}

/// Largest upward polygon lying on `z = 0`.
pub fn floor_polygon(result: &SceneResult) -> Option<&PlanarPolygon> {
    result
        .polygons
        .iter()
        .filter(|p| p.plane.normal.distance(Vec3::Z) < 0.05 && point_to_plane_distance(Vec3::ZERO, &p.plane).abs() < 0.02)
        .max_by(|a, b| a.polygon.area().total_cmp(&b.polygon.area()))
}

/// Number of holes that contain each footprint's center.
pub fn holes_at_footprints(scene: &RoomScene, floor: &PlanarPolygon) -> Vec<usize> {
    let proj = PlaneProjector::new(&floor.plane);
    scene
        .footprints()
        .iter()
        .map(|(lo, hi)| {
            let c = proj.project(Vec3::new(0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.0));
            floor.polygon.holes.iter().filter(|h| point_in_ring(c, h)).count()
        })
        .collect()
}

/// Grid of gently curved points with a random share of NaN entries.
pub fn random_opc(rows: usize, cols: usize, nan_density: f64, seed: u64) -> polyplane::cloud::OrganizedCloud {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    polyplane::cloud::OrganizedCloud::from_fn(rows, cols, |u, v| {
        if rng.gen_bool(nan_density) {
            Vec3::NAN
        } else {
            Vec3::new(v as f64 * 0.1, -(u as f64) * 0.1, rng.gen_range(-0.02..0.02))
        }
    })
    .expect("grid size matches")
}

/// Checks the half-edge mesh of `opc` against independent oracles: the
/// per-quad triangle count, twin involution, reversed vertex pairs, and
/// agreement with a directed-edge lookup.
pub fn check_opc_mesh(opc: &polyplane::cloud::OrganizedCloud) -> Result<(), String> {
    use std::collections::HashMap;
    let mesh = polyplane::mesh::mesh_from_opc(opc).map_err(|e| e.to_string())?;
    let ok = |u: usize, v: usize| !opc.get(u, v).is_nan();
    let mut expected = 0;
    for u in 0..opc.rows() - 1 {
        for v in 0..opc.cols() - 1 {
            expected += usize::from(ok(u, v) && ok(u, v + 1) && ok(u + 1, v + 1));
            expected += usize::from(ok(u, v) && ok(u + 1, v + 1) && ok(u + 1, v));
        }
    }
    if mesh.num_triangles() != expected {
        return Err(format!("{} triangles, oracle says {expected}", mesh.num_triangles()));
    }
    let directed: HashMap<(usize, usize), usize> =
        (0..mesh.halfedges.len()).map(|he| (mesh.halfedge_points(he), he)).collect();
    for he in 0..mesh.halfedges.len() {
        let (a, b) = mesh.halfedge_points(he);
        let want = directed.get(&(b, a)).copied();
        if mesh.twin(he) != want {
            return Err(format!("half-edge {he} twin {:?}, lookup says {want:?}", mesh.twin(he)));
        }
        if let Some(t) = want {
            if mesh.twin(t) != Some(he) {
                return Err(format!("twin of {he} does not point back"));
            }
            if mesh.halfedge_points(t) != (b, a) {
                return Err(format!("half-edge {he} and its twin do not share a reversed pair"));
            }
        }
    }
    Ok(())
}
