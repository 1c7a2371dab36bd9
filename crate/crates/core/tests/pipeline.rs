mod common;

use polyplane::cloud::{OrganizedCloud, UnorganizedCloud};
use polyplane::config::{InputKind, PipelineConfig};
use polyplane::geometry::{signed_area, Vec3};
use polyplane::pipeline::{bench, run_peaks, run_scene, SceneInput, STAGE_MESH};
use polyplane::synthetic::{flat_plane_opc, seat_and_wall_mesh};

fn plane_config() -> PipelineConfig {
    let mut c = PipelineConfig::new(InputKind::Organized);
    c.input.fixed_normals = Some(vec![[0.0, 0.0, 1.0]]);
    c.segmentation.tri_min = 10;
    c
}

#[test]
fn flat_plane_gives_one_rectangle() {
    let r = run_scene(&plane_config(), SceneInput::Organized(flat_plane_opc(20, 30, 0.05))).unwrap();
    assert_eq!(r.segments.len(), 1);
    assert_eq!(r.polygons.len(), 1);
    let p = &r.polygons[0].polygon;
    assert!(p.holes.is_empty());
    assert!((signed_area(&p.shell) - 29.0 * 0.05 * 19.0 * 0.05).abs() < 1e-9);
    // No fastga stage when the normals are given.
    let stages: Vec<_> = r.timings.iter().map(|t| t.stage).collect();
    assert_eq!(stages, ["mesh", "segmentation", "postprocess"]);
    assert!(r.image.is_none());
}

#[test]
fn simplified_rectangle_has_four_corners() {
    let mut c = plane_config();
    c.postprocess.alpha = 0.01;
    let r = run_scene(&c, SceneInput::Organized(flat_plane_opc(20, 30, 0.05))).unwrap();
    assert_eq!(r.polygons[0].polygon.shell.len(), 4);
    assert!(r.raw_polygons[0].polygon.shell.len() > 4);
}

#[test]
fn empty_inputs_give_empty_results() {
    let empty = OrganizedCloud::new(4, 4, vec![Vec3::NAN; 16]).unwrap();
    let r = run_scene(&plane_config(), SceneInput::Organized(empty)).unwrap();
    assert!(r.segments.is_empty() && r.polygons.is_empty() && r.timings.is_empty());
    let c = PipelineConfig::new(InputKind::Unorganized);
    let r = run_scene(&c, SceneInput::Unorganized(UnorganizedCloud::new(vec![]))).unwrap();
    assert!(r.polygons.is_empty());
}

#[test]
fn input_kind_must_match_the_config() {
    let err = run_scene(&PipelineConfig::new(InputKind::Mesh), SceneInput::Organized(flat_plane_opc(3, 3, 1.0))).unwrap_err();
    assert!(err.to_string().contains("expects mesh input"), "{err}");
}

#[test]
fn errors_name_their_stage() {
    let thin = OrganizedCloud::new(1, 5, vec![Vec3::ZERO; 5]).unwrap();
    let err = run_scene(&plane_config(), SceneInput::Organized(thin)).unwrap_err();
    assert!(err.to_string().starts_with(&format!("{STAGE_MESH}: ")), "{err}");
}

#[test]
fn unorganized_terrace() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    // Two flat levels joined by a steep ramp, scattered at random. Fitted
    // planes pick up a few vertices at the foot and lip of the ramp.
    let pts = (0..3000)
        .map(|_| {
            let (x, y): (f64, f64) = (rng.gen_range(0.0..4.0), rng.gen_range(0.0..2.0));
            let z = if x < 1.9 { 0.0 } else if x > 2.1 { 1.0 } else { (x - 1.9) * 5.0 };
            Vec3::new(x, y, z)
        })
        .collect();
    let mut c = PipelineConfig::new(InputKind::Unorganized);
    c.segmentation.l_max = 0.3;
    c.segmentation.tri_min = 50;
    let r = run_scene(&c, SceneInput::Unorganized(UnorganizedCloud::new(pts))).unwrap();
    assert_eq!(r.segments.len(), 2);
    let mut heights: Vec<f64> = r.polygons.iter().map(|p| p.plane.point.z).collect();
    heights.sort_by(f64::total_cmp);
    assert!(heights[0].abs() < 1e-3 && (heights[1] - 1.0).abs() < 1e-3, "{heights:?}");
}

#[test]
fn seat_scene_from_a_mesh() {
    let mut c = PipelineConfig::new(InputKind::Mesh);
    c.segmentation.l_max = 1.0;
    c.segmentation.tri_min = 10;
    let r = run_scene(&c, SceneInput::Mesh(seat_and_wall_mesh())).unwrap();
    assert_eq!(r.dominant_normals.len(), 2);
    assert_eq!(r.segments.len(), 3);
    assert!(r.polygons.iter().all(|p| p.polygon.holes.is_empty()));
}

#[test]
fn room_is_recovered() {
    let scene = common::room();
    let r = run_scene(&common::room_config(), SceneInput::Organized(scene.cloud.clone())).unwrap();
    assert_eq!(r.dominant_normals.len(), 5);
    for m in common::score(&scene, &r) {
        assert!(m.recovered(), "{} {m:?}", scene.surfaces[m.surface].name);
    }
    let floor = common::floor_polygon(&r).unwrap();
    assert_eq!(floor.polygon.holes.len(), 2);
    assert_eq!(common::holes_at_footprints(&scene, floor), [1, 1]);
}

#[test]
fn smoothing_stages_are_timed() {
    let mut c = common::room_config();
    c.laplacian = Some(Default::default());
    c.bilateral = Some(Default::default());
    let r = run_scene(&c, SceneInput::Organized(common::room().cloud)).unwrap();
    let stages: Vec<_> = r.timings.iter().map(|t| t.stage).collect();
    assert_eq!(stages, ["laplacian", "mesh", "bilateral", "fastga", "segmentation", "postprocess"]);
}

#[test]
fn peaks_only() {
    let r = run_peaks(&common::room_config(), SceneInput::Organized(common::room().cloud)).unwrap();
    assert_eq!(r.peaks.len(), 5);
    assert!(r.segments.is_empty());
    assert!(r.image.is_some());
}

#[test]
fn bench_reports_every_stage() {
    let input = SceneInput::Organized(common::room().cloud);
    let one = bench(&common::room_config(), &input, 1, 2).unwrap();
    assert!(one.stages.iter().all(|s| s.std_ms == 0.0));
    assert_eq!(one.total.std_ms, 0.0);
    let two = bench(&common::room_config(), &input, 2, 4).unwrap();
    assert_eq!(two.stages.len(), 4);
    assert!(two.stages.iter().all(|s| s.mean_ms >= 0.0 && s.std_ms >= 0.0));
    // Normals 1 to 4, threads 1, 2 and 4.
    assert_eq!(two.sweep.len(), 12);
    assert!(two.sweep.iter().filter(|r| r.threads == 1).all(|r| r.speedup == 1.0));
    assert!(two.to_string().contains("speedup"));
    assert!(bench(&common::room_config(), &input, 0, 1).is_err());
}
