mod common;

use std::collections::BTreeSet;

use polyplane::geometry::{point_in_ring, Vec3};
use polyplane::mesh::mesh_from_opc;
use polyplane::polygon::{extract_polygon, find_boundary_edges};
use polyplane::segmentation::{group_assignment, region_growing_task, SegmentationParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rings_use_the_boundary_edges(rows in 3usize..30, cols in 3usize..30, density in 0.0..0.4f64, seed in any::<u64>(), hole_min in 0usize..12) {
        let opc = common::random_opc(rows, cols, density, seed);
        let mesh = mesh_from_opc(&opc).unwrap();
        let groups = group_assignment(&mesh, &[Vec3::Z], 1.0, 0.5).unwrap();
        let p = SegmentationParams { l_max: 1.0, ang_min: 0.5, ptp_max: 0.0, tri_min: 1, vertices_hole_min: hole_min };
        let (segments, polygons) = region_growing_task(&mesh, &groups, 0, Vec3::Z, &p);
        for (s, poly) in segments.iter().zip(polygons) {
            let poly = match poly {
                Ok(poly) => poly,
                Err(e) => return Err(TestCaseError::fail(format!("segment of {} triangles: {e}", s.triangles.len()))),
            };
            let edges = find_boundary_edges(&s.triangles, &mesh).edges.len();
            let used = poly.shell.len() + poly.holes.iter().map(|h| h.len()).sum::<usize>();
            prop_assert!(used <= edges);
            if hole_min == 0 {
                prop_assert_eq!(used, edges);
            }
            prop_assert!(poly.holes.iter().all(|h| h.len() >= hole_min));

            let flat = poly.to_2d(&mesh.points);
            let on_shell: BTreeSet<usize> = poly.shell.indices.iter().copied().collect();
            for (hole, flat_hole) in poly.holes.iter().zip(&flat.holes) {
                for (&i, &q) in hole.indices.iter().zip(flat_hole) {
                    if !on_shell.contains(&i) {
                        prop_assert!(point_in_ring(q, &flat.shell), "hole point {} outside the shell", i);
                    }
                }
            }

            let again = extract_polygon(&s.triangles, &mesh, &s.plane, hole_min).unwrap();
            prop_assert_eq!(&again, &poly);
        }
    }
}
