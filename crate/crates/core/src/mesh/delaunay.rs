use std::collections::HashMap;

use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use super::{mesh_from_triangles, HalfEdgeMesh};
use crate::cloud::UnorganizedCloud;
use crate::{Error, Result};

struct Site {
    xy: Point2<f64>,
    index: usize,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.xy
    }
}

/// 2.5D Delaunay mesh of an unorganized cloud.
///
/// Triangulates the xy projection and reuses the 3D points unchanged, so
/// point `i` of the mesh is point `i` of the cloud. Points that repeat an
/// earlier xy position exactly are left out of the triangulation.
pub fn triangulate_unorganized(cloud: &UnorganizedCloud) -> Result<HalfEdgeMesh> {
    let points = &cloud.points;
    if points.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "triangulation needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("cloud contains non-finite points".into()));
    }

    let mut seen = HashMap::with_capacity(points.len());
    let mut sites = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        // -0.0 and 0.0 are the same site.
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if seen.insert(key, index).is_none() {
            sites.push(Site {
                xy: Point2::new(p.x, p.y),
                index,
            });
        }
    }
    let dropped = points.len() - sites.len();
    if dropped > 0 {
        log::warn!("{dropped} points share an xy position with an earlier point and were skipped");
    }

    let dt = DelaunayTriangulation::<Site>::bulk_load(sites)
        .map_err(|e| Error::DegenerateInput(format!("triangulation failed: {e:?}")))?;
    let triangles: Vec<[usize; 3]> = dt
        .inner_faces()
        .map(|f| f.vertices().map(|v| v.data().index))
        .collect();
    if triangles.is_empty() {
        return Err(Error::DegenerateInput(
            "all points are collinear in the xy projection".into(),
        ));
    }
    Ok(mesh_from_triangles(points.clone(), triangles))
}
