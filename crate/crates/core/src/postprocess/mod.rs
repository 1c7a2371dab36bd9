//! Cleanup of extracted polygons in their plane frame: simplification,
//! dilation and erosion by a disk, and area filters.

mod buffer;
mod overlay;
mod simplify;

pub use buffer::{buffer, offset_ring, ARC_SEGMENTS_PER_QUADRANT};
pub use overlay::{union_positive, SNAP};
pub use simplify::{point_segment_distance, simplify, simplify_ring};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{signed_area, Plane, Polygon, Polygon2, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PostprocessParams {
    /// Simplification tolerance.
    pub alpha: f64,
    /// Dilation distance, applied first.
    pub beta_pos: f64,
    /// Erosion distance, applied after dilation.
    pub beta_neg: f64,
    /// Polygons whose shell area is below this are dropped.
    pub gamma: f64,
    /// Holes whose area is below this are dropped.
    pub delta: f64,
}

impl Default for PostprocessParams {
    fn default() -> Self {
        PostprocessParams {
            alpha: 0.0,
            beta_pos: 0.0,
            beta_neg: 0.0,
            gamma: 0.0,
            delta: 0.0,
        }
    }
}

impl PostprocessParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta_pos", self.beta_pos),
            ("beta_neg", self.beta_neg),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// Drops polygons with shell area below `gamma` and holes with area below
/// `delta`. Both comparisons are strict.
pub fn filter_polygons(polys: Vec<Polygon2>, gamma: f64, delta: f64) -> Vec<Polygon2> {
    polys
        .into_iter()
        .filter(|p| signed_area(&p.shell).abs() >= gamma)
        .map(|mut p| {
            p.holes.retain(|h| signed_area(h).abs() >= delta);
            p
        })
        .collect()
}

/// Simplify, dilate by `beta_pos`, erode by `beta_neg`, then filter.
/// Zero distances skip their buffer step.
pub fn run_pipeline(poly: &Polygon2, params: &PostprocessParams) -> Result<Vec<Polygon2>> {
    params.validate()?;
    let simple = simplify(poly, params.alpha)?;
    let grown = if params.beta_pos > 0.0 { buffer(&simple, params.beta_pos) } else { vec![simple] };
    let shrunk = if params.beta_neg > 0.0 {
        grown.iter().flat_map(|p| buffer(p, -params.beta_neg)).collect()
    } else {
        grown
    };
    let kept: Vec<Polygon2> = shrunk.into_iter().filter(|p| signed_area(&p.shell).abs() >= params.gamma).collect();
    Ok(filter_polygons(kept, 0.0, params.delta))
}

/// A polygon with free 2D coordinates in the frame of its plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPolygon {
    pub plane: Plane,
    pub polygon: Polygon2,
}

impl PlanarPolygon {
    /// Projects an index-based polygon into its plane frame.
    pub fn from_polygon(poly: &Polygon, points: &[Vec3]) -> Self {
        PlanarPolygon {
            plane: poly.plane,
            polygon: poly.to_2d(points),
        }
    }

    pub fn shell_3d(&self) -> Vec<Vec3> {
        self.polygon.shell.iter().map(|&p| self.plane.lift(p)).collect()
    }

    pub fn holes_3d(&self) -> Vec<Vec<Vec3>> {
        self.polygon
            .holes
            .iter()
            .map(|h| h.iter().map(|&p| self.plane.lift(p)).collect())
            .collect()
    }
}

/// Runs [`run_pipeline`] on every polygon in parallel, keeping input order.
/// A polygon whose shell collapses during simplification is dropped.
pub fn postprocess_all(polys: &[PlanarPolygon], params: &PostprocessParams) -> Result<Vec<PlanarPolygon>> {
    params.validate()?;
    let per: Vec<Result<Vec<PlanarPolygon>>> = polys
        .par_iter()
        .map(|pp| match run_pipeline(&pp.polygon, params) {
            Ok(out) => Ok(out
                .into_iter()
                .map(|polygon| PlanarPolygon {
                    plane: pp.plane,
                    polygon,
                })
                .collect()),
            Err(Error::DegeneratePolygon(_)) => Ok(Vec::new()),
            Err(e) => Err(e),
        })
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}
