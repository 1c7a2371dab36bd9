//! Dominant plane normals from a sphere histogram of triangle normals.
//!
//! Normals vote into the triangles of a refined icosahedron. Lookups go
//! through a sorted array of cell ids with a fitted index model instead of a
//! spatial tree. The histogram is then flattened into a small image, local
//! maxima are picked there, and nearby maxima are merged.

mod accumulator;
mod icosahedron;
mod peaks;
mod s2;
mod unwrap;

pub use accumulator::{sample_stride, GaCell, GaussianAccumulator, NO_NEIGHBOR};
pub use icosahedron::{build_refined_icosahedron, RefinedIcosahedron, MAX_LEVEL};
pub use peaks::{cluster_peaks, detect_peaks, detect_peaks_on_sphere, Peak};
pub use s2::s2_id;
pub use unwrap::{chart_layout, image_shape, mean_vertex_normals, unwrap_to_image, vertex_values, UnwrappedImage, NO_VERTEX};

use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FastGaParams {
    pub level: u32,
    /// Fraction of normals voted, in `(0, 1]`.
    pub sample_pct: f64,
    /// Peaks must exceed this image value.
    pub v_min: u8,
    /// Peaks closer than this are merged.
    pub d_peak: f64,
    /// Report each peak as the mean of the normals voted around it rather
    /// than the direction of its icosahedron vertex.
    pub refine: bool,
}

impl Default for FastGaParams {
    fn default() -> Self {
        FastGaParams {
            level: 4,
            sample_pct: 1.0,
            v_min: 15,
            d_peak: 0.1,
            refine: true,
        }
    }
}

impl FastGaParams {
    pub fn validate(&self) -> Result<()> {
        if self.level > MAX_LEVEL {
            return Err(Error::InvalidParameter(format!(
                "fastga level must be at most {MAX_LEVEL}, got {}",
                self.level
            )));
        }
        if !(self.sample_pct > 0.0 && self.sample_pct <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sample_pct must lie in (0, 1], got {}",
                self.sample_pct
            )));
        }
        if !(self.d_peak >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "d_peak must be non-negative, got {}",
                self.d_peak
            )));
        }
        Ok(())
    }
}

/// Votes `normals` into a cleared accumulator and returns the merged peaks
/// together with the image they were found in.
pub fn find_dominant_normals(
    ga: &mut GaussianAccumulator,
    normals: &[Vec3],
    params: &FastGaParams,
) -> Result<(Vec<Peak>, UnwrappedImage)> {
    params.validate()?;
    if ga.level() != params.level {
        return Err(Error::InvalidParameter(format!(
            "accumulator level {} does not match requested level {}",
            ga.level(),
            params.level
        )));
    }
    ga.clear();
    ga.integrate_normals(normals, params.sample_pct);
    let mut image = unwrap_to_image(ga);
    if params.refine {
        image.vertex_normals = mean_vertex_normals(ga);
    }
    let peaks = cluster_peaks(&detect_peaks(&image, params.v_min), params.d_peak);
    Ok((peaks, image))
}
