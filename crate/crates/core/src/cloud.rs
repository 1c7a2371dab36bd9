//! Point cloud containers.

use crate::geometry::Vec3;
use crate::{Error, Result};

/// Arbitrarily ordered points. All points are finite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UnorganizedCloud {
    pub points: Vec<Vec3>,
}

impl UnorganizedCloud {
    /// Builds a cloud, dropping any point with a non-finite component.
    pub fn new(points: Vec<Vec3>) -> Self {
        UnorganizedCloud {
            points: points.into_iter().filter(|p| p.is_finite()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// An `rows x cols` grid of points in row-major order. Missing measurements
/// stay in place as [`Vec3::NAN`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrganizedCloud {
    rows: usize,
    cols: usize,
    points: Vec<Vec3>,
}

impl OrganizedCloud {
    pub fn new(rows: usize, cols: usize, points: Vec<Vec3>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DegenerateInput(format!(
                "organized cloud must have positive dimensions, got {rows}x{cols}"
            )));
        }
        if points.len() != rows * cols {
            return Err(Error::DegenerateInput(format!(
                "organized cloud {rows}x{cols} needs {} points, got {}",
                rows * cols,
                points.len()
            )));
        }
        let points = points
            .into_iter()
            .map(|p| if p.is_finite() { p } else { Vec3::NAN })
            .collect();
        Ok(OrganizedCloud { rows, cols, points })
    }

    /// A grid of `f(u, v)` values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Vec3) -> Result<Self> {
        let mut points = Vec::with_capacity(rows * cols);
        for u in 0..rows {
            for v in 0..cols {
                points.push(f(u, v));
            }
        }
        Self::new(rows, cols, points)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn index(&self, u: usize, v: usize) -> usize {
        u * self.cols + v
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Vec3 {
        self.points[u * self.cols + v]
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn points_mut(&mut self) -> &mut [Vec3] {
        &mut self.points
    }

    pub fn into_points(self) -> Vec<Vec3> {
        self.points
    }

    pub fn valid_count(&self) -> usize {
        self.points.iter().filter(|p| !p.is_nan()).count()
    }
}
