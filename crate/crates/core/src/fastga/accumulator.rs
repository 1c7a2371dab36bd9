use rayon::prelude::*;

use super::icosahedron::{build_refined_icosahedron, RefinedIcosahedron};
use super::s2::s2_id_unit;
use crate::geometry::Vec3;
use crate::Result;

/// Padding entry in a neighbors row.
pub const NO_NEIGHBOR: usize = usize::MAX;

/// One histogram bucket: a triangle of the refined icosahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaCell {
    pub normal: Vec3,
    pub s2id: u64,
    pub count: u64,
    /// Sum of the unit normals voted into the cell.
    pub normal_sum: Vec3,
}

/// Sphere histogram with a fitted id-to-index model for fast lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianAccumulator {
    /// Ascending by `s2id`.
    pub cells: Vec<GaCell>,
    /// Cells sharing at least one vertex with each cell, ascending, padded
    /// with [`NO_NEIGHBOR`].
    pub neighbors: Vec<[usize; 12]>,
    pub model_slope: f64,
    pub model_intercept: f64,
    /// Every cell satisfies `window_lo <= index - predict(s2id) <= window_hi`.
    pub window_lo: i64,
    pub window_hi: i64,
    pub(crate) ico: RefinedIcosahedron,
    /// Cell index of each icosahedron triangle.
    pub(crate) cell_of_triangle: Vec<usize>,
}

impl GaussianAccumulator {
    /// Builds an empty accumulator at refinement `level`.
    pub fn new(level: u32) -> Result<Self> {
        let ico = build_refined_icosahedron(level)?;
        let mut order: Vec<(u64, usize)> = (0..ico.triangles.len())
            .map(|t| (s2_id_unit(ico.triangle_center(t)), t))
            .collect();
        order.sort_unstable();

        let mut cell_of_triangle = vec![0; ico.triangles.len()];
        let cells: Vec<GaCell> = order
            .iter()
            .enumerate()
            .map(|(i, &(s2id, t))| {
                cell_of_triangle[t] = i;
                GaCell {
                    normal: ico.triangle_center(t),
                    s2id,
                    count: 0,
                    normal_sum: Vec3::ZERO,
                }
            })
            .collect();

        let around = ico.vertex_triangles();
        let neighbors = order
            .iter()
            .map(|&(_, t)| {
                let mut near: Vec<usize> = ico.triangles[t]
                    .iter()
                    .flat_map(|&v| around[v].iter().copied())
                    .filter(|&u| u != t)
                    .map(|u| cell_of_triangle[u])
                    .collect();
                near.sort_unstable();
                near.dedup();
                let mut row = [NO_NEIGHBOR; 12];
                row[..near.len()].copy_from_slice(&near);
                row
            })
            .collect();

        let (slope, intercept) = fit_line(&cells);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, c) in cells.iter().enumerate() {
            let r = i as f64 - (slope * c.s2id as f64 + intercept);
            lo = lo.min(r);
            hi = hi.max(r);
        }

        Ok(GaussianAccumulator {
            cells,
            neighbors,
            model_slope: slope,
            model_intercept: intercept,
            window_lo: lo.floor() as i64,
            window_hi: hi.ceil() as i64,
            ico,
            cell_of_triangle,
        })
    }

    pub fn level(&self) -> u32 {
        self.ico.level
    }

    pub fn icosahedron(&self) -> &RefinedIcosahedron {
        &self.ico
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.cells.iter().map(|c| c.count).collect()
    }

    pub fn clear(&mut self) {
        for c in &mut self.cells {
            c.count = 0;
            c.normal_sum = Vec3::ZERO;
        }
    }

    /// Inclusive index range searched for `id`.
    pub fn search_window(&self, id: u64) -> (usize, usize) {
        let predicted = self.model_slope * id as f64 + self.model_intercept;
        let last = (self.cells.len() - 1) as f64;
        let lo = (predicted + self.window_lo as f64).floor().clamp(0.0, last);
        let hi = (predicted + self.window_hi as f64).ceil().clamp(0.0, last);
        (lo as usize, hi as usize)
    }

    /// Cell whose normal is closest to unit vector `n`, found through the
    /// id model, a windowed binary search and a scan of the 1-ring.
    pub fn find_cell_index(&self, n: Vec3) -> usize {
        let id = s2_id_unit(n);
        let (lo, hi) = self.search_window(id);
        let window = &self.cells[lo..=hi];

        // Branchless lower bound: first position with s2id >= id.
        let mut base = 0usize;
        let mut size = window.len();
        while size > 1 {
            let half = size / 2;
            base = if window[base + half].s2id < id { base + half } else { base };
            size -= half;
        }
        base += usize::from(window[base].s2id < id);
        // Both cells whose ids bracket `id` are candidates; each is scanned
        // together with its ring of neighbors.
        let below = (base > 0).then(|| lo + base - 1);
        let above = (base < window.len()).then(|| lo + base);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for k in below.into_iter().chain(above) {
            let d = self.cells[k].normal.distance(n);
            if d < best_d {
                best = k;
                best_d = d;
            }
            for &j in &self.neighbors[k] {
                if j == NO_NEIGHBOR {
                    break;
                }
                let d = self.cells[j].normal.distance(n);
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
        }
        best
    }

    /// Exhaustive nearest cell; the reference for [`find_cell_index`].
    ///
    /// [`find_cell_index`]: GaussianAccumulator::find_cell_index
    pub fn find_cell_index_exact(&self, n: Vec3) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.cells.iter().enumerate() {
            let d = c.normal.distance(n);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// Votes every `stride`-th normal into the histogram, where
    /// `stride = round(1 / sample_pct)`. NaN and zero normals are skipped.
    /// Returns the number of votes cast.
    pub fn integrate_normals(&mut self, normals: &[Vec3], sample_pct: f64) -> usize {
        let stride = sample_stride(sample_pct);
        let this = &*self;
        // Lookups run in parallel; the sums run in input order so they do not
        // depend on the thread count.
        let hits: Vec<(usize, Vec3)> = normals
            .par_iter()
            .step_by(stride)
            .with_min_len(4096)
            .filter_map(|n| {
                let len = n.norm();
                (len > 0.0 && len.is_finite()).then(|| {
                    let unit = *n / len;
                    (this.find_cell_index(unit), unit)
                })
            })
            .collect();
        for &(c, unit) in &hits {
            self.cells[c].count += 1;
            self.cells[c].normal_sum += unit;
        }
        hits.len()
    }
}

/// Sampling stride for a sampling fraction in `(0, 1]`.
pub fn sample_stride(sample_pct: f64) -> usize {
    if !(sample_pct > 0.0) {
        return usize::MAX;
    }
    ((1.0 / sample_pct).round() as usize).max(1)
}

/// Least-squares line through `(s2id, index)`.
fn fit_line(cells: &[GaCell]) -> (f64, f64) {
    let n = cells.len() as f64;
    let mean_x = cells.iter().map(|c| c.s2id as f64).sum::<f64>() / n;
    let mean_y = (n - 1.0) / 2.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, c) in cells.iter().enumerate() {
        let dx = c.s2id as f64 - mean_x;
        sxx += dx * dx;
        sxy += dx * (i as f64 - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, mean_y - slope * mean_x)
}
