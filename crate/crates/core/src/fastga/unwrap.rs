use super::accumulator::GaussianAccumulator;
use super::icosahedron::{base_face_index, RefinedIcosahedron, StripFace};
use crate::geometry::Vec3;

/// Pixel with no vertex behind it.
pub const NO_VERTEX: usize = usize::MAX;

/// Five-chart flat image of the accumulator's vertex values.
///
/// Chart `i` covers the strip of four base faces between the `i`-th and
/// `(i+1)`-th upper vertices. In lattice coordinates `(s, t)` with
/// `n = 2^level`, the strip is the parallelogram `[0, n] x [0, 2n]`; pixel
/// `(s, t)` of chart `i` sits at row `i * (n + 2) + s`, column `t + 1`. The
/// row `s = n + 1` and column `t = -1` are filled from the neighboring strip.
#[derive(Debug, Clone, PartialEq)]
pub struct UnwrappedImage {
    pub rows: usize,
    pub cols: usize,
    /// Row-major values in `[0, 255]`.
    pub pixels: Vec<f64>,
    /// Icosahedron vertex shown at each pixel, or [`NO_VERTEX`].
    pub pixel_vertex: Vec<usize>,
    /// Unit normal of every icosahedron vertex.
    pub vertex_normals: Vec<Vec3>,
}

impl UnwrappedImage {
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    /// Pixel values rounded into bytes, row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().map(|&p| p.round().clamp(0.0, 255.0) as u8).collect()
    }
}

/// Image dimensions `(rows, cols)` at a refinement level.
pub fn image_shape(level: u32) -> (usize, usize) {
    let n = 1usize << level;
    (5 * (n + 2), 2 * n + 2)
}

/// Which vertex every pixel shows. Depends only on the level.
pub fn chart_layout(ico: &RefinedIcosahedron) -> Vec<usize> {
    let n = 1i64 << ico.level;
    let (rows, cols) = image_shape(ico.level);
    let mut layout = vec![NO_VERTEX; rows * cols];
    for chart in 0..5 {
        let prev = (chart + 4) % 5;
        // Strip faces, then the three faces unfolded across the s = n and
        // t = 0 edges. Corner positions follow each face's corner order.
        let faces = [
            (chart, StripFace::Top, [(0, 0), (n, 0), (0, n)]),
            (chart, StripFace::Upper, [(n, 0), (n, n), (0, n)]),
            (chart, StripFace::Lower, [(0, n), (n, n), (0, 2 * n)]),
            (chart, StripFace::Bottom, [(n, n), (n, 2 * n), (0, 2 * n)]),
            (prev, StripFace::Lower, [(n, 0), (2 * n, 0), (n, n)]),
            (prev, StripFace::Bottom, [(2 * n, n), (n, 2 * n), (n, n)]),
            (prev, StripFace::Top, [(0, 0), (n, -n), (n, 0)]),
        ];
        for (strip, kind, corners) in faces {
            let f = base_face_index(strip, kind);
            for a in 0..=n {
                for b in 0..=n - a {
                    let c = n - a - b;
                    let s = (a * corners[0].0 + b * corners[1].0 + c * corners[2].0) / n;
                    let t = (a * corners[0].1 + b * corners[1].1 + c * corners[2].1) / n;
                    if !(0..=n + 1).contains(&s) || !(-1..=2 * n).contains(&t) {
                        continue;
                    }
                    let v = ico.lattice[&(f, [a as u32, b as u32, c as u32])];
                    let row = chart * (n as usize + 2) + s as usize;
                    layout[row * cols + (t + 1) as usize] = v;
                }
            }
        }
    }
    layout
}

/// Per-vertex values: the mean of the normalized counts of the cells
/// around each vertex, with the busiest cell at 255.
pub fn vertex_values(ga: &GaussianAccumulator) -> Vec<f64> {
    let max = ga.cells.iter().map(|c| c.count).max().unwrap_or(0);
    let scale = if max > 0 { 255.0 / max as f64 } else { 0.0 };
    let around = ga.ico.vertex_triangles();
    around
        .iter()
        .map(|tris| {
            let sum: f64 = tris
                .iter()
                .map(|&t| ga.cells[ga.cell_of_triangle[t]].count as f64 * scale)
                .sum();
            sum / tris.len() as f64
        })
        .collect()
}

/// Per-vertex mean of the normals voted into the cells around each vertex.
/// Vertices with no votes nearby keep their own direction.
pub fn mean_vertex_normals(ga: &GaussianAccumulator) -> Vec<Vec3> {
    ga.ico
        .vertex_triangles()
        .iter()
        .zip(&ga.ico.vertices)
        .map(|(tris, &vertex)| {
            let sum = tris
                .iter()
                .fold(Vec3::ZERO, |s, &t| s + ga.cells[ga.cell_of_triangle[t]].normal_sum);
            if sum.norm() > 0.0 {
                sum.normalized()
            } else {
                vertex
            }
        })
        .collect()
}

/// Unwraps the accumulator histogram into a 2D image.
pub fn unwrap_to_image(ga: &GaussianAccumulator) -> UnwrappedImage {
    let (rows, cols) = image_shape(ga.level());
    let pixel_vertex = chart_layout(&ga.ico);
    let values = vertex_values(ga);
    let pixels = pixel_vertex
        .iter()
        .map(|&v| if v == NO_VERTEX { 0.0 } else { values[v] })
        .collect();
    UnwrappedImage {
        rows,
        cols,
        pixels,
        pixel_vertex,
        vertex_normals: ga.ico.vertices.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_four_is_ninety_by_thirty_four() {
        assert_eq!(image_shape(4), (90, 34));
        let ga = GaussianAccumulator::new(4).unwrap();
        let img = unwrap_to_image(&ga);
        assert_eq!((img.rows, img.cols), (90, 34));
        assert_eq!(img.pixels.len(), 90 * 34);
    }

    #[test]
    fn owned_pixels_cover_each_vertex_once() {
        for level in 1..=4 {
            let ga = GaussianAccumulator::new(level).unwrap();
            let n = 1usize << level;
            let layout = chart_layout(&ga.ico);
            let (_, cols) = image_shape(level);
            let mut owned = vec![0; ga.ico.vertices.len()];
            for chart in 0..5 {
                for s in 1..=n {
                    for t in 0..2 * n {
                        let v = layout[(chart * (n + 2) + s) * cols + t + 1];
                        assert_ne!(v, NO_VERTEX);
                        owned[v] += 1;
                    }
                }
            }
            let (north, south) = (ga.ico.labels.north, ga.ico.labels.south);
            for (v, &k) in owned.iter().enumerate() {
                let expect = usize::from(v != north && v != south);
                assert_eq!(k, expect, "vertex {v} at level {level}");
            }
            // Only three corners per chart are left empty.
            assert_eq!(layout.iter().filter(|&&v| v == NO_VERTEX).count(), 15);
        }
    }

    #[test]
    fn neighboring_pixels_are_nearby_vertices() {
        // Lattice steps along s, t and the (1, -1) diagonal are mesh edges.
        // Two padding pixels can sit on opposite sides of a base vertex
        // where five faces meet, so such pairs are skipped.
        let ga = GaussianAccumulator::new(3).unwrap();
        let adj = ga.ico.vertex_neighbors();
        let layout = chart_layout(&ga.ico);
        let (rows, cols) = image_shape(3);
        let n = 8;
        for r in 0..rows {
            for c in 0..cols {
                let v = layout[r * cols + c];
                if v == NO_VERTEX {
                    continue;
                }
                for (dr, dc) in [(1, 0), (0, 1), (1, -1)] {
                    let (r2, c2) = (r + dr, (c as isize + dc) as usize);
                    if r2 >= rows || c2 >= cols || r2 / (n + 2) != r / (n + 2) {
                        continue;
                    }
                    let padding = |r: usize, c: usize| r % (n + 2) == n + 1 || c == 0;
                    if padding(r, c) && padding(r2, c2) {
                        continue;
                    }
                    let w = layout[r2 * cols + c2];
                    if w != NO_VERTEX {
                        assert!(adj[v].contains(&w), "pixels ({r},{c}) and ({r2},{c2})");
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_counts_give_a_flat_image() {
        let mut ga = GaussianAccumulator::new(2).unwrap();
        for c in &mut ga.cells {
            c.count = 7;
        }
        let img = unwrap_to_image(&ga);
        for (p, &v) in img.pixels.iter().zip(&img.pixel_vertex) {
            if v != NO_VERTEX {
                assert!((p - 255.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hot_cell_lights_its_three_vertices() {
        let mut ga = GaussianAccumulator::new(3).unwrap();
        let t = 100;
        ga.cells[ga.cell_of_triangle[t]].count = 9;
        let img = unwrap_to_image(&ga);
        let hot = ga.ico.triangles[t];
        for (p, &v) in img.pixels.iter().zip(&img.pixel_vertex) {
            assert_eq!(*p > 0.0, hot.contains(&v));
        }
    }
}
