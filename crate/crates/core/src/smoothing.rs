//! Grid-native smoothing for organized point clouds.
//!
//! Both filters exploit the implicit mesh of the grid: neighbors are found by
//! index arithmetic, so no adjacency structure is built.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::OrganizedCloud;
use crate::geometry::{triangle_normal, Vec3};
use crate::mesh::{quad_to_gid, TriMap, NO_TRIANGLE};
use crate::{Error, Result};

/// Vertex Laplacian parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaplacianParams {
    pub lambda: f64,
    pub kernel_size: usize,
    pub iterations: usize,
}

impl Default for LaplacianParams {
    fn default() -> Self {
        LaplacianParams {
            lambda: 1.0,
            kernel_size: 3,
            iterations: 2,
        }
    }
}

impl LaplacianParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "laplacian lambda must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        check_kernel(self.kernel_size)?;
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("laplacian iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Bilateral normal filter parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BilateralParams {
    /// Centroid distance scale, meters.
    pub sigma_length: f64,
    /// Normal difference scale.
    pub sigma_angle: f64,
    pub kernel_size: usize,
    pub iterations: usize,
}

impl Default for BilateralParams {
    fn default() -> Self {
        BilateralParams {
            sigma_length: 0.1,
            sigma_angle: 0.1,
            kernel_size: 3,
            iterations: 2,
        }
    }
}

impl BilateralParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_length > 0.0 && self.sigma_angle > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bilateral scales must be positive, got {} and {}",
                self.sigma_length, self.sigma_angle
            )));
        }
        check_kernel(self.kernel_size)?;
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("bilateral iterations must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_kernel(k: usize) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "kernel size must be odd and at least 3, got {k}"
        )));
    }
    Ok(())
}

/// Inverse-distance weighted Laplacian smoothing of grid vertices.
///
/// The outermost ring of the grid and missing vertices are copied through
/// unchanged. Grids smaller than the kernel are returned as is.
pub fn laplacian_filter_opc(opc: &OrganizedCloud, params: &LaplacianParams) -> Result<OrganizedCloud> {
    params.validate()?;
    let (rows, cols) = (opc.rows(), opc.cols());
    let mut current = opc.points().to_vec();
    if rows < params.kernel_size || cols < params.kernel_size {
        return OrganizedCloud::new(rows, cols, current);
    }
    let r = (params.kernel_size / 2) as isize;
    let mut next = current.clone();
    for _ in 0..params.iterations {
        next.par_chunks_mut(cols).enumerate().for_each(|(u, row)| {
            if u == 0 || u + 1 == rows {
                row.copy_from_slice(&current[u * cols..(u + 1) * cols]);
                return;
            }
            for v in 0..cols {
                let vi = current[u * cols + v];
                if v == 0 || v + 1 == cols || vi.is_nan() {
                    row[v] = vi;
                    continue;
                }
                let mut sum = Vec3::ZERO;
                let mut total = 0.0;
                for du in -r..=r {
                    for dv in -r..=r {
                        if du == 0 && dv == 0 {
                            continue;
                        }
                        let (nu, nv) = (u as isize + du, v as isize + dv);
                        if nu < 0 || nv < 0 || nu >= rows as isize || nv >= cols as isize {
                            continue;
                        }
                        let vj = current[nu as usize * cols + nv as usize];
                        if vj.is_nan() {
                            continue;
                        }
                        let d = vi.distance(vj);
                        if d == 0.0 {
                            continue;
                        }
                        let w = 1.0 / d;
                        sum += (vj - vi) * w;
                        total += w;
                    }
                }
                row[v] = if total > 0.0 {
                    vi + sum * (params.lambda / total)
                } else {
                    vi
                };
            }
        });
        std::mem::swap(&mut current, &mut next);
    }
    OrganizedCloud::new(rows, cols, current)
}

/// Centroid and normal of every triangle of the fully connected grid mesh,
/// indexed by global id.
#[derive(Debug, Clone, PartialEq)]
pub struct FcTriangleData {
    pub rows: usize,
    pub cols: usize,
    pub centroids: Vec<Vec3>,
    pub normals: Vec<Vec3>,
}

impl FcTriangleData {
    #[inline]
    fn gid(&self, u: usize, v: usize, k: usize) -> usize {
        quad_to_gid(u, v, k, self.cols)
    }
}

/// Builds [`FcTriangleData`] for an organized cloud. A triangle with a
/// missing vertex has NaN centroid and normal.
pub fn compute_fc_triangle_data(opc: &OrganizedCloud) -> Result<FcTriangleData> {
    let (rows, cols) = (opc.rows(), opc.cols());
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateInput(format!(
            "organized cloud must be at least 2x2, got {rows}x{cols}"
        )));
    }
    let quads = (rows - 1) * (cols - 1);
    let mut centroids = vec![Vec3::NAN; 2 * quads];
    let mut normals = vec![Vec3::NAN; 2 * quads];
    centroids
        .par_chunks_mut(2)
        .zip(normals.par_chunks_mut(2))
        .enumerate()
        .for_each(|(q, (c, n))| {
            let (u, v) = (q / (cols - 1), q % (cols - 1));
            let p1 = opc.get(u, v);
            let p2 = opc.get(u, v + 1);
            let p3 = opc.get(u + 1, v + 1);
            let p4 = opc.get(u + 1, v);
            for (k, [a, b, cc]) in [[p3, p2, p1], [p1, p4, p3]].into_iter().enumerate() {
                if a.is_nan() || b.is_nan() || cc.is_nan() {
                    continue;
                }
                c[k] = (a + b + cc) / 3.0;
                n[k] = triangle_normal(a, b, cc);
            }
        });
    Ok(FcTriangleData {
        rows,
        cols,
        centroids,
        normals,
    })
}

/// Bilateral normal smoothing on the fully connected grid mesh. Vertices are
/// not moved.
pub fn bilateral_filter_fc(opc: &OrganizedCloud, params: &BilateralParams) -> Result<FcTriangleData> {
    params.validate()?;
    let mut data = compute_fc_triangle_data(opc)?;
    let (qr, qc) = (data.rows - 1, data.cols - 1);
    let r = (params.kernel_size / 2) as isize;
    let inv_c = 1.0 / (2.0 * params.sigma_length * params.sigma_length);
    let inv_s = 1.0 / (2.0 * params.sigma_angle * params.sigma_angle);
    let mut next = data.normals.clone();
    for _ in 0..params.iterations {
        let current = &data;
        next.par_chunks_mut(2).enumerate().for_each(|(q, out)| {
            let (u, v) = (q / qc, q % qc);
            for k in 0..2 {
                let gi = current.gid(u, v, k);
                let (ci, ni) = (current.centroids[gi], current.normals[gi]);
                if ci.is_nan() || ni.is_nan() {
                    out[k] = ni;
                    continue;
                }
                let mut sum = Vec3::ZERO;
                let mut total = 0.0;
                for du in -r..=r {
                    for dv in -r..=r {
                        let (nu, nv) = (u as isize + du, v as isize + dv);
                        if nu < 0 || nv < 0 || nu >= qr as isize || nv >= qc as isize {
                            continue;
                        }
                        for kj in 0..2 {
                            if du == 0 && dv == 0 && kj == k {
                                continue;
                            }
                            let gj = current.gid(nu as usize, nv as usize, kj);
                            let (cj, nj) = (current.centroids[gj], current.normals[gj]);
                            if cj.is_nan() || nj.is_nan() {
                                continue;
                            }
                            let w = (-(ci - cj).norm_squared() * inv_c).exp()
                                * (-(ni - nj).norm_squared() * inv_s).exp();
                            sum += nj * w;
                            total += w;
                        }
                    }
                }
                // With no usable neighbor the input normal is kept.
                out[k] = if total > 0.0 {
                    let n = (sum / total).normalized();
                    if n.is_nan() {
                        ni
                    } else {
                        n
                    }
                } else {
                    ni
                };
            }
        });
        std::mem::swap(&mut data.normals, &mut next);
    }
    Ok(data)
}

/// Bilateral smoothing followed by a gather of the normals that belong to
/// emitted mesh triangles, in mesh order.
pub fn bilateral_filter_opc(
    opc: &OrganizedCloud,
    trimap: &TriMap,
    params: &BilateralParams,
) -> Result<Vec<Vec3>> {
    let data = bilateral_filter_fc(opc, params)?;
    Ok(gather_normals(&data, trimap))
}

/// Mesh-ordered normals from fully connected grid data.
pub fn gather_normals(data: &FcTriangleData, trimap: &TriMap) -> Vec<Vec3> {
    let count = trimap.entries().iter().filter(|&&t| t != NO_TRIANGLE).count();
    let mut out = vec![Vec3::NAN; count];
    for (gid, &t) in trimap.entries().iter().enumerate() {
        if t != NO_TRIANGLE {
            out[t] = data.normals[gid];
        }
    }
    out
}
