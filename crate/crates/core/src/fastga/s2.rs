//! Locality-preserving 64-bit ids for unit vectors.
//!
//! A direction is projected onto the face of the enclosing cube it points
//! at, the face coordinates are warped to even out cell areas, and the
//! resulting 30-bit-per-axis cell is numbered along a Hilbert curve. The
//! face index occupies the top bits. Faces are ordered +x, +y, +z, -x, -y,
//! -z, so consecutive faces share an edge.

use crate::geometry::Vec3;
use crate::{Error, Result};

const BITS: u32 = 30;
const SIDE: u64 = 1 << BITS;

/// Face index and face coordinates in `[-1, 1]`.
fn face_uv(n: Vec3) -> (u64, f64, f64) {
    let (ax, ay, az) = (n.x.abs(), n.y.abs(), n.z.abs());
    let face = if ax >= ay && ax >= az {
        if n.x > 0.0 { 0 } else { 3 }
    } else if ay >= az {
        if n.y > 0.0 { 1 } else { 4 }
    } else if n.z > 0.0 {
        2
    } else {
        5
    };
    let (u, v) = match face {
        0 => (n.y / n.x, n.z / n.x),
        1 => (-n.x / n.y, n.z / n.y),
        2 => (-n.x / n.z, -n.y / n.z),
        3 => (n.z / n.x, n.y / n.x),
        4 => (n.z / n.y, -n.x / n.y),
        _ => (-n.y / n.z, -n.x / n.z),
    };
    (face, u, v)
}

/// Quadratic area-equalizing warp from `[-1, 1]` to `[0, 1]`.
fn uv_to_st(u: f64) -> f64 {
    if u >= 0.0 {
        0.5 * (1.0 + 3.0 * u).sqrt()
    } else {
        1.0 - 0.5 * (1.0 - 3.0 * u).sqrt()
    }
}

fn st_to_cell(s: f64) -> u64 {
    ((s * SIDE as f64) as u64).min(SIDE - 1)
}

/// Position of cell `(x, y)` along the Hilbert curve filling a
/// `2^BITS x 2^BITS` grid.
fn hilbert_d(mut x: u64, mut y: u64) -> u64 {
    let mut d = 0u64;
    let mut s = SIDE >> 1;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        // Rotate the quadrant so the sub-curve is in canonical orientation.
        if ry == 0 {
            if rx == 1 {
                x = SIDE - 1 - x;
                y = SIDE - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// 64-bit id of direction `n`. Non-unit input is normalized; the zero
/// vector and non-finite input are rejected.
pub fn s2_id(n: Vec3) -> Result<u64> {
    let len = n.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::InvalidParameter(format!("cannot index direction {n:?}")));
    }
    Ok(s2_id_unit(n / len))
}

/// [`s2_id`] for an input already known to be finite and non-zero.
#[inline]
pub(crate) fn s2_id_unit(n: Vec3) -> u64 {
    let (face, u, v) = face_uv(n);
    let i = st_to_cell(uv_to_st(u));
    let j = st_to_cell(uv_to_st(v));
    (face << 60) | hilbert_d(i, j)
}
