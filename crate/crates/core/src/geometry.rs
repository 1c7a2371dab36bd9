//! Shared geometric primitives: 3-vectors, planes, rings and polygons.
//!
//! Everything here is a plain value type. Invalid measurements are carried as
//! NaN-valued vectors rather than being removed, which keeps organized grids
//! aligned with their image indices.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or direction in 3D, double precision.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A 2D coordinate in some plane's projection frame.
pub type Point2 = [f64; 2];

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);
    /// The invalid marker: all three components quiet NaN.
    pub const NAN: Vec3 = Vec3::new(f64::NAN, f64::NAN, f64::NAN);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; NaN for the zero vector.
    #[inline]
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            self / n
        } else {
            Vec3::NAN
        }
    }

    /// True if any component is NaN.
    #[inline]
    pub fn is_nan(self) -> bool {
        self.x.is_nan() || self.y.is_nan() || self.z.is_nan()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::from_array(a)
    }
}

/// Above this |n·z| the in-plane basis is seeded from the y axis instead.
const BASIS_SWITCH: f64 = 0.9;

/// A geometric plane: unit normal plus one point on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vec3,
    pub point: Vec3,
}

impl Plane {
    /// Builds a plane, normalizing `normal`.
    pub fn new(normal: Vec3, point: Vec3) -> Self {
        Plane {
            normal: normal.normalized(),
            point,
        }
    }

    /// Orthonormal in-plane axes `(u, v)` with `u × v = normal`.
    ///
    /// `u = normalize(normal × e)` where `e` is +z, or +y when the normal is
    /// within ~25° of the z axis.
    pub fn basis(&self) -> (Vec3, Vec3) {
        let n = self.normal;
        let seed = if n.z.abs() > BASIS_SWITCH { Vec3::Y } else { Vec3::Z };
        let u = n.cross(seed).normalized();
        let v = n.cross(u);
        (u, v)
    }

    /// Maps a 2D projection coordinate back onto the plane.
    pub fn lift(&self, p: Point2) -> Vec3 {
        let (u, v) = self.basis();
        self.point + u * p[0] + v * p[1]
    }
}

/// Projects points into the plane's 2D frame, origin at `plane.point`.
pub fn project_to_plane(points: &[Vec3], plane: &Plane) -> Vec<Point2> {
    let projector = PlaneProjector::new(plane);
    points.iter().map(|&p| projector.project(p)).collect()
}

/// Cached basis for repeated projections onto one plane.
#[derive(Debug, Clone, Copy)]
pub struct PlaneProjector {
    origin: Vec3,
    u: Vec3,
    v: Vec3,
}

impl PlaneProjector {
    pub fn new(plane: &Plane) -> Self {
        let (u, v) = plane.basis();
        PlaneProjector {
            origin: plane.point,
            u,
            v,
        }
    }

    #[inline]
    pub fn project(&self, p: Vec3) -> Point2 {
        let d = p - self.origin;
        [d.dot(self.u), d.dot(self.v)]
    }
}

/// Signed distance of `p` from the plane, positive on the normal side.
#[inline]
pub fn point_to_plane_distance(p: Vec3, plane: &Plane) -> f64 {
    (p - plane.point).dot(plane.normal)
}

/// Unit normal of triangle `(a, b, c)`, counter-clockwise when viewed
/// against the normal. Zero-area triangles give [`Vec3::NAN`].
#[inline]
pub fn triangle_normal(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    (b - a).cross(c - a).normalized()
}

/// Closed ring of point indices; the last index connects back to the first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinearRing {
    pub indices: Vec<usize>,
}

impl LinearRing {
    pub fn new(indices: Vec<usize>) -> Self {
        LinearRing { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A polygon over mesh point indices: one shell, any number of holes, and
/// the plane whose projection defines its 2D geometry.
///
/// Shells are counter-clockwise and holes clockwise in that projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub shell: LinearRing,
    pub holes: Vec<LinearRing>,
    pub plane: Plane,
}

impl Polygon {
    /// 2D coordinates of the shell and holes in the plane frame.
    pub fn to_2d(&self, points: &[Vec3]) -> Polygon2 {
        let proj = PlaneProjector::new(&self.plane);
        let ring = |r: &LinearRing| r.indices.iter().map(|&i| proj.project(points[i])).collect();
        Polygon2 {
            shell: ring(&self.shell),
            holes: self.holes.iter().map(ring).collect(),
        }
    }
}

/// Coordinate polygon in a plane frame; the working type for post-processing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polygon2 {
    pub shell: Vec<Point2>,
    pub holes: Vec<Vec<Point2>>,
}

impl Polygon2 {
    pub fn new(shell: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Self {
        Polygon2 { shell, holes }
    }

    /// Shell area minus hole areas.
    pub fn area(&self) -> f64 {
        signed_area(&self.shell).abs() - self.holes.iter().map(|h| signed_area(h).abs()).sum::<f64>()
    }
}

/// Shoelace area of a closed ring; positive when counter-clockwise.
pub fn signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

/// Even-odd point-in-ring test; points exactly on the boundary are unspecified.
pub fn point_in_ring(p: Point2, ring: &[Point2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut impl Rng) -> Vec3 {
        loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v / n;
            }
        }
    }

    fn random_point(rng: &mut impl Rng) -> Vec3 {
        Vec3::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        )
    }

    fn dist2(a: Point2, b: Point2) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }

    #[test]
    fn projection_of_xy_points_is_isometric() {
        let plane = Plane::new(Vec3::Z, Vec3::ZERO);
        let pts = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(3.0, 4.0, 0.0),
            Vec3::new(-1.5, 2.0, 0.0),
        ];
        let proj = project_to_plane(&pts, &plane);
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert!((dist2(proj[i], proj[j]) - pts[i].distance(pts[j])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_point_projects_to_origin() {
        let plane = Plane::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, -1.0, 2.0));
        let p = project_to_plane(&[plane.point], &plane)[0];
        assert_eq!(p, [0.0, 0.0]);
    }

    #[test]
    fn projected_distances_match_normal_subtraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let plane = Plane::new(random_unit(&mut rng), random_point(&mut rng));
            let pts: Vec<Vec3> = (0..3).map(|_| random_point(&mut rng)).collect();
            // Independent route: drop the normal component in 3D.
            let flat: Vec<Vec3> = pts
                .iter()
                .map(|&p| p - plane.normal * (p - plane.point).dot(plane.normal))
                .collect();
            let proj = project_to_plane(&pts, &plane);
            for i in 0..3 {
                for j in 0..3 {
                    let d3 = flat[i].distance(flat[j]);
                    assert!((dist2(proj[i], proj[j]) - d3).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn project_then_lift_recovers_in_plane_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let plane = Plane::new(random_unit(&mut rng), random_point(&mut rng));
            let p = random_point(&mut rng);
            let flat = p - plane.normal * point_to_plane_distance(p, &plane);
            let lifted = plane.lift(project_to_plane(&[p], &plane)[0]);
            assert!(lifted.distance(flat) < 1e-9);
        }
    }

    #[test]
    fn basis_is_right_handed_near_switch() {
        for &nz in &[0.0, 0.5, 0.89, 0.9, 0.91, 1.0, -1.0, -0.95] {
            let nx = (1.0f64 - nz * nz).max(0.0).sqrt();
            let plane = Plane::new(Vec3::new(nx, 0.0, nz), Vec3::ZERO);
            let (u, v) = plane.basis();
            assert!((u.norm() - 1.0).abs() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(u.cross(v).distance(plane.normal) < 1e-12);
        }
    }

    #[test]
    fn plane_distance_basics() {
        let plane = Plane::new(Vec3::new(0.0, 0.6, 0.8), Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(point_to_plane_distance(plane.point, &plane), 0.0);
        let p = plane.point + plane.normal * 2.0;
        assert!((point_to_plane_distance(p, &plane) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn plane_distance_matches_sampled_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let plane = Plane::new(random_unit(&mut rng), random_point(&mut rng));
            let p = random_point(&mut rng);
            let (u, v) = plane.basis();
            // Brute force: the closest sample on a fine in-plane grid around
            // the foot point, refined once.
            let mut best = f64::INFINITY;
            let mut center = plane.point;
            let mut span = 20.0;
            for _ in 0..6 {
                let mut best_q = center;
                for i in -20..=20 {
                    for j in -20..=20 {
                        let q = center + u * (i as f64 * span / 20.0) + v * (j as f64 * span / 20.0);
                        let d = p.distance(q);
                        if d < best {
                            best = d;
                            best_q = q;
                        }
                    }
                }
                center = best_q;
                span /= 10.0;
            }
            assert!((point_to_plane_distance(p, &plane).abs() - best).abs() < 1e-6);
        }
    }

    #[test]
    fn plane_distance_independent_of_anchor() {
        let plane = Plane::new(Vec3::new(1.0, -2.0, 0.5), Vec3::new(0.3, 0.1, -2.0));
        let (u, v) = plane.basis();
        let other = Plane::new(plane.normal, plane.point + u * 3.0 - v * 7.0);
        let p = Vec3::new(5.0, 4.0, -3.0);
        let d1 = point_to_plane_distance(p, &plane);
        let d2 = point_to_plane_distance(p, &other);
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn unit_triangle_normal() {
        let n = triangle_normal(Vec3::ZERO, Vec3::X, Vec3::Y);
        assert_eq!(n, Vec3::Z);
    }

    #[test]
    fn collinear_triangle_is_nan() {
        let n = triangle_normal(Vec3::ZERO, Vec3::X, Vec3::X * 2.0);
        assert!(n.x.is_nan() && n.y.is_nan() && n.z.is_nan());
    }

    #[test]
    fn triangle_normal_orthogonal_and_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let (a, b, c) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
            let n = triangle_normal(a, b, c);
            assert!(n.dot(b - a).abs() < 1e-9);
            assert!(n.dot(c - a).abs() < 1e-9);
            assert!(triangle_normal(b, a, c).distance(-n) < 1e-12);
        }
    }

    #[test]
    fn shoelace_signs() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(signed_area(&sq), 1.0);
        let mut cw = sq;
        cw.reverse();
        assert_eq!(signed_area(&cw), -1.0);
    }
}
