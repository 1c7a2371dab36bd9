//! Generated scenes with known planes, used by the tests, the benchmarks and
//! the guide.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cloud::OrganizedCloud;
use crate::geometry::{Plane, Vec3};
use crate::mesh::{mesh_from_triangles, HalfEdgeMesh};

/// A `rows x cols` grid on the plane `z = 0` with the given spacing. Rows
/// run toward -y so the mesh normals face +z.
pub fn flat_plane_opc(rows: usize, cols: usize, spacing: f64) -> OrganizedCloud {
    OrganizedCloud::from_fn(rows, cols, |u, v| {
        Vec3::new(v as f64 * spacing, (rows - 1 - u) as f64 * spacing, 0.0)
    })
    .expect("grid size matches")
}

/// [`flat_plane_opc`] with Gaussian noise of standard deviation `sigma`
/// added to every height.
pub fn noisy_plane_opc(rows: usize, cols: usize, spacing: f64, sigma: f64, seed: u64) -> OrganizedCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    let mut cloud = flat_plane_opc(rows, cols, spacing);
    for p in cloud.points_mut() {
        p.z += noise.sample(&mut rng);
    }
    cloud
}

/// Axis-aligned rectangle. `axis` is the fixed coordinate, `normal_sign`
/// orients the outward normal along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub name: String,
    pub axis: usize,
    pub value: f64,
    pub normal_sign: f64,
    /// Bounds on the two remaining coordinates, in increasing axis order.
    pub bounds: [[f64; 2]; 2],
}

impl Surface {
    fn new(name: impl Into<String>, axis: usize, value: f64, normal_sign: f64, bounds: [[f64; 2]; 2]) -> Self {
        Surface {
            name: name.into(),
            axis,
            value,
            normal_sign,
            bounds,
        }
    }

    pub fn normal(&self) -> Vec3 {
        let mut n = [0.0; 3];
        n[self.axis] = self.normal_sign;
        Vec3::from_array(n)
    }

    pub fn plane(&self) -> Plane {
        let mut p = [0.0; 3];
        p[self.axis] = self.value;
        Plane::new(self.normal(), Vec3::from_array(p))
    }

    fn others(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    /// Ray parameter of the hit from `o` along `d`, if the ray meets the
    /// rectangle in front of the origin.
    fn intersect(&self, o: [f64; 3], d: [f64; 3]) -> Option<f64> {
        if d[self.axis].abs() < 1e-12 {
            return None;
        }
        let t = (self.value - o[self.axis]) / d[self.axis];
        if t <= 1e-9 {
            return None;
        }
        let inside = self.others().iter().zip(&self.bounds).all(|(&a, b)| {
            let x = o[a] + t * d[a];
            x >= b[0] && x <= b[1]
        });
        inside.then_some(t)
    }
}

/// A room with box obstacles, seen by a spherical scanner.
#[derive(Debug, Clone, PartialEq)]
pub struct RoomSpec {
    /// Room extent along x, y and z; the floor is `z = 0`.
    pub size: [f64; 3],
    /// Obstacles as `(min, max)` corners standing on the floor.
    pub boxes: Vec<(Vec3, Vec3)>,
    pub sensor: Vec3,
    pub rows: usize,
    pub cols: usize,
    /// Azimuth of the first and last column in degrees. Columns sweep
    /// clockwise seen from above.
    pub azimuth: [f64; 2],
    /// Elevation of the first and last row in degrees.
    pub elevation: [f64; 2],
    /// Range noise along each ray.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for RoomSpec {
    fn default() -> Self {
        RoomSpec {
            size: [6.0, 5.0, 2.5],
            boxes: vec![
                (Vec3::new(1.5, 2.25, 0.0), Vec3::new(2.0, 2.75, 0.4)),
                (Vec3::new(2.7, 1.2, 0.0), Vec3::new(3.3, 1.7, 0.4)),
            ],
            sensor: Vec3::new(3.0, 2.5, 1.3),
            rows: 250,
            cols: 250,
            // The unscanned wedge faces the (6, 5) corner.
            azimuth: [370.0, 70.0],
            elevation: [50.0, -70.0],
            sigma: 0.002,
            seed: 7,
        }
    }
}

/// A generated room together with the surface every point came from.
#[derive(Debug, Clone)]
pub struct RoomScene {
    pub spec: RoomSpec,
    pub cloud: OrganizedCloud,
    pub surfaces: Vec<Surface>,
    /// Surface index per grid point; `None` where the ray escaped.
    pub labels: Vec<Option<usize>>,
}

impl RoomScene {
    pub const FLOOR: usize = 0;

    /// Grid indices of the points on surface `s`.
    pub fn points_on(&self, s: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == Some(s)).collect()
    }

    /// `(min, max)` corners of each obstacle's floor footprint.
    pub fn footprints(&self) -> Vec<([f64; 2], [f64; 2])> {
        self.spec.boxes.iter().map(|(lo, hi)| ([lo.x, lo.y], [hi.x, hi.y])).collect()
    }
}

fn room_surfaces(spec: &RoomSpec) -> Vec<Surface> {
    let [sx, sy, sz] = spec.size;
    let mut out = vec![
        Surface::new("floor", 2, 0.0, 1.0, [[0.0, sx], [0.0, sy]]),
        Surface::new("wall x=0", 0, 0.0, 1.0, [[0.0, sy], [0.0, sz]]),
        Surface::new(format!("wall x={sx}"), 0, sx, -1.0, [[0.0, sy], [0.0, sz]]),
        Surface::new("wall y=0", 1, 0.0, 1.0, [[0.0, sx], [0.0, sz]]),
        Surface::new(format!("wall y={sy}"), 1, sy, -1.0, [[0.0, sx], [0.0, sz]]),
    ];
    for (i, (lo, hi)) in spec.boxes.iter().enumerate() {
        out.push(Surface::new(format!("box {i} top"), 2, hi.z, 1.0, [[lo.x, hi.x], [lo.y, hi.y]]));
        out.push(Surface::new(format!("box {i} -x"), 0, lo.x, -1.0, [[lo.y, hi.y], [lo.z, hi.z]]));
        out.push(Surface::new(format!("box {i} +x"), 0, hi.x, 1.0, [[lo.y, hi.y], [lo.z, hi.z]]));
        out.push(Surface::new(format!("box {i} -y"), 1, lo.y, -1.0, [[lo.x, hi.x], [lo.z, hi.z]]));
        out.push(Surface::new(format!("box {i} +y"), 1, hi.y, 1.0, [[lo.x, hi.x], [lo.z, hi.z]]));
    }
    out
}

/// Scans `spec` row by row. Rows step down in elevation and columns step
/// clockwise in azimuth, so mesh normals face the sensor.
pub fn room_scene(spec: &RoomSpec) -> RoomScene {
    let surfaces = room_surfaces(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.sigma).expect("sigma is finite and non-negative");
    let o = spec.sensor.to_array();
    let step = |range: [f64; 2], n: usize, i: usize| {
        let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        (range[0] + t * (range[1] - range[0])).to_radians()
    };

    let mut points = Vec::with_capacity(spec.rows * spec.cols);
    let mut labels = Vec::with_capacity(spec.rows * spec.cols);
    for u in 0..spec.rows {
        let el = step(spec.elevation, spec.rows, u);
        for v in 0..spec.cols {
            let az = step(spec.azimuth, spec.cols, v);
            let d = [el.cos() * az.cos(), el.cos() * az.sin(), el.sin()];
            let hit = surfaces
                .iter()
                .enumerate()
                .filter_map(|(k, s)| s.intersect(o, d).map(|t| (t, k)))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match hit {
                Some((t, k)) => {
                    let r = t + noise.sample(&mut rng);
                    points.push(spec.sensor + Vec3::from_array(d) * r);
                    labels.push(Some(k));
                }
                None => {
                    points.push(Vec3::NAN);
                    labels.push(None);
                }
            }
        }
    }
    RoomScene {
        spec: spec.clone(),
        cloud: OrganizedCloud::new(spec.rows, spec.cols, points).expect("grid size matches"),
        surfaces,
        labels,
    }
}

/// Two triangles per cell of an `nu x nv` patch spanned by `du` and `dv`.
/// The normal points along `du x dv`. Cells listed in `skip` are left out.
fn push_patch(
    points: &mut Vec<Vec3>,
    triangles: &mut Vec<[usize; 3]>,
    origin: Vec3,
    du: Vec3,
    dv: Vec3,
    (nu, nv): (usize, usize),
    skip: &[(usize, usize)],
) {
    let base = points.len();
    for i in 0..=nu {
        for j in 0..=nv {
            points.push(origin + du * i as f64 + dv * j as f64);
        }
    }
    let id = |i: usize, j: usize| base + i * (nv + 1) + j;
    for i in 0..nu {
        for j in 0..nv {
            if skip.contains(&(i, j)) {
                continue;
            }
            let (p00, p10, p11, p01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
}

/// A floor with one missing cell, a raised seat above it and a wall: two
/// horizontal surfaces that share a normal but not an edge, plus a vertical
/// one. Cells are 0.25 m.
pub fn seat_and_wall_mesh() -> HalfEdgeMesh {
    let s = 0.25;
    let (mut points, mut triangles) = (Vec::new(), Vec::new());
    let x = Vec3::new(s, 0.0, 0.0);
    let y = Vec3::new(0.0, s, 0.0);
    let z = Vec3::new(0.0, 0.0, s);
    push_patch(&mut points, &mut triangles, Vec3::ZERO, x, y, (16, 16), &[(12, 3)]);
    push_patch(&mut points, &mut triangles, Vec3::new(1.0, 1.0, 0.45), x, y, (4, 4), &[]);
    push_patch(&mut points, &mut triangles, Vec3::new(4.0, 0.0, 0.0), z, y, (8, 16), &[]);
    mesh_from_triangles(points, triangles)
}
