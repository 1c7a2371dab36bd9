//! Line-oriented polygon document.
//!
//! ```text
//! polyplane-polygons 1
//! polygons <count>
//! polygon <index>
//! normal <x> <y> <z>
//! point <x> <y> <z>
//! shell <n>
//! <x> <y> <z> <u> <v>      (n lines)
//! holes <h>
//! hole <m>                 (h times, each followed by m vertex lines)
//! end
//! ```
//!
//! Every vertex line carries the 3D position and the 2D coordinates in the
//! plane frame. Reals are printed with 17 significant digits so a parse
//! reproduces them exactly.

use std::fmt::Write as _;

use crate::geometry::{Plane, Point2, Polygon2, Vec3};
use crate::postprocess::PlanarPolygon;
use crate::{Error, Result};

pub const MAGIC: &str = "polyplane-polygons";
pub const VERSION: u32 = 1;

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_ring(out: &mut String, plane: &Plane, ring: &[Point2]) {
    for &p in ring {
        let q = plane.lift(p);
        let _ = writeln!(out, "{} {} {} {} {}", real(q.x), real(q.y), real(q.z), real(p[0]), real(p[1]));
    }
}

pub fn format_polygons(polys: &[PlanarPolygon]) -> String {
    let mut out = format!("{MAGIC} {VERSION}\npolygons {}\n", polys.len());
    for (i, pp) in polys.iter().enumerate() {
        let (n, o) = (pp.plane.normal, pp.plane.point);
        let _ = writeln!(out, "polygon {i}");
        let _ = writeln!(out, "normal {} {} {}", real(n.x), real(n.y), real(n.z));
        let _ = writeln!(out, "point {} {} {}", real(o.x), real(o.y), real(o.z));
        let _ = writeln!(out, "shell {}", pp.polygon.shell.len());
        push_ring(&mut out, &pp.plane, &pp.polygon.shell);
        let _ = writeln!(out, "holes {}", pp.polygon.holes.len());
        for h in &pp.polygon.holes {
            let _ = writeln!(out, "hole {}", h.len());
            push_ring(&mut out, &pp.plane, h);
        }
        out.push_str("end\n");
    }
    out
}

/// A polygon as read back, with the stored 3D rings alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonRecord {
    pub polygon: PlanarPolygon,
    pub shell_3d: Vec<Vec3>,
    pub holes_3d: Vec<Vec<Vec3>>,
}

struct Cursor<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>> {
        let (i, l) = self
            .lines
            .next()
            .ok_or_else(|| Error::parse("end of file", "document ends early"))?;
        self.line = i + 1;
        Ok(l.split_whitespace().collect())
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        Error::parse(format!("line {}", self.line), message)
    }

    /// A line `<key> <values...>` with `n` values.
    fn keyed(&mut self, key: &str, n: usize) -> Result<Vec<&'a str>> {
        let t = self.next()?;
        if t.first() != Some(&key) || t.len() != n + 1 {
            return Err(self.fail(format!("expected \"{key}\" with {n} values, found {:?}", t.join(" "))));
        }
        Ok(t[1..].to_vec())
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let t = self.keyed(key, 1)?;
        t[0].parse().map_err(|_| self.fail(format!("bad count {:?}", t[0])))
    }

    fn reals(&self, tokens: &[&str]) -> Result<Vec<f64>> {
        tokens
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| self.fail(format!("expected a number, found {t:?}"))))
            .collect()
    }

    fn vec3(&mut self, key: &str) -> Result<Vec3> {
        let t = self.keyed(key, 3)?;
        let v = self.reals(&t)?;
        Ok(Vec3::new(v[0], v[1], v[2]))
    }

    fn ring(&mut self, n: usize) -> Result<(Vec<Point2>, Vec<Vec3>)> {
        let (mut flat, mut lifted) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let t = self.next()?;
            if t.len() != 5 {
                return Err(self.fail(format!("vertex line needs 5 values, found {}", t.len())));
            }
            let v = self.reals(&t)?;
            lifted.push(Vec3::new(v[0], v[1], v[2]));
            flat.push([v[3], v[4]]);
        }
        Ok((flat, lifted))
    }
}

pub fn parse_polygons(text: &str) -> Result<Vec<PolygonRecord>> {
    let mut c = Cursor {
        lines: text.lines().enumerate(),
        line: 0,
    };
    let head = c.next()?;
    if head != [MAGIC, &VERSION.to_string()] {
        return Err(c.fail(format!("expected \"{MAGIC} {VERSION}\" header")));
    }
    let count = c.count("polygons")?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let idx = c.count("polygon")?;
        if idx != i {
            return Err(c.fail(format!("expected polygon {i}, found {idx}")));
        }
        let normal = c.vec3("normal")?;
        let point = c.vec3("point")?;
        let n = c.count("shell")?;
        let (shell, shell_3d) = c.ring(n)?;
        let h = c.count("holes")?;
        let (mut holes, mut holes_3d) = (Vec::with_capacity(h), Vec::with_capacity(h));
        for _ in 0..h {
            let m = c.count("hole")?;
            let (flat, lifted) = c.ring(m)?;
            holes.push(flat);
            holes_3d.push(lifted);
        }
        c.keyed("end", 0)?;
        // The stored normal is already unit length; keep it bit for bit.
        let plane = Plane { normal, point };
        out.push(PolygonRecord {
            polygon: PlanarPolygon {
                plane,
                polygon: Polygon2::new(shell, holes),
            },
            shell_3d,
            holes_3d,
        });
    }
    if let Some((i, l)) = c.lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(format!("line {}", i + 1), format!("trailing content {l:?}")));
    }
    Ok(out)
}
