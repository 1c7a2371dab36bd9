//! Whitespace-separated text inputs: XYZ point lists, dense grids and OBJ
//! meshes. The token `nan` (any case) marks an invalid coordinate.

use crate::cloud::{OrganizedCloud, UnorganizedCloud};
use crate::geometry::Vec3;
use crate::{Error, Result};

fn at_line(line: usize) -> String {
    format!("line {line}")
}

pub(super) fn parse_real(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::parse(at_line(line), format!("expected a number, found {token:?}")))
}

fn parse_point<'a>(mut tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec3> {
    let mut xyz = [0.0; 3];
    for (k, slot) in xyz.iter_mut().enumerate() {
        let t = tokens
            .next()
            .ok_or_else(|| Error::parse(at_line(line), format!("expected 3 coordinates, found {k}")))?;
        *slot = parse_real(t, line)?;
    }
    Ok(Vec3::from_array(xyz))
}

/// Meaningful lines with their 1-based numbers; blanks and `#` comments are
/// skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One point per line, first three columns; extra columns are ignored.
pub fn parse_xyz(text: &str) -> Result<UnorganizedCloud> {
    let points = content_lines(text)
        .map(|(n, l)| parse_point(l.split_whitespace(), n))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnorganizedCloud::new(points))
}

/// A `rows cols` header followed by `rows * cols` point lines in row-major
/// order.
pub fn parse_grid(text: &str) -> Result<OrganizedCloud> {
    let mut lines = content_lines(text);
    let (hn, header) = lines.next().ok_or_else(|| Error::parse("line 1", "missing \"rows cols\" header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let dim = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::parse(at_line(hn), format!("expected a grid dimension, found {t:?}")))
    };
    let [r, c] = dims[..] else {
        return Err(Error::parse(at_line(hn), "header must hold exactly two dimensions"));
    };
    let (rows, cols) = (dim(r)?, dim(c)?);
    let mut points = Vec::with_capacity(rows * cols);
    for (n, l) in lines {
        if points.len() == rows * cols {
            return Err(Error::parse(at_line(n), format!("more than {} point rows", rows * cols)));
        }
        points.push(parse_point(l.split_whitespace(), n)?);
    }
    if points.len() != rows * cols {
        return Err(Error::parse(
            "end of file",
            format!("expected {} point rows, found {}", rows * cols, points.len()),
        ));
    }
    OrganizedCloud::new(rows, cols, points)
}

/// Writes a grid in the format read by [`parse_grid`].
pub fn format_grid(cloud: &OrganizedCloud) -> String {
    let mut out = format!("{} {}\n", cloud.rows(), cloud.cols());
    for p in cloud.points() {
        out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p.x, p.y, p.z));
    }
    out
}

/// Vertices and triangles of an OBJ file. Faces may use `v/vt/vn` forms and
/// negative indices; anything but a triangle is rejected.
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut points = Vec::new();
    let mut triangles = Vec::new();
    for (n, l) in content_lines(text) {
        let mut tokens = l.split_whitespace();
        match tokens.next() {
            Some("v") => points.push(parse_point(tokens, n)?),
            Some("f") => {
                let corners: Vec<&str> = tokens.collect();
                if corners.len() != 3 {
                    return Err(Error::parse(
                        at_line(n),
                        format!("only triangular faces are supported, found {} corners", corners.len()),
                    ));
                }
                let mut tri = [0usize; 3];
                for (slot, c) in tri.iter_mut().zip(&corners) {
                    let head = c.split('/').next().unwrap_or("");
                    let i: i64 = head
                        .parse()
                        .map_err(|_| Error::parse(at_line(n), format!("bad vertex reference {c:?}")))?;
                    let resolved = match i {
                        i if i > 0 => i - 1,
                        i if i < 0 => points.len() as i64 + i,
                        _ => -1,
                    };
                    if resolved < 0 || resolved as usize >= points.len() {
                        return Err(Error::parse(at_line(n), format!("vertex reference {c:?} out of range")));
                    }
                    *slot = resolved as usize;
                }
                triangles.push(tri);
            }
            _ => {}
        }
    }
    Ok((points, triangles))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_xyz() {
        let cloud = parse_xyz("0 0 0\n1 0 0 255 0 0\n\n# note\n0 1 0.5\n").unwrap();
        assert_eq!(cloud.len(), 3);
        assert_eq!(cloud.points[2], Vec3::new(0.0, 1.0, 0.5));
    }

    #[test]
    fn short_xyz_line_names_its_line() {
        let err = parse_xyz("0 0 0\n1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn grid_with_an_invalid_point() {
        let cloud = parse_grid("2 2\n0 0 0\n0 1 0\nnan NaN NAN\n1 1 0\n").unwrap();
        assert_eq!((cloud.rows(), cloud.cols()), (2, 2));
        assert_eq!(cloud.valid_count(), 3);
        assert!(cloud.get(1, 0).is_nan());
    }

    #[test]
    fn grid_counts_must_match() {
        assert!(parse_grid("2 2\n0 0 0\n").is_err());
        assert!(parse_grid("1 1\n0 0 0\n1 1 1\n").is_err());
        assert!(parse_grid("2\n0 0 0\n").is_err());
    }

    #[test]
    fn grid_round_trips() {
        let cloud = OrganizedCloud::from_fn(3, 2, |u, v| {
            if u == 1 && v == 0 {
                Vec3::NAN
            } else {
                Vec3::new(0.1 * v as f64, -1.0 / 3.0 * u as f64, 1e-17)
            }
        })
        .unwrap();
        let back = parse_grid(&format_grid(&cloud)).unwrap();
        for (a, b) in cloud.points().iter().zip(back.points()) {
            assert!(a.to_array().iter().zip(b.to_array()).all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan())));
        }
    }

    #[test]
    fn obj_tetrahedron() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1/1 2/2 4/4\nf 2//1 3//1 4//1\nf -4 -1 -2\n";
        let (points, tris) = parse_obj(text).unwrap();
        assert_eq!(points.len(), 4);
        assert_eq!(tris, vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]);
    }

    #[test]
    fn obj_quads_are_rejected() {
        let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        let err = parse_obj(text).unwrap_err();
        assert!(err.to_string().contains("line 5"), "{err}");
    }
}
