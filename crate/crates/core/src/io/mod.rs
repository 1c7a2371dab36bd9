//! Reading clouds and meshes, writing polygons and graymaps.

mod ply;
mod polygons;
mod text;

pub use ply::{format_ply, parse_ply, PlyData, PlyEncoding};
pub use polygons::{format_polygons, parse_polygons, PolygonRecord};
pub use text::{format_grid, parse_grid, parse_obj, parse_xyz};

use std::path::Path;

use crate::cloud::{OrganizedCloud, UnorganizedCloud};
use crate::mesh::{mesh_from_triangles, HalfEdgeMesh};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    /// Whitespace-separated `x y z` lines.
    Xyz,
    /// PLY; organized when the header carries `comment grid M N`.
    Ply,
    /// `M N` header followed by `M * N` point lines.
    Grid,
}

impl CloudFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
        match ext.as_str() {
            "xyz" | "txt" | "pts" => Ok(CloudFormat::Xyz),
            "ply" => Ok(CloudFormat::Ply),
            "grid" => Ok(CloudFormat::Grid),
            _ => Err(Error::parse(path.display().to_string(), format!("unknown cloud format {ext:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cloud {
    Unorganized(UnorganizedCloud),
    Organized(OrganizedCloud),
}

fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    String::from_utf8(bytes).map_err(|_| Error::parse(path.display().to_string(), "file is not valid UTF-8 text"))
}

/// Loads a point cloud. `format` defaults to a guess from the extension.
pub fn load_cloud(path: &Path, format: Option<CloudFormat>) -> Result<Cloud> {
    let format = match format {
        Some(f) => f,
        None => CloudFormat::from_path(path)?,
    };
    let parsed = match format {
        CloudFormat::Xyz => parse_xyz(&read_text(path)?).map(Cloud::Unorganized),
        CloudFormat::Grid => parse_grid(&read_text(path)?).map(Cloud::Organized),
        CloudFormat::Ply => parse_ply(&std::fs::read(path)?).and_then(|d| match d.grid {
            Some((m, n)) => OrganizedCloud::new(m, n, d.points).map(Cloud::Organized),
            None => Ok(Cloud::Unorganized(UnorganizedCloud::new(d.points))),
        }),
    };
    parsed.map_err(|e| located(path, e))
}

/// Loads a triangle mesh from PLY or OBJ and builds its half-edges.
pub fn load_mesh(path: &Path) -> Result<HalfEdgeMesh> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let (points, triangles) = match ext.as_str() {
        "obj" => parse_obj(&read_text(path)?).map_err(|e| located(path, e))?,
        "ply" => {
            let data = parse_ply(&std::fs::read(path)?).map_err(|e| located(path, e))?;
            let mut tris = Vec::with_capacity(data.faces.len());
            for (i, f) in data.faces.iter().enumerate() {
                let [a, b, c] = f[..] else {
                    return Err(Error::parse(
                        format!("{}: face {i}", path.display()),
                        format!("only triangular faces are supported, found {} corners", f.len()),
                    ));
                };
                tris.push([a, b, c]);
            }
            (data.points, tris)
        }
        _ => return Err(Error::parse(path.display().to_string(), format!("unknown mesh format {ext:?}"))),
    };
    Ok(mesh_from_triangles(points, triangles))
}

pub fn write_polygons(path: &Path, polys: &[crate::postprocess::PlanarPolygon]) -> Result<()> {
    Ok(std::fs::write(path, format_polygons(polys))?)
}

/// Binary portable graymap of `rows x cols` bytes in row-major order.
pub fn format_pgm(rows: usize, cols: usize, pixels: &[u8]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), rows * cols);
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn write_pgm(path: &Path, rows: usize, cols: usize, pixels: &[u8]) -> Result<()> {
    Ok(std::fs::write(path, format_pgm(rows, cols, pixels))?)
}
