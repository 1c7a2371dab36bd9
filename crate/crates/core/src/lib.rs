//! Planar segments and concave polygons with holes from point clouds and
//! triangle meshes.

pub mod cloud;
pub mod config;
mod error;
pub mod fastga;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod pipeline;
pub mod polygon;
pub mod postprocess;
pub mod segmentation;
pub mod smoothing;
pub mod synthetic;

pub use error::{Error, Result};
