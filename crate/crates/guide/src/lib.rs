//! The chapters of the book, compiled so their snippets run as doctests.
#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/inputs.md")]
pub mod inputs {}

#[doc = include_str!("../../../book/src/meshes.md")]
pub mod meshes {}

#[doc = include_str!("../../../book/src/smoothing.md")]
pub mod smoothing {}

#[doc = include_str!("../../../book/src/normals.md")]
pub mod normals {}

#[doc = include_str!("../../../book/src/segmentation.md")]
pub mod segmentation {}

#[doc = include_str!("../../../book/src/postprocess.md")]
pub mod postprocess {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
