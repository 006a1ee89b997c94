//! Meshing and P1 finite element assembly on convex polygons.

mod assembly;
mod boundary;
mod mesh;
mod sparse;

pub use assembly::{assemble, element_matrices, reduce_system};
pub use boundary::{BoundarySpec, BoundaryTag};
pub use mesh::{triangulate, triangulate_with, BoundaryEdge, Mesh, MeshOptions, DEFAULT_MAX_VERTICES};
pub use sparse::SparseSymMatrix;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscretizeError {
    #[error("mesh would need about {estimated} vertices, above the cap of {cap}")]
    MeshTooLarge { estimated: usize, cap: usize },
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("every degree of freedom is constrained")]
    AllConstrained,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
