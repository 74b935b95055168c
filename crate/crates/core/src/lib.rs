//! Analysis of the graph Laplacian's top eigenspace and what it reveals about
//! graph structure: modules and the canonical partition, fibers of eigenspace
//! vectors, induced orientations, transitive-orientation sampling and
//! enumeration, and a cone-invariance test for comparability.
//!
//! Vertices are labeled 1..=n throughout; all types are immutable after
//! construction and every operation is pure given its explicit seed.

pub mod compar;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod modular;
pub mod orientation;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, to_edge_list, Graph, Partition, VertexSet};
pub use matrix::{RealVector, SquareMatrix};
pub use orientation::{parse_orientation, to_orientation_text, PartialOrientation};
pub use spectral::{derive_seed, ToleranceConfig};
