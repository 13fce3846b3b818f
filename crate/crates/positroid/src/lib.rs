//! Exact combinatorics of the totally nonnegative Grassmannian.
//!
//! Modules:
//! - [`exactmath`]: rational matrices, Plücker vectors, matroids, partitions.
//! - [`network`]: planar directed networks and boundary measurements.
//! - [`lediagram`]: Le-diagrams, Γ-networks and the inverse boundary problem.
//! - [`plabic`]: plabic graphs, moves, trips and reducedness.
//! - [`positroid`]: decorated permutations, necklaces, circular Bruhat order.
//! - [`enumeration`]: cell counts.
//! - [`selfcheck`]: the exact invariant suite run by `positroid selfcheck`.

pub mod embedding;
pub mod enumeration;
pub mod error;
pub mod exactmath;
pub mod lediagram;
pub mod network;
pub mod plabic;
pub mod positroid;
pub mod selfcheck;

pub use error::{Error, Result};
