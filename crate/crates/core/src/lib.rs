//! Walk-based distances on weighted multigraphs.
//!
//! Covers the walk, plain walk, forest and logarithmic forest distances, the
//! ε-walk distances built on an exponential edge transform, and their limits:
//! shortest path, weighted shortest path, long walk and resistance distance.
//! The [`oracle`] module checks the closed forms against brute-force walk
//! enumeration.

pub mod corpus;
pub mod distance;
pub mod edgelist;
pub mod error;
pub mod ewalk;
pub mod graph;
pub mod limit;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod spectral;
pub mod table;
pub mod transforms;
pub mod verify;
pub mod walk;

pub use distance::{DistanceMatrix, MetricFamily};
pub use error::{Error, Result};
pub use metrics::{compute, MetricParams};
pub use graph::{EdgeRecord, WeightedMultigraph};
pub use spectral::SpectralData;
pub use walk::ParamPoint;
pub use nalgebra;
