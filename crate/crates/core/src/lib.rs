//! Sparsification of two-variable boolean valued constraint satisfaction
//! problems.
//!
//! Each predicate class of an instance is handled on its own. Predicates that
//! depend on at most one endpoint are aggregated exactly. Predicates with a
//! single satisfying input are passed through, since no proper subgraph can
//! preserve them in general. Every other predicate is sparsified by
//! sampling a cut sparsifier of the bipartite double cover and pulling the
//! surviving edges back to the original graph.

pub mod applications;
pub mod cut_sparsify;
pub mod double_cover;
pub mod format;
pub mod generate;
mod error;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod predicate;

pub use error::{Error, Result};
pub use model::{Assignment, Constraint, Edge, VcspInstance, VertexSet, WeightedDigraph};
pub use predicate::{Predicate, SparsifiabilityClass};
pub use cut_sparsify::{LeverageMode, QuadraticFormKind, SamplerConfig};
