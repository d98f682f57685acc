//! Exact combinatorics of stability assignments on dual graphs of nodal
//! curves: chip-firing groups, stability conditions, numerical
//! polarizations, break divisors, lifts to subdivisions and universal
//! families over categories of stable graphs.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assignment;
pub mod bitset;
pub mod chip;
mod error;
pub mod graph;
pub mod linalg;
pub mod polarization;
pub mod universal;

pub use assignment::{StabilityAssignment, Violation};
pub use bitset::{EdgeSet, VertexSet};
pub use chip::{Jacobian, Multidegree};
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, GraphMorphism, SpanningSubgraph, SubdividedGraph};
pub use polarization::{Polarization, StabilityVerdict};
