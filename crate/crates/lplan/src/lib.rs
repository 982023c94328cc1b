//! Non-trivial L-shaped floor-plans for properly triangulated planar graphs.

pub mod boundary;
pub mod error;
pub mod flipping;
pub mod graph;
pub mod io;
pub mod layout;
pub mod oracle;
pub mod paths;
pub mod pipeline;
pub mod rel;

pub use error::{Error, Result};
pub use graph::{EmbeddedGraph, VertexId};
