pub mod brambles;
pub mod connectify;
pub mod cycles;
pub mod decomp;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod solver;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{Cycle, Graph, GraphBuilder, Path};
pub use vertex_set::VertexSet;
pub use decomp::{Decomposition, ValidationReport};
