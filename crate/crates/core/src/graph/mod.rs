mod clause_graph;
mod pipeline;
mod vectorise;

pub use clause_graph::*;
pub use pipeline::*;
pub use vectorise::*;
