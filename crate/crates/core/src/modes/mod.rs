mod decl;
mod sequence;
mod types;

pub use decl::*;
pub use sequence::*;
pub use types::{FactTypes, TypeOracle, TypeSystem};
