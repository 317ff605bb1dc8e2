//! Dataset assembly, file exports and propositionalisation.

mod build;
mod examples;
mod json;
mod prop;
mod tu;

pub use build::*;
pub use examples::*;
pub use json::*;
pub use prop::*;
pub use tu::*;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("{what}: {message}")]
    Parse { what: String, message: String },
    #[error("example {0} is not ground")]
    NonGround(String),
    #[error("no label for example {0}")]
    MissingLabel(String),
    #[error("example {id}: {message}")]
    Example { id: String, message: String },
    #[error("dataset has no graphs")]
    Empty,
    #[error("{0}")]
    Io(String),
}
