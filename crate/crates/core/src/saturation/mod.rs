mod engine;
mod saturate;

pub use engine::{is_builtin, Answers, Engine, EngineError, KnowledgeBase, DEFAULT_BUDGET};
pub use saturate::{BottomClause, SaturationConfig, SaturationError, Saturator};
