use thiserror::Error;

use crate::logic::DefiniteClause;
use crate::modes::TypeSystem;
use crate::saturation::{BottomClause, Saturator};

use super::clause_graph::{clause_to_graph, ClauseGraph, GraphError};
use super::vectorise::{transform_graph, VectorisedGraph, VocabError, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

/// A bottom clause and its clause-graph.
#[derive(Clone, Debug)]
pub struct BotGraph {
    pub bottom: Option<BottomClause>,
    pub graph: ClauseGraph,
}

/// `BotGraph(e) = ClauseToGraph(⊥_{B,M,d}(e))`; an empty bottom clause
/// gives `CG_⊤`.
pub fn bot_graph(sat: &Saturator, e: &DefiniteClause) -> Result<BotGraph, GraphError> {
    let types = sat.types_for(e);
    let bottom = sat.saturate_with(e, &types)?;
    let graph = match &bottom {
        None => ClauseGraph::top(),
        Some(b) => graph_of_bottom(sat, b, &types)?,
    };
    Ok(BotGraph { bottom, graph })
}

/// Clause-graph of an already saturated bottom clause, with `types` the
/// type definitions it was saturated under.
pub fn graph_of_bottom(sat: &Saturator, b: &BottomClause, types: &TypeSystem) -> Result<ClauseGraph, GraphError> {
    let lang = sat.language(types).with_policy(b.policy());
    clause_to_graph(Some(&b.clause), &lang, sat.config().cap, Some(&b.witness))
}

/// `TransformGraph(BotGraph(e))`: the vectorised graph of one example.
pub fn example_graph(sat: &Saturator, e: &DefiniteClause, vocab: &Vocabulary) -> Result<VectorisedGraph, PipelineError> {
    let bg = bot_graph(sat, e)?;
    Ok(transform_graph(&bg.graph, vocab)?)
}

/// Vocabulary from the modes, with `T_#` read off the type predicates of `B`.
pub fn vocabulary(sat: &Saturator) -> Vocabulary {
    let types = TypeSystem::new(sat.engine());
    Vocabulary::from_modes(sat.modes(), |ty| types.members(ty))
}
