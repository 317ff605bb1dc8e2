use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::{bot_graph, transform_graph, vocabulary, ClauseGraph, VectorisedGraph, Vocabulary};
use crate::modes::Recall;
use crate::saturation::{BottomClause, SaturationConfig, Saturator};

use super::examples::LabelledExample;
use super::DatasetError;

/// Class names in alphabetical order, numbered from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap(pub BTreeMap<String, usize>);

impl LabelMap {
    pub fn from_labels<'a>(labels: impl IntoIterator<Item = &'a str>) -> Self {
        let mut names: Vec<&str> = labels.into_iter().collect();
        names.sort_unstable();
        names.dedup();
        LabelMap(names.into_iter().enumerate().map(|(i, n)| (n.to_string(), i + 1)).collect())
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.0.get(label).copied()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.0.iter().find(|(_, &i)| i == index).map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Settings and input hashes a dataset was built from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub depth: u32,
    pub cap: usize,
    pub budget: u64,
    pub default_recall: Option<u32>,
    pub literal_cap: Option<usize>,
    pub modes_sha256: Option<String>,
    pub bk_sha256: Option<String>,
}

impl Provenance {
    pub fn new(config: &SaturationConfig) -> Self {
        Provenance {
            depth: config.depth,
            cap: config.cap,
            budget: config.budget,
            default_recall: match config.default_recall {
                Recall::Bounded(n) => Some(n),
                _ => None,
            },
            literal_cap: config.literal_cap,
            modes_sha256: None,
            bk_sha256: None,
        }
    }

    pub fn with_sources(mut self, modes: &[u8], bk: &[u8]) -> Self {
        self.modes_sha256 = Some(sha256_hex(modes));
        self.bk_sha256 = Some(sha256_hex(bk));
        self
    }
}

/// Averages over all bottom-graphs, empty ones included.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub graphs: usize,
    pub empty: usize,
    pub incomplete: usize,
    pub avg_x: f64,
    pub avg_y: f64,
    pub avg_e: f64,
}

#[derive(Clone, Debug)]
pub struct GraphEntry {
    pub id: String,
    pub label: String,
    pub graph: VectorisedGraph,
    pub bottom: Option<BottomClause>,
    /// Saturation returned the empty clause.
    pub empty: bool,
    /// No budget or cap was hit.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct LabelledGraphDataset {
    pub entries: Vec<GraphEntry>,
    pub vocab: Vocabulary,
    pub labels: LabelMap,
    pub provenance: Provenance,
    pub stats: DatasetStats,
}

impl LabelledGraphDataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn class_of(&self, entry: &GraphEntry) -> usize {
        self.labels.index(&entry.label).expect("label map covers every entry")
    }
}

fn run<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, DatasetError> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| DatasetError::Io(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// The vectorised graph of every example, in input order. `jobs`
/// bounds the worker threads; the result does not depend on it.
pub fn build_dataset(
    sat: &Saturator,
    examples: &[LabelledExample],
    provenance: Provenance,
    jobs: Option<usize>,
) -> Result<LabelledGraphDataset, DatasetError> {
    let built: Vec<(Option<BottomClause>, ClauseGraph)> = run(jobs, || {
        examples
            .par_iter()
            .map(|e| {
                bot_graph(sat, &e.clause)
                    .map(|bg| (bg.bottom, bg.graph))
                    .map_err(|err| DatasetError::Example {
                        id: e.id.clone(),
                        message: err.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut vocab = vocabulary(sat);
    for (_, g) in &built {
        vocab.extend_from_graph(g);
    }

    let vectors: Vec<VectorisedGraph> = run(jobs, || {
        built
            .par_iter()
            .zip(examples)
            .map(|((_, g), e)| {
                transform_graph(g, &vocab).map_err(|err| DatasetError::Example {
                    id: e.id.clone(),
                    message: err.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let n = built.len().max(1) as f64;
    let mut stats = DatasetStats {
        graphs: built.len(),
        ..Default::default()
    };
    for (b, g) in &built {
        stats.avg_x += g.xs().len() as f64 / n;
        stats.avg_y += g.ys().len() as f64 / n;
        stats.avg_e += g.arcs().len() as f64 / n;
        stats.empty += b.is_none() as usize;
        stats.incomplete += b.as_ref().is_some_and(|b| !b.complete) as usize;
    }

    let labels = LabelMap::from_labels(examples.iter().map(|e| e.label.as_str()));
    let entries = built
        .into_iter()
        .zip(vectors)
        .zip(examples)
        .map(|(((bottom, _), graph), e)| GraphEntry {
            id: e.id.clone(),
            label: e.label.clone(),
            empty: bottom.is_none(),
            complete: bottom.as_ref().is_none_or(|b| b.complete),
            bottom,
            graph,
        })
        .collect();
    Ok(LabelledGraphDataset {
        entries,
        vocab,
        labels,
        provenance,
        stats,
    })
}
