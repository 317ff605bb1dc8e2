use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::VertexLabel;

use super::build::{DatasetStats, LabelMap, LabelledGraphDataset, Provenance};
use super::DatasetError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetDocument {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub stats: DatasetStats,
    pub labels: LabelMap,
    pub vocab: VocabDocument,
    pub graphs: Vec<GraphDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabDocument {
    pub predicates: Vec<String>,
    pub types: Vec<String>,
    pub hashed_terms: Vec<String>,
    pub feature_names: Vec<String>,
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub id: String,
    pub label: String,
    pub class: usize,
    pub empty: bool,
    pub complete: bool,
    pub exhaustive: bool,
    pub num_x: usize,
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexDocument {
    #[serde(flatten)]
    pub symbol: VertexSymbol,
    pub features: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexSymbol {
    X { literal: String, mode: String },
    Y { term: String, r#type: String },
}

impl From<&VertexLabel> for VertexSymbol {
    fn from(l: &VertexLabel) -> Self {
        match l {
            VertexLabel::X(p) => VertexSymbol::X {
                literal: p.literal.to_string(),
                mode: p.mode.to_string(),
            },
            VertexLabel::Y(t) => VertexSymbol::Y {
                term: t.term.to_string(),
                r#type: t.ty.to_string(),
            },
        }
    }
}

pub fn to_document(ds: &LabelledGraphDataset) -> DatasetDocument {
    let v = &ds.vocab;
    DatasetDocument {
        schema_version: SCHEMA_VERSION,
        provenance: ds.provenance.clone(),
        stats: ds.stats.clone(),
        labels: ds.labels.clone(),
        vocab: VocabDocument {
            predicates: v.predicates.iter().map(|(p, n)| format!("{p}/{n}")).collect(),
            types: v.types.iter().map(|t| t.to_string()).collect(),
            hashed_terms: v.hashed_terms.iter().map(|t| t.to_string()).collect(),
            feature_names: v.feature_names(),
            width: v.width(),
        },
        graphs: ds
            .entries
            .iter()
            .map(|e| GraphDocument {
                id: e.id.clone(),
                label: e.label.clone(),
                class: ds.class_of(e),
                empty: e.empty,
                complete: e.complete,
                exhaustive: e.graph.exhaustive,
                num_x: e.graph.num_x,
                vertices: e
                    .graph
                    .labels
                    .iter()
                    .zip(&e.graph.features)
                    .map(|(l, f)| VertexDocument {
                        symbol: l.into(),
                        features: f.clone(),
                    })
                    .collect(),
                edges: e.graph.edges.clone(),
            })
            .collect(),
    }
}

pub fn render_json(ds: &LabelledGraphDataset) -> String {
    let mut s = serde_json::to_string_pretty(&to_document(ds)).expect("dataset document serialises");
    s.push('\n');
    s
}

pub fn export_json(ds: &LabelledGraphDataset, path: &Path) -> Result<(), DatasetError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| DatasetError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, render_json(ds)).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))
}

pub fn parse_json(text: &str) -> Result<DatasetDocument, DatasetError> {
    let doc: DatasetDocument = serde_json::from_str(text).map_err(|e| DatasetError::Parse {
        what: "json".into(),
        message: e.to_string(),
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(DatasetError::Parse {
            what: "json".into(),
            message: format!("unsupported schema version {}", doc.schema_version),
        });
    }
    Ok(doc)
}

pub fn import_json(path: &Path) -> Result<DatasetDocument, DatasetError> {
    let text = fs::read_to_string(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}
