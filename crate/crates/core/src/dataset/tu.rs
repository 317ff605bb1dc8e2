//! The four-file plain-text graph dataset layout: `{name}_A.txt`,
//! `{name}_graph_indicator.txt`, `{name}_graph_labels.txt` and
//! `{name}_node_attributes.txt`. Vertex ids are global and 1-based.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::build::LabelledGraphDataset;
use super::DatasetError;

pub const TU_SUFFIXES: [&str; 4] = ["A", "graph_indicator", "graph_labels", "node_attributes"];

/// File contents in `TU_SUFFIXES` order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TuFiles {
    pub adjacency: String,
    pub graph_indicator: String,
    pub graph_labels: String,
    pub node_attributes: String,
}

impl TuFiles {
    fn parts(&self) -> [&str; 4] {
        [&self.adjacency, &self.graph_indicator, &self.graph_labels, &self.node_attributes]
    }
}

pub fn tu_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

/// Renders a dataset. Values use shortest round-trip decimal formatting.
pub fn render_tu(ds: &LabelledGraphDataset) -> Result<TuFiles, DatasetError> {
    if ds.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut files = TuFiles::default();
    let mut offset = 0usize;
    for (g, entry) in ds.entries.iter().enumerate() {
        let v = &entry.graph;
        for &(a, b) in &v.edges {
            writeln!(files.adjacency, "{}, {}", offset + a + 1, offset + b + 1).unwrap();
        }
        for row in &v.features {
            writeln!(files.graph_indicator, "{}", g + 1).unwrap();
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            writeln!(files.node_attributes, "{}", cells.join(", ")).unwrap();
        }
        writeln!(files.graph_labels, "{}", ds.class_of(entry)).unwrap();
        offset += v.num_vertices();
    }
    Ok(files)
}

pub fn export_tu(ds: &LabelledGraphDataset, dir: &Path, name: &str) -> Result<Vec<PathBuf>, DatasetError> {
    let files = render_tu(ds)?;
    fs::create_dir_all(dir).map_err(|e| DatasetError::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (suffix, text) in TU_SUFFIXES.iter().zip(files.parts()) {
        let path = tu_path(dir, name, suffix);
        fs::write(&path, text).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TuGraph {
    pub label: usize,
    /// Attribute lines as written, one per vertex.
    pub attribute_text: Vec<String>,
    pub attributes: Vec<Vec<f64>>,
    /// Directed pairs of 0-based vertex indices local to the graph.
    pub edges: Vec<(usize, usize)>,
}

fn bad(file: &str, line: usize, msg: impl std::fmt::Display) -> DatasetError {
    DatasetError::Parse {
        what: file.into(),
        message: format!("line {line}: {msg}"),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

pub fn parse_tu(files: &TuFiles) -> Result<Vec<TuGraph>, DatasetError> {
    let mut graphs: Vec<TuGraph> = Vec::new();
    for (n, l) in lines(&files.graph_labels) {
        let label = l.parse().map_err(|e| bad("graph_labels", n, e))?;
        graphs.push(TuGraph {
            label,
            ..Default::default()
        });
    }
    let mut owner: Vec<(usize, usize)> = Vec::new();
    for (n, l) in lines(&files.graph_indicator) {
        let g: usize = l.parse().map_err(|e| bad("graph_indicator", n, e))?;
        if g == 0 || g > graphs.len() || owner.last().is_some_and(|&(prev, _)| prev > g - 1) {
            return Err(bad("graph_indicator", n, format!("graph id {g} out of order or range")));
        }
        owner.push((g - 1, graphs[g - 1].attributes.len()));
        graphs[g - 1].attributes.push(Vec::new());
    }
    let attrs: Vec<(usize, &str)> = lines(&files.node_attributes).collect();
    if attrs.len() != owner.len() {
        return Err(bad("node_attributes", attrs.len(), "vertex count differs from graph_indicator"));
    }
    for ((n, l), &(g, local)) in attrs.into_iter().zip(&owner) {
        let row = l
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad("node_attributes", n, e))?;
        graphs[g].attributes[local] = row;
        graphs[g].attribute_text.push(l.to_string());
    }
    for (n, l) in lines(&files.adjacency) {
        let (a, b) = l.split_once(',').ok_or_else(|| bad("A", n, "expected `i, j`"))?;
        let a: usize = a.trim().parse().map_err(|e| bad("A", n, e))?;
        let b: usize = b.trim().parse().map_err(|e| bad("A", n, e))?;
        let (ga, la) = *owner.get(a.wrapping_sub(1)).ok_or_else(|| bad("A", n, format!("no vertex {a}")))?;
        let (gb, lb) = *owner.get(b.wrapping_sub(1)).ok_or_else(|| bad("A", n, format!("no vertex {b}")))?;
        if ga != gb {
            return Err(bad("A", n, "edge joins two graphs"));
        }
        graphs[ga].edges.push((la, lb));
    }
    Ok(graphs)
}

pub fn import_tu(dir: &Path, name: &str) -> Result<Vec<TuGraph>, DatasetError> {
    let read = |suffix: &str| {
        let path = tu_path(dir, name, suffix);
        fs::read_to_string(&path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))
    };
    parse_tu(&TuFiles {
        adjacency: read("A")?,
        graph_indicator: read("graph_indicator")?,
        graph_labels: read("graph_labels")?,
        node_attributes: read("node_attributes")?,
    })
}
