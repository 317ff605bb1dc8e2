use std::path::PathBuf;

use pyo3::exceptions::{PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;

use botgraph::dataset::{
    attach_labels, build_dataset, export_json, export_tu, load_saturator, parse_examples, parse_labels, render_json,
    DatasetError, LabelledGraphDataset, Provenance,
};
use botgraph::graph::bot_graph;
use botgraph::logic::{parse_program, DefiniteClause};
use botgraph::modes::{in_mode_language, Recall, DEFAULT_CAP};
use botgraph::saturation::{SaturationConfig, Saturator, DEFAULT_BUDGET};

fn dataset_err(e: DatasetError) -> PyErr {
    match e {
        DatasetError::Io(m) => PyOSError::new_err(m),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn one_clause(src: &str) -> PyResult<DefiniteClause> {
    let mut p = parse_program(src).map_err(value_err)?;
    if p.clauses.len() != 1 {
        return Err(PyValueError::new_err(format!("expected one clause, found {}", p.clauses.len())));
    }
    Ok(p.clauses.remove(0))
}

/// A saturated example.
#[pyclass(frozen, module = "botgraph")]
struct BottomClause {
    #[pyo3(get)]
    clause: String,
    #[pyo3(get)]
    head: String,
    #[pyo3(get)]
    body: Vec<String>,
    #[pyo3(get)]
    layers: Vec<u32>,
    #[pyo3(get)]
    witness: String,
    #[pyo3(get)]
    complete: bool,
}

#[pymethods]
impl BottomClause {
    fn __len__(&self) -> usize {
        self.body.len()
    }

    fn __str__(&self) -> String {
        self.clause.clone()
    }
}

/// Background knowledge and modes, ready to saturate examples.
#[pyclass(frozen, module = "botgraph")]
struct Toolkit {
    sat: Saturator,
    provenance: Provenance,
}

#[pymethods]
impl Toolkit {
    #[new]
    #[pyo3(signature = (bk, modes, depth=2, cap=DEFAULT_CAP, budget=DEFAULT_BUDGET, recall=None))]
    fn new(bk: &str, modes: &str, depth: u32, cap: usize, budget: u64, recall: Option<u32>) -> PyResult<Self> {
        let config = SaturationConfig {
            depth,
            default_recall: recall.map_or(Recall::Unbounded, Recall::Bounded),
            budget,
            literal_cap: None,
            cap,
        };
        let provenance = Provenance::new(&config).with_sources(modes.as_bytes(), bk.as_bytes());
        let sat = load_saturator(bk, modes, config).map_err(dataset_err)?;
        Ok(Toolkit { sat, provenance })
    }

    /// Reads background knowledge and modes from files.
    #[staticmethod]
    #[pyo3(signature = (bk, modes, depth=2, cap=DEFAULT_CAP, budget=DEFAULT_BUDGET, recall=None))]
    fn from_files(bk: PathBuf, modes: PathBuf, depth: u32, cap: usize, budget: u64, recall: Option<u32>) -> PyResult<Self> {
        let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| PyOSError::new_err(format!("{}: {e}", p.display())));
        Toolkit::new(&read(&bk)?, &read(&modes)?, depth, cap, budget, recall)
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.sat.config().depth
    }

    /// Bottom clause of a ground example, or None when no head mode matches.
    fn saturate(&self, example: &str) -> PyResult<Option<BottomClause>> {
        let e = one_clause(example)?;
        let b = self.sat.saturate(&e).map_err(value_err)?;
        Ok(b.map(|b| BottomClause {
            clause: b.clause.to_string(),
            head: b.clause.head.to_string(),
            body: b.clause.body.iter().map(ToString::to_string).collect(),
            layers: b.layers.clone(),
            witness: b.witness.to_string(),
            complete: b.complete,
        }))
    }

    /// Text dump of the bottom-graph of a ground example.
    fn graph(&self, example: &str) -> PyResult<String> {
        let e = one_clause(example)?;
        let bg = bot_graph(&self.sat, &e).map_err(value_err)?;
        Ok(bg.graph.dump())
    }

    /// Whether a clause belongs to the mode language.
    fn check(&self, clause: &str) -> PyResult<bool> {
        let c = one_clause(clause)?;
        let types = self.sat.types_for(&c);
        Ok(in_mode_language(Some(&c), &self.sat.language(&types)))
    }

    /// Saturates, graphs and vectorises every example.
    #[pyo3(signature = (examples, labels=None, jobs=None))]
    fn dataset(&self, py: Python<'_>, examples: &str, labels: Option<&str>, jobs: Option<usize>) -> PyResult<Dataset> {
        let ex = parse_examples(examples).map_err(dataset_err)?;
        let labels = labels.map(parse_labels).transpose().map_err(dataset_err)?;
        let ex = attach_labels(ex, labels.as_deref()).map_err(dataset_err)?;
        let prov = self.provenance.clone();
        let ds = py
            .detach(|| build_dataset(&self.sat, &ex, prov, jobs))
            .map_err(dataset_err)?;
        Ok(Dataset { ds })
    }
}

type GraphTuple = (Vec<Vec<f64>>, Vec<(usize, usize)>, usize);

/// A labelled, vectorised graph dataset.
#[pyclass(frozen, module = "botgraph")]
struct Dataset {
    ds: LabelledGraphDataset,
}

#[pymethods]
impl Dataset {
    fn __len__(&self) -> usize {
        self.ds.len()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.ds.entries.iter().map(|e| e.id.clone()).collect()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.ds.entries.iter().map(|e| e.label.clone()).collect()
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.ds.vocab.feature_names()
    }

    /// `(graphs, empty, incomplete, mean |X|, mean |Y|, mean |E|)`.
    #[getter]
    fn stats(&self) -> (usize, usize, usize, f64, f64, f64) {
        let s = &self.ds.stats;
        (s.graphs, s.empty, s.incomplete, s.avg_x, s.avg_y, s.avg_e)
    }

    /// `(features, edges, class)` of graph `i`; edges are directed vertex pairs.
    fn graph(&self, i: usize) -> PyResult<GraphTuple> {
        let e = self
            .ds
            .entries
            .get(i)
            .ok_or_else(|| PyIndexError::new_err(format!("graph {i} out of range")))?;
        Ok((e.graph.features.clone(), e.graph.edges.clone(), self.ds.class_of(e)))
    }

    fn to_json(&self) -> String {
        render_json(&self.ds)
    }

    fn export_json(&self, path: PathBuf) -> PyResult<()> {
        export_json(&self.ds, &path).map_err(dataset_err)
    }

    /// Writes the four TU text files; returns their paths.
    #[pyo3(signature = (dir, name="botgraph"))]
    fn export_tu(&self, dir: PathBuf, name: &str) -> PyResult<Vec<PathBuf>> {
        export_tu(&self.ds, &dir, name).map_err(dataset_err)
    }
}

/// `general θ-subsumes target`: the instance of `general`, or None.
#[pyfunction]
fn subsumes(general: &str, target: &str) -> PyResult<Option<String>> {
    let g = one_clause(general)?;
    let t = one_clause(target)?;
    Ok(botgraph::logic::subsumes(&g, &t).map(|c| c.to_string()))
}

#[pymodule]
fn _botgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Toolkit>()?;
    m.add_class::<BottomClause>()?;
    m.add_class::<Dataset>()?;
    m.add_function(wrap_pyfunction!(subsumes, m)?)?;
    Ok(())
}
