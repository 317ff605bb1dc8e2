#![allow(dead_code)]

use std::path::PathBuf;

use botgraph::dataset::{attach_labels, load_saturator, parse_examples, parse_labels, LabelledExample};
use botgraph::logic::{parse_program, DefiniteClause};
use botgraph::saturation::{SaturationConfig, Saturator};

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read(name: &str, file: &str) -> String {
    std::fs::read_to_string(fixture_dir(name).join(file)).expect("fixture exists")
}

pub fn saturator(name: &str, depth: u32) -> Saturator {
    let config = SaturationConfig { depth, ..Default::default() };
    load_saturator(&read(name, "bk.pl"), &read(name, "modes.pl"), config).unwrap()
}

pub fn examples(name: &str) -> Vec<LabelledExample> {
    let ex = parse_examples(&read(name, "examples.pl")).unwrap();
    let labels = fixture_dir(name)
        .join("labels.csv")
        .exists()
        .then(|| parse_labels(&read(name, "labels.csv")).unwrap());
    attach_labels(ex, labels.as_deref()).unwrap()
}

pub fn clause(src: &str) -> DefiniteClause {
    parse_program(src).unwrap().clauses.remove(0)
}

pub const GPARENT_BOT1: &str = "gparent(henry,john) :- father(henry,jane), parent(henry,jane).";
pub const GPARENT_BOT2: &str = "gparent(henry,john) :- father(henry,jane), mother(jane,john), mother(jane,alice), parent(henry,jane), parent(jane,john), parent(jane,alice).";
pub mod gen;
