use std::collections::HashMap;

use crate::logic::{parse_program, DefiniteClause, Term};
use crate::modes::ModeSet;
use crate::saturation::{SaturationConfig, Saturator};

use super::DatasetError;

/// An example clause with the identifier used in labels files and exports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub clause: DefiniteClause,
}

/// An example together with its class label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledExample {
    pub id: String,
    pub clause: DefiniteClause,
    pub label: String,
}

fn term_text(t: &Term) -> String {
    t.to_string()
}

fn is_class_head(c: &DefiniteClause) -> bool {
    &*c.head.predicate == "class" && c.head.arity() == 2
}

/// Reads an examples file. The id of a `class(Id, Label)` example is `Id`;
/// any other example is numbered by its 1-based position.
pub fn parse_examples(text: &str) -> Result<Vec<Example>, DatasetError> {
    let program = parse_program(text).map_err(|e| DatasetError::Parse {
        what: "examples".into(),
        message: e.to_string(),
    })?;
    let mut out: Vec<Example> = Vec::with_capacity(program.clauses.len());
    for (i, clause) in program.clauses.into_iter().enumerate() {
        let id = if is_class_head(&clause) {
            term_text(&clause.head.args[0])
        } else {
            (i + 1).to_string()
        };
        if !clause.is_ground() {
            return Err(DatasetError::NonGround(id));
        }
        out.push(Example { id, clause });
    }
    Ok(out)
}

/// Reads `id,label` rows. A first row of exactly `id,label` is a header.
pub fn parse_labels(text: &str) -> Result<Vec<(String, String)>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'%'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DatasetError::Parse {
            what: "labels".into(),
            message: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(DatasetError::Parse {
                what: "labels".into(),
                message: format!("line {}: expected `id,label`", i + 1),
            });
        }
        if i == 0 && record[0].eq_ignore_ascii_case("id") && record[1].eq_ignore_ascii_case("label") {
            continue;
        }
        rows.push((record[0].to_string(), record[1].to_string()));
    }
    Ok(rows)
}

/// Attaches labels: a labels-file entry wins, then the second argument of a
/// `class/2` head.
pub fn attach_labels(
    examples: Vec<Example>,
    labels: Option<&[(String, String)]>,
) -> Result<Vec<LabelledExample>, DatasetError> {
    let map: HashMap<&str, &str> = labels
        .unwrap_or_default()
        .iter()
        .map(|(i, l)| (i.as_str(), l.as_str()))
        .collect();
    examples
        .into_iter()
        .map(|e| {
            let label = match map.get(e.id.as_str()) {
                Some(l) => l.to_string(),
                None if is_class_head(&e.clause) => term_text(&e.clause.head.args[1]),
                None => return Err(DatasetError::MissingLabel(e.id)),
            };
            Ok(LabelledExample {
                id: e.id,
                clause: e.clause,
                label,
            })
        })
        .collect()
}

/// A saturator from the text of a background-knowledge file and a mode file.
pub fn load_saturator(bk: &str, modes: &str, config: SaturationConfig) -> Result<Saturator, DatasetError> {
    let program = parse_program(bk).map_err(|e| DatasetError::Parse {
        what: "background".into(),
        message: e.to_string(),
    })?;
    let modes = ModeSet::parse(modes).map_err(|e| DatasetError::Parse {
        what: "modes".into(),
        message: e.to_string(),
    })?;
    Ok(Saturator::new(&program, modes, config))
}
