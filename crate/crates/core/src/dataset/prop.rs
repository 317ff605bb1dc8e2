use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::logic::{Literal, Term};
use crate::modes::ModeTerm;
use crate::saturation::BottomClause;

use super::DatasetError;

/// One row per example, one 0/1 column per feature.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanFeatureMatrix {
    pub features: Vec<String>,
    pub ids: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<u8>>,
}

impl BooleanFeatureMatrix {
    pub fn width(&self) -> usize {
        self.features.len()
    }

    /// Writes `id,<features>,label` with a header row.
    pub fn write_csv(&self, out: impl Write) -> Result<(), DatasetError> {
        let io = |e: csv::Error| DatasetError::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["id"];
        header.extend(self.features.iter().map(String::as_str));
        header.push("label");
        w.write_record(&header).map_err(io)?;
        for ((id, label), row) in self.ids.iter().zip(&self.labels).zip(&self.rows) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|b| b.to_string()));
            rec.push(label.clone());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| DatasetError::Io(e.to_string()))
    }
}

/// A bottom clause to propositionalise; `None` is the empty clause.
#[derive(Clone, Copy, Debug)]
pub struct PropExample<'a> {
    pub id: &'a str,
    pub label: &'a str,
    pub bottom: Option<&'a BottomClause>,
}

fn matrix<'a, K: Ord + Clone>(
    examples: &[PropExample<'a>],
    keys: impl Fn(&BottomClause) -> BTreeSet<K>,
    name: impl Fn(&K) -> String,
) -> BooleanFeatureMatrix {
    let per_row: Vec<BTreeSet<K>> = examples.iter().map(|e| e.bottom.map(&keys).unwrap_or_default()).collect();
    let columns: BTreeMap<K, usize> = per_row
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<K>>()
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut features = vec![String::new(); columns.len()];
    for (k, &i) in &columns {
        features[i] = name(k);
    }
    let rows = per_row
        .iter()
        .map(|set| {
            let mut row = vec![0u8; columns.len()];
            for k in set {
                row[columns[k]] = 1;
            }
            row
        })
        .collect();
    BooleanFeatureMatrix {
        features,
        ids: examples.iter().map(|e| e.id.to_string()).collect(),
        labels: examples.iter().map(|e| e.label.to_string()).collect(),
        rows,
    }
}

/// Bottom-clause propositionalisation: one column per distinct body literal
/// across all bottom clauses, in canonical literal order.
pub fn propositionalise_bcp(examples: &[PropExample<'_>]) -> BooleanFeatureMatrix {
    matrix(examples, |b| b.clause.body.iter().cloned().collect::<BTreeSet<Literal>>(), |l| l.to_string())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrmFeatures {
    /// One column per predicate symbol and arity.
    #[default]
    Relations,
    /// Relations whose mode has `#` places are split by the constants at
    /// those places, e.g. `has_struc(_,_,_,benzene)`.
    Constants,
}

fn refine(t: &Term, mt: &ModeTerm) -> Term {
    match (mt, t) {
        (ModeTerm::Constant(_), _) => t.clone(),
        (ModeTerm::Structured(f, margs), Term::Compound(g, targs)) if f == g && margs.len() == targs.len() => {
            Term::Compound(g.clone(), targs.iter().zip(margs).map(|(t, m)| refine(t, m)).collect())
        }
        _ => Term::var("_"),
    }
}

fn has_constant(mt: &ModeTerm) -> bool {
    match mt {
        ModeTerm::Constant(_) => true,
        ModeTerm::Structured(_, args) => args.iter().any(has_constant),
        _ => false,
    }
}

/// Relation-presence propositionalisation.
pub fn propositionalise_drm(examples: &[PropExample<'_>], features: DrmFeatures) -> BooleanFeatureMatrix {
    matrix(
        examples,
        |b| {
            let modes = b.body_modes();
            b.clause
                .body
                .iter()
                .map(|l| match (features, modes.get(l)) {
                    (DrmFeatures::Constants, Some(m)) if m.args.iter().any(has_constant) => {
                        let args = l.args.iter().zip(&m.args).map(|(t, mt)| refine(t, mt)).collect();
                        (l.key(), Some(Literal { predicate: l.predicate.clone(), args }))
                    }
                    _ => (l.key(), None),
                })
                .collect()
        },
        |((p, n), refined)| match refined {
            Some(l) => l.to_string(),
            None => format!("{p}/{n}"),
        },
    )
}
