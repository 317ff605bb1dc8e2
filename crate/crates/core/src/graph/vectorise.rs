use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Symbol, Term};
use crate::modes::{ModeSet, ModeTerm, TypeName};

use super::clause_graph::{antecedent, ugraph, ClauseGraph, TypeLabel, Vertex, VertexLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("predicate {0} is not in the vocabulary")]
    UnknownPredicate(String),
    #[error("type {0} is not in the vocabulary")]
    UnknownType(String),
    #[error("constant {term} of type {ty} is not in the vocabulary")]
    UnknownConstant { term: String, ty: String },
    #[error("term {0} of a #-numeric type is not a number")]
    NotNumeric(String),
}

/// The dataset-wide sets `P`, `Γ` and `T_#` that fix the layout of vertex
/// feature vectors. Each list keeps first-appearance order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub predicates: Vec<(Symbol, usize)>,
    pub types: Vec<TypeLabel>,
    pub hashed_terms: Vec<Term>,
    #[serde(skip)]
    index: Index,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Index {
    predicates: HashMap<(Symbol, usize), usize>,
    types: HashMap<TypeLabel, usize>,
    terms: HashMap<Term, usize>,
}

impl Vocabulary {
    pub fn new(predicates: Vec<(Symbol, usize)>, types: Vec<TypeLabel>, hashed_terms: Vec<Term>) -> Self {
        let mut v = Vocabulary::default();
        for p in predicates {
            v.add_predicate(p);
        }
        for t in types {
            v.add_type(t);
        }
        for t in hashed_terms {
            v.add_hashed_term(t);
        }
        v
    }

    /// `P` and `Γ` from the modes in declaration order; `T_#` from
    /// `members` applied to each `#`-ed non-numeric type in `Γ` order.
    pub fn from_modes(modes: &ModeSet, mut members: impl FnMut(&TypeName) -> Vec<Term>) -> Self {
        fn walk(mt: &ModeTerm, out: &mut Vec<TypeLabel>) {
            match mt {
                ModeTerm::Input(t) | ModeTerm::Output(t) => out.push(TypeLabel {
                    name: t.clone(),
                    hashed: false,
                }),
                ModeTerm::Constant(t) => out.push(TypeLabel {
                    name: t.clone(),
                    hashed: true,
                }),
                ModeTerm::Structured(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut v = Vocabulary::default();
        let mut types = Vec::new();
        for m in modes.all() {
            v.add_predicate((m.predicate.clone(), m.arity()));
            m.args.iter().for_each(|a| walk(a, &mut types));
        }
        for t in types {
            v.add_type(t);
        }
        let hashed: Vec<TypeName> = v
            .types
            .iter()
            .filter(|t| t.hashed && !t.name.is_numeric())
            .map(|t| t.name.clone())
            .collect();
        for ty in hashed {
            for term in members(&ty) {
                v.add_hashed_term(term);
            }
        }
        v
    }

    pub fn add_predicate(&mut self, p: (Symbol, usize)) {
        if !self.index.predicates.contains_key(&p) {
            self.index.predicates.insert(p.clone(), self.predicates.len());
            self.predicates.push(p);
        }
    }

    pub fn add_type(&mut self, t: TypeLabel) {
        if !self.index.types.contains_key(&t) {
            self.index.types.insert(t.clone(), self.types.len());
            self.types.push(t);
        }
    }

    pub fn add_hashed_term(&mut self, t: Term) {
        if !self.index.terms.contains_key(&t) {
            self.index.terms.insert(t.clone(), self.hashed_terms.len());
            self.hashed_terms.push(t);
        }
    }

    /// Adds any `#`-ed non-numeric constant of `g` not yet listed.
    pub fn extend_from_graph(&mut self, g: &ClauseGraph) {
        for y in g.ys() {
            if y.ty.hashed && !y.ty.name.is_numeric() {
                self.add_hashed_term(y.term.clone());
            }
        }
    }

    /// Rebuilds the lookup tables, e.g. after deserialising.
    pub fn reindex(&mut self) {
        *self = Vocabulary::new(
            std::mem::take(&mut self.predicates),
            std::mem::take(&mut self.types),
            std::mem::take(&mut self.hashed_terms),
        );
    }

    fn tau_width(&self) -> usize {
        self.hashed_terms.len().max(1)
    }

    /// `|P| + |Γ| + max(|T_#|, 1) + 1`.
    pub fn width(&self) -> usize {
        self.predicates.len() + self.types.len() + self.tau_width() + 1
    }

    /// Human-readable name of every feature column.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.predicates.iter().map(|(p, n)| format!("pred:{p}/{n}")).collect();
        names.extend(self.types.iter().map(|t| format!("type:{t}")));
        if self.hashed_terms.is_empty() {
            names.push("const:".to_string());
        } else {
            names.extend(self.hashed_terms.iter().map(|t| format!("const:{t}")));
        }
        names.push("value".to_string());
        names
    }

    /// `ψ′(v) = f_ρ(v) ⊕ f_γ(v) ⊕ f_τ(v) ⊕ f_ℝ(v)`.
    pub fn features(&self, label: &VertexLabel) -> Result<Vec<f64>, VocabError> {
        let mut v = vec![0.0; self.width()];
        let p = self.predicates.len();
        let g = self.types.len();
        match label {
            VertexLabel::X(pair) => {
                let key = pair.literal.key();
                let i = *self
                    .index
                    .predicates
                    .get(&key)
                    .ok_or_else(|| VocabError::UnknownPredicate(format!("{}/{}", key.0, key.1)))?;
                v[i] = 1.0;
            }
            VertexLabel::Y(t) => {
                let i = *self
                    .index
                    .types
                    .get(&t.ty)
                    .ok_or_else(|| VocabError::UnknownType(t.ty.to_string()))?;
                v[p + i] = 1.0;
                if t.ty.hashed {
                    if t.ty.name.is_numeric() {
                        let n = t.term.as_number().ok_or_else(|| VocabError::NotNumeric(t.term.to_string()))?;
                        v[p + g + self.tau_width()] = n.value();
                    } else {
                        let k = *self.index.terms.get(&t.term).ok_or_else(|| VocabError::UnknownConstant {
                            term: t.term.to_string(),
                            ty: t.ty.to_string(),
                        })?;
                        v[p + g + k] = 1.0;
                    }
                }
            }
        }
        Ok(v)
    }
}

/// A graph whose vertices carry numeric feature vectors. Vertices are the
/// x-vertices in order followed by the y-vertices; `edges` lists directed
/// pairs of vertex indices, sorted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorisedGraph {
    pub labels: Vec<VertexLabel>,
    pub features: Vec<Vec<f64>>,
    pub edges: Vec<(usize, usize)>,
    pub num_x: usize,
    pub exhaustive: bool,
}

impl VectorisedGraph {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_y(&self) -> usize {
        self.labels.len() - self.num_x
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Edge count with each undirected edge counted once.
    pub fn undirected_edges(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a < b).count()
    }
}

/// `Vectorise`: replaces each vertex label by its feature vector.
pub fn vectorise(g: &ClauseGraph, vocab: &Vocabulary) -> Result<VectorisedGraph, VocabError> {
    let num_x = g.xs().len();
    let mut labels = Vec::with_capacity(g.num_vertices());
    labels.extend(g.xs().iter().cloned().map(VertexLabel::X));
    labels.extend(g.ys().iter().cloned().map(VertexLabel::Y));
    let features = labels.iter().map(|l| vocab.features(l)).collect::<Result<_, _>>()?;
    let idx = |v: Vertex| match v {
        Vertex::X(i) => i,
        Vertex::Y(j) => num_x + j,
    };
    let mut edges: Vec<(usize, usize)> = g.arcs().iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    edges.sort_unstable();
    Ok(VectorisedGraph {
        labels,
        features,
        edges,
        num_x,
        exhaustive: g.exhaustive,
    })
}

/// `Vectorise(UGraph(Antecedent(g)))`.
pub fn transform_graph(g: &ClauseGraph, vocab: &Vocabulary) -> Result<VectorisedGraph, VocabError> {
    vectorise(&ugraph(&antecedent(g)), vocab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::clause_to_graph;
    use crate::logic::parse_program;
    use crate::modes::{FactTypes, Language, DEFAULT_CAP};

    #[test]
    fn colour_vectors() {
        let modes = ModeSet::parse(":- modeh(p(+real)).\n:- modeb(q(+real,#colour)).\n:- modeb(r(#colour,#real)).").unwrap();
        let types = FactTypes::new().with("colour", [Term::atom("white"), Term::atom("black")]);
        let vocab = Vocabulary::from_modes(&modes, |_| vec![Term::atom("white"), Term::atom("black")]);
        assert_eq!(vocab.types.iter().map(|t| t.to_string()).collect::<Vec<_>>(), ["real", "#colour", "#real"]);
        assert_eq!(vocab.width(), 9);

        let lang = Language::new(&modes, &types, 1);
        let c = parse_program("p(1.0) :- q(1.0,white), r(white,1.0).").unwrap().clauses.remove(0);
        let g = clause_to_graph(Some(&c), &lang, DEFAULT_CAP, None).unwrap();
        assert_eq!(g.e_in(), vec![(0, 0), (0, 1)]);
        assert_eq!(g.e_out(), vec![(1, 1), (2, 1), (2, 2)]);

        let v = transform_graph(&g, &vocab).unwrap();
        // Vertices: x2, x3, then y1, y2, y3.
        assert_eq!(v.num_x, 2);
        assert_eq!(v.features[0], [0., 1., 0., 0., 0., 0., 0., 0., 0.]);
        assert_eq!(v.features[1], [0., 0., 1., 0., 0., 0., 0., 0., 0.]);
        assert_eq!(v.features[2], [0., 0., 0., 1., 0., 0., 0., 0., 0.]);
        assert_eq!(v.features[3], [0., 0., 0., 0., 1., 0., 1., 0., 0.]);
        assert_eq!(v.features[4], [0., 0., 0., 0., 0., 1., 0., 0., 1.]);
        assert_eq!(v.edges.len(), 8);
    }

    #[test]
    fn unknown_constant_is_an_error() {
        let modes = ModeSet::parse(":- modeh(p(+real)).\n:- modeb(q(+real,#colour)).").unwrap();
        let types = FactTypes::new().with("colour", [Term::atom("red")]);
        let vocab = Vocabulary::from_modes(&modes, |_| vec![Term::atom("white")]);
        let lang = Language::new(&modes, &types, 1);
        let c = parse_program("p(1.0) :- q(1.0,red).").unwrap().clauses.remove(0);
        let g = clause_to_graph(Some(&c), &lang, DEFAULT_CAP, None).unwrap();
        assert!(matches!(transform_graph(&g, &vocab), Err(VocabError::UnknownConstant { .. })));
        let mut vocab = vocab;
        vocab.extend_from_graph(&g);
        assert!(transform_graph(&g, &vocab).is_ok());
    }

    #[test]
    fn empty_graph() {
        let v = transform_graph(&ClauseGraph::top(), &Vocabulary::default()).unwrap();
        assert!(v.is_empty());
        assert_eq!(Vocabulary::default().width(), 2);
    }
}
