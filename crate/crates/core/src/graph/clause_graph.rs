use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{DefiniteClause, Literal, PlaceNumber, Sign, Term};
use crate::modes::{mode_assignments, LambdaMuSeq, Language, LmPair, ModeKind, Role, TypeName};
use crate::saturation::SaturationError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("clause is not in the mode language: {0}")]
    NotInLanguage(String),
    #[error("graph does not describe a definite clause: {0}")]
    Shape(String),
    #[error("literal {0} is not in the bottom clause")]
    NotSubset(String),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

/// A type name as stored on a y-vertex; constants carry a `#` mark.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeLabel {
    pub name: TypeName,
    pub hashed: bool,
}

impl TypeLabel {
    pub fn plain(name: &str) -> Self {
        TypeLabel {
            name: TypeName::new(name),
            hashed: false,
        }
    }

    pub fn hashed(name: &str) -> Self {
        TypeLabel {
            name: TypeName::new(name),
            hashed: true,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hashed {
            f.write_str("#")?;
        }
        write!(f, "{}", self.name)
    }
}

/// `(τ, γ)`, the label of a y-vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermLabel {
    pub term: Term,
    pub ty: TypeLabel,
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.term, self.ty)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    X(usize),
    Y(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    X(LmPair),
    Y(TermLabel),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::X(p) => write!(f, "{p}"),
            VertexLabel::Y(t) => write!(f, "{t}"),
        }
    }
}

/// A labelled directed bipartite graph `((X, Y, E), ψ)`.
///
/// Vertex ids are positions in `xs` / `ys`; labels are unique, so ids are
/// interning handles and comparisons between graphs go through labels.
#[derive(Clone, Debug, Default)]
pub struct ClauseGraph {
    xs: Vec<LmPair>,
    ys: Vec<TermLabel>,
    x_index: HashMap<LmPair, usize>,
    y_index: HashMap<TermLabel, usize>,
    arcs: Vec<(Vertex, Vertex)>,
    arc_set: HashSet<(Vertex, Vertex)>,
    /// False when the λμ-sequence search behind `X` was cut short.
    pub exhaustive: bool,
}

impl ClauseGraph {
    /// `CG_⊤`, the empty graph.
    pub fn top() -> Self {
        ClauseGraph {
            exhaustive: true,
            ..Default::default()
        }
    }

    pub fn is_top(&self) -> bool {
        self.xs.is_empty() && self.ys.is_empty()
    }

    pub fn xs(&self) -> &[LmPair] {
        &self.xs
    }

    pub fn ys(&self) -> &[TermLabel] {
        &self.ys
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    pub fn num_vertices(&self) -> usize {
        self.xs.len() + self.ys.len()
    }

    /// Arcs `y → x`.
    pub fn e_in(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .filter_map(|a| match *a {
                (Vertex::Y(y), Vertex::X(x)) => Some((y, x)),
                _ => None,
            })
            .collect()
    }

    /// Arcs `x → y`.
    pub fn e_out(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .filter_map(|a| match *a {
                (Vertex::X(x), Vertex::Y(y)) => Some((x, y)),
                _ => None,
            })
            .collect()
    }

    pub fn add_x(&mut self, pair: LmPair) -> usize {
        if let Some(&i) = self.x_index.get(&pair) {
            return i;
        }
        self.xs.push(pair.clone());
        self.x_index.insert(pair, self.xs.len() - 1);
        self.xs.len() - 1
    }

    pub fn add_y(&mut self, label: TermLabel) -> usize {
        if let Some(&i) = self.y_index.get(&label) {
            return i;
        }
        self.ys.push(label.clone());
        self.y_index.insert(label, self.ys.len() - 1);
        self.ys.len() - 1
    }

    /// Adds an arc between an x- and a y-vertex (either direction).
    ///
    /// # Panics
    /// If both ends are on the same side or an id is out of range.
    pub fn add_arc(&mut self, from: Vertex, to: Vertex) {
        let ok = match (from, to) {
            (Vertex::X(x), Vertex::Y(y)) | (Vertex::Y(y), Vertex::X(x)) => x < self.xs.len() && y < self.ys.len(),
            _ => false,
        };
        assert!(ok, "arc {from:?} -> {to:?} breaks bipartiteness or is out of range");
        if self.arc_set.insert((from, to)) {
            self.arcs.push((from, to));
        }
    }

    pub fn label(&self, v: Vertex) -> VertexLabel {
        match v {
            Vertex::X(i) => VertexLabel::X(self.xs[i].clone()),
            Vertex::Y(i) => VertexLabel::Y(self.ys[i].clone()),
        }
    }

    pub fn x_of(&self, pair: &LmPair) -> Option<usize> {
        self.x_index.get(pair).copied()
    }

    pub fn y_of(&self, label: &TermLabel) -> Option<usize> {
        self.y_index.get(label).copied()
    }

    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.arc_set.contains(&(from, to))
    }

    pub fn x_labels(&self) -> BTreeSet<&LmPair> {
        self.xs.iter().collect()
    }

    pub fn y_labels(&self) -> BTreeSet<&TermLabel> {
        self.ys.iter().collect()
    }

    pub fn arc_labels(&self) -> BTreeSet<(VertexLabel, VertexLabel)> {
        self.arcs.iter().map(|&(a, b)| (self.label(a), self.label(b))).collect()
    }

    /// Deterministic text rendering of X, Y, E_in, E_out and ψ (1-based ids).
    pub fn dump(&self) -> String {
        let mut s = String::new();
        s.push_str("X:\n");
        for (i, p) in self.xs.iter().enumerate() {
            let _ = writeln!(s, "  x{} = {}", i + 1, p);
        }
        s.push_str("Y:\n");
        for (i, t) in self.ys.iter().enumerate() {
            let _ = writeln!(s, "  y{} = {}", i + 1, t);
        }
        let mut e_in = self.e_in();
        e_in.sort_by_key(|&(y, x)| (x, y));
        s.push_str("E_in:\n");
        for (y, x) in e_in {
            let _ = writeln!(s, "  (y{}, x{})", y + 1, x + 1);
        }
        let mut e_out = self.e_out();
        e_out.sort();
        s.push_str("E_out:\n");
        for (x, y) in e_out {
            let _ = writeln!(s, "  (x{}, y{})", x + 1, y + 1);
        }
        s
    }
}

/// Graph identity under label comparison.
impl PartialEq for ClauseGraph {
    fn eq(&self, other: &Self) -> bool {
        cg_leq(self, other) && cg_leq(other, self)
    }
}

impl Eq for ClauseGraph {}

/// `CG1 ⪯cg CG2`: vertex labels and arcs of `a` are all present in `b`.
pub fn cg_leq(a: &ClauseGraph, b: &ClauseGraph) -> bool {
    a.xs.iter().all(|p| b.x_index.contains_key(p))
        && a.ys.iter().all(|t| b.y_index.contains_key(t))
        && a.arcs.iter().all(|&(u, v)| {
            let map = |w: Vertex| match w {
                Vertex::X(i) => b.x_of(&a.xs[i]).map(Vertex::X),
                Vertex::Y(i) => b.y_of(&a.ys[i]).map(Vertex::Y),
            };
            matches!((map(u), map(v)), (Some(u2), Some(v2)) if b.has_arc(u2, v2))
        })
}

/// The `(λ, μ)` pairs occurring in λμ-sequences for a clause.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lits {
    pub pairs: Vec<LmPair>,
    pub exhaustive: bool,
}

/// `Lits(C)`. The union of pairs over all sequences equals the union over
/// valid mode assignments, since orderings do not change the pairs. Pairs
/// of `witness` come first, then those of further assignments in search
/// order.
pub fn lits(
    clause: Option<&DefiniteClause>,
    lang: &Language<'_>,
    cap: usize,
    witness: Option<&LambdaMuSeq>,
) -> Result<Lits, GraphError> {
    let Some(clause) = clause else {
        return Ok(Lits {
            pairs: Vec::new(),
            exhaustive: true,
        });
    };
    let search = mode_assignments(clause, lang, cap);
    if search.sequences.is_empty() && witness.is_none() {
        return Err(GraphError::NotInLanguage(clause.head.to_string()));
    }
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for seq in witness.into_iter().chain(&search.sequences) {
        for p in seq.pairs() {
            if seen.insert(p.clone()) {
                pairs.push(p.clone());
            }
        }
    }
    Ok(Lits {
        pairs,
        exhaustive: search.exhaustive,
    })
}

/// `Terms(C)`: every mode-visible place of every pair in `Lits(C)`.
pub fn terms(lits: &Lits) -> Vec<(LmPair, PlaceNumber)> {
    lits.pairs
        .iter()
        .flat_map(|p| p.mode.places().into_iter().map(move |mp| (p.clone(), mp.place)))
        .collect()
}

/// `TermType((λ, μ, π))`: the term at `π` with its declared type,
/// `#`-marked for constant places. `None` when `π` has no simple mode-term.
pub fn term_type(pair: &LmPair, place: &PlaceNumber) -> Option<TermLabel> {
    let (role, ty) = pair.mode.mode_type(place)?;
    let term = pair.literal.term_at(place).ok()?.clone();
    Some(TermLabel {
        term,
        ty: TypeLabel {
            name: ty.clone(),
            hashed: role == Role::Constant,
        },
    })
}

/// Builds the clause-graph for the given `Lits(C)`.
pub fn graph_from_lits(lits: &Lits) -> ClauseGraph {
    let mut g = ClauseGraph::top();
    g.exhaustive = lits.exhaustive;
    for pair in &lits.pairs {
        let x = g.add_x(pair.clone());
        for mp in pair.mode.places() {
            let Some(label) = term_type(pair, &mp.place) else { continue };
            let y = g.add_y(label);
            match mp.role {
                Role::Input => g.add_arc(Vertex::Y(y), Vertex::X(x)),
                Role::Output | Role::Constant => g.add_arc(Vertex::X(x), Vertex::Y(y)),
            }
        }
    }
    g
}

/// `ClauseToGraph(C)`; `None` is the empty clause and maps to `CG_⊤`.
pub fn clause_to_graph(
    clause: Option<&DefiniteClause>,
    lang: &Language<'_>,
    cap: usize,
    witness: Option<&LambdaMuSeq>,
) -> Result<ClauseGraph, GraphError> {
    Ok(graph_from_lits(&lits(clause, lang, cap, witness)?))
}

/// Left inverse of [`clause_to_graph`]: head from modeh-labelled vertices,
/// body from modeb-labelled ones, in vertex order.
pub fn graph_to_clause(g: &ClauseGraph) -> Result<Option<DefiniteClause>, GraphError> {
    if g.xs.is_empty() {
        return Ok(None);
    }
    let mut heads: Vec<&Literal> = Vec::new();
    let mut body: Vec<Literal> = Vec::new();
    for p in &g.xs {
        match p.mode.kind {
            ModeKind::Head if !heads.contains(&&p.literal) => heads.push(&p.literal),
            ModeKind::Body if !body.contains(&p.literal) => body.push(p.literal.clone()),
            _ => {}
        }
    }
    match heads.as_slice() {
        [head] => Ok(Some(DefiniteClause::new((*head).clone(), body))),
        [] => Err(GraphError::Shape("no modeh-labelled vertex".into())),
        _ => Err(GraphError::Shape(format!("{} distinct head literals", heads.len()))),
    }
}

/// Subgraph on the x-vertices accepted by `keep_x`, their incident arcs
/// and the y-vertices those arcs touch. Order is preserved.
fn restrict(g: &ClauseGraph, keep_x: impl Fn(&LmPair) -> bool) -> ClauseGraph {
    let mut out = ClauseGraph::top();
    out.exhaustive = g.exhaustive;
    let kept: Vec<bool> = g.xs.iter().map(&keep_x).collect();
    for (i, p) in g.xs.iter().enumerate() {
        if kept[i] {
            out.add_x(p.clone());
        }
    }
    let touches = |a: &(Vertex, Vertex)| match *a {
        (Vertex::X(x), _) | (_, Vertex::X(x)) => kept[x],
        _ => false,
    };
    let mut used = vec![false; g.ys.len()];
    for a in g.arcs.iter().filter(|a| touches(a)) {
        match *a {
            (Vertex::Y(y), _) | (_, Vertex::Y(y)) => used[y] = true,
            _ => {}
        }
    }
    for (j, t) in g.ys.iter().enumerate() {
        if used[j] {
            out.add_y(t.clone());
        }
    }
    let map = |v: Vertex, out: &ClauseGraph| match v {
        Vertex::X(i) => Vertex::X(out.x_of(&g.xs[i]).expect("kept x")),
        Vertex::Y(j) => Vertex::Y(out.y_of(&g.ys[j]).expect("used y")),
    };
    for &a in g.arcs.iter().filter(|a| touches(a)) {
        let (u, v) = (map(a.0, &out), map(a.1, &out));
        out.add_arc(u, v);
    }
    out
}

/// Removes the head vertices, their arcs, and y-vertices left isolated.
pub fn antecedent(g: &ClauseGraph) -> ClauseGraph {
    restrict(g, |p| p.mode.kind != ModeKind::Head)
}

/// Symmetric closure of the arc set.
pub fn ugraph(g: &ClauseGraph) -> ClauseGraph {
    let mut out = g.clone();
    for &(u, v) in &g.arcs {
        out.add_arc(v, u);
    }
    out
}

/// The subgraph of a bottom-graph picked out by a clause `Cθ ⊆ ⊥`: the
/// x-vertices whose literal (with its sign) is in `Cθ`, their arcs and the
/// y-vertices at the other ends.
pub fn explanation_subgraph(bottom: &ClauseGraph, ctheta: &DefiniteClause) -> Result<ClauseGraph, GraphError> {
    let bot = graph_to_clause(bottom)?.ok_or_else(|| GraphError::NotSubset(ctheta.head.to_string()))?;
    let bot_set = bot.literal_set();
    let wanted = ctheta.literal_set();
    if let Some((_, l)) = wanted.iter().find(|l| !bot_set.contains(l)) {
        return Err(GraphError::NotSubset(l.to_string()));
    }
    Ok(restrict(bottom, |p| {
        let sign = match p.mode.kind {
            ModeKind::Head => Sign::Positive,
            ModeKind::Body => Sign::Negative,
        };
        wanted.contains(&(sign, p.literal.clone()))
    }))
}
