use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::logic::{DefiniteClause, Literal, Term};

use super::decl::{Mode, ModeKind, ModeSet, TypeName};
use super::types::TypeOracle;

/// Default bound on the number of sequences (or mode assignments) explored
/// per clause.
pub const DEFAULT_CAP: usize = 256;

/// Leaves visited by the assignment search before it gives up.
const SEARCH_LIMIT: usize = 200_000;

/// A literal paired with the mode it is read under.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LmPair {
    pub literal: Literal,
    pub mode: Mode,
}

impl LmPair {
    pub fn new(literal: Literal, mode: Mode) -> Self {
        LmPair { literal, mode }
    }
}

impl fmt::Display for LmPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.literal, self.mode)
    }
}

/// `⟨(λ1,μ1), ..., (λk,μk)⟩`; the first pair is the head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaMuSeq(pub Vec<LmPair>);

impl LambdaMuSeq {
    pub fn pairs(&self) -> &[LmPair] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LambdaMuSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(">")
    }
}

/// Whether head output-terms must be produced by some body literal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoveragePolicy {
    #[default]
    Strict,
    /// Head outputs not produced in the body are exempt from the coverage
    /// and depth conditions. Used for bottom clauses whose head outputs
    /// saturation could not reach.
    RelaxedHeadOutputs,
}

/// The parameters fixing a mode language: modes, type definitions, depth.
#[derive(Clone, Copy)]
pub struct Language<'a> {
    pub modes: &'a ModeSet,
    pub types: &'a dyn TypeOracle,
    pub depth: u32,
    pub policy: CoveragePolicy,
}

impl<'a> Language<'a> {
    pub fn new(modes: &'a ModeSet, types: &'a dyn TypeOracle, depth: u32) -> Self {
        Language {
            modes,
            types,
            depth,
            policy: CoveragePolicy::Strict,
        }
    }

    pub fn with_policy(mut self, policy: CoveragePolicy) -> Self {
        self.policy = policy;
        self
    }

    /// `literal` conforms to `mode` and every input, output and constant
    /// term is a member of its declared type.
    pub fn well_typed(&self, literal: &Literal, mode: &Mode) -> bool {
        if !mode.conforms(literal) {
            return false;
        }
        let io = mode.io_terms(literal);
        io.inputs
            .iter()
            .chain(&io.outputs)
            .chain(&io.constants)
            .all(|(t, ty, _)| self.types.is_member(t, ty))
    }

    fn candidates(&self, literal: &Literal, kind: ModeKind) -> Vec<Mode> {
        self.modes
            .all()
            .iter()
            .filter(|m| m.kind == kind && self.well_typed(literal, m))
            .cloned()
            .collect()
    }
}

/// Which condition a candidate sequence fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceViolation {
    #[error("sequence is empty")]
    Empty,
    #[error("first pair must be the head literal under a modeh")]
    BadHead,
    #[error("pair {0} must be a body literal under a modeb")]
    BadBodyMode(usize),
    #[error("pair {0} repeats a body literal")]
    Repeated(usize),
    #[error("body literals of the sequence and the clause differ")]
    Coverage,
    #[error("pair {0} does not conform to its mode or has an ill-typed term")]
    Untyped(usize),
    #[error("input {term} of pair {index} is not available")]
    Unavailable { index: usize, term: Term },
    #[error("head output {0} is not produced by the body")]
    HeadOutput(Term),
    #[error("term {term} has depth {depth:?}, limit {limit}")]
    TooDeep { term: Term, depth: Option<u32>, limit: u32 },
}

type Key = (Term, TypeName);

fn inputs(p: &LmPair) -> Vec<Key> {
    p.mode.io_terms(&p.literal).inputs.into_iter().map(|(t, ty, _)| (t, ty)).collect()
}

fn outputs(p: &LmPair) -> Vec<Key> {
    p.mode.io_terms(&p.literal).outputs.into_iter().map(|(t, ty, _)| (t, ty)).collect()
}

/// Depth of every input/output term of a sequence. Head input-terms have
/// depth 0; any other term has depth one more than the shallowest other
/// input/output term of a body literal in which it is an output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepthMap {
    depths: HashMap<Key, u32>,
}

impl DepthMap {
    pub fn of(pairs: &[LmPair]) -> Self {
        let mut depths = HashMap::new();
        let mut queue = VecDeque::new();
        if let Some(head) = pairs.first() {
            for k in inputs(head) {
                if !depths.contains_key(&k) {
                    depths.insert(k.clone(), 0);
                    queue.push_back(k);
                }
            }
        }
        let body: Vec<(Vec<Key>, Vec<Key>)> = pairs
            .iter()
            .skip(1)
            .map(|p| {
                let outs = outputs(p);
                let mut all = inputs(p);
                all.extend(outs.iter().cloned());
                (all, outs)
            })
            .collect();
        while let Some(k) = queue.pop_front() {
            let d = depths[&k];
            for (all, outs) in &body {
                if !all.contains(&k) {
                    continue;
                }
                for o in outs {
                    if o.0 != k.0 && !depths.contains_key(o) {
                        depths.insert(o.clone(), d + 1);
                        queue.push_back(o.clone());
                    }
                }
            }
        }
        DepthMap { depths }
    }

    /// `None` stands for an infinite depth (the term is never produced).
    pub fn get(&self, term: &Term, ty: &TypeName) -> Option<u32> {
        self.depths.get(&(term.clone(), ty.clone())).copied()
    }

    /// Shallowest depth of `term` under any type.
    pub fn min_depth(&self, term: &Term) -> Option<u32> {
        self.depths.iter().filter(|((t, _), _)| t == term).map(|(_, d)| *d).min()
    }
}

/// Depth of `term` (of type `ty`) relative to the sequence `seq`.
pub fn term_depth(seq: &LambdaMuSeq, term: &Term, ty: &TypeName) -> Option<u32> {
    DepthMap::of(&seq.0).get(term, ty)
}

/// Order-independent conditions: head-output coverage and the depth bound.
fn check_closure(pairs: &[LmPair], lang: &Language<'_>) -> Result<(), SequenceViolation> {
    let head_outputs = outputs(&pairs[0]);
    let produced: HashSet<Key> = pairs[1..].iter().flat_map(outputs).collect();
    let mut exempt = HashSet::new();
    for k in &head_outputs {
        if !produced.contains(k) {
            match lang.policy {
                CoveragePolicy::Strict => return Err(SequenceViolation::HeadOutput(k.0.clone())),
                CoveragePolicy::RelaxedHeadOutputs => {
                    exempt.insert(k.clone());
                }
            }
        }
    }
    let depths = DepthMap::of(pairs);
    for p in pairs {
        let io = p.mode.io_terms(&p.literal);
        for (t, ty, _) in io.inputs.iter().chain(&io.outputs) {
            let k = (t.clone(), ty.clone());
            if exempt.contains(&k) {
                continue;
            }
            match depths.depths.get(&k) {
                Some(&d) if d <= lang.depth => {}
                depth => {
                    return Err(SequenceViolation::TooDeep {
                        term: t.clone(),
                        depth: depth.copied(),
                        limit: lang.depth,
                    })
                }
            }
        }
    }
    Ok(())
}

/// Checks every λμ-sequence condition for `seq` against `clause`.
pub fn check_lambda_mu_sequence(
    clause: &DefiniteClause,
    seq: &LambdaMuSeq,
    lang: &Language<'_>,
) -> Result<(), SequenceViolation> {
    let pairs = &seq.0;
    let head = pairs.first().ok_or(SequenceViolation::Empty)?;
    if head.literal != clause.head || head.mode.kind != ModeKind::Head {
        return Err(SequenceViolation::BadHead);
    }
    let mut seen = HashSet::new();
    for (i, p) in pairs.iter().enumerate().skip(1) {
        if p.mode.kind != ModeKind::Body {
            return Err(SequenceViolation::BadBodyMode(i));
        }
        if !seen.insert(&p.literal) {
            return Err(SequenceViolation::Repeated(i));
        }
    }
    let body: HashSet<&Literal> = clause.body.iter().collect();
    if seen != body {
        return Err(SequenceViolation::Coverage);
    }
    for (i, p) in pairs.iter().enumerate() {
        if !lang.modes.all().contains(&p.mode) || !lang.well_typed(&p.literal, &p.mode) {
            return Err(SequenceViolation::Untyped(i));
        }
    }
    let mut available: HashSet<Key> = inputs(head).into_iter().collect();
    for (i, p) in pairs.iter().enumerate().skip(1) {
        for k in inputs(p) {
            if !available.contains(&k) {
                return Err(SequenceViolation::Unavailable { index: i, term: k.0 });
            }
        }
        available.extend(outputs(p));
    }
    check_closure(pairs, lang)
}

pub fn is_lambda_mu_sequence(clause: &DefiniteClause, seq: &LambdaMuSeq, lang: &Language<'_>) -> bool {
    check_lambda_mu_sequence(clause, seq, lang).is_ok()
}

/// A list of sequences plus whether the search that produced it finished.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceSearch {
    pub sequences: Vec<LambdaMuSeq>,
    pub exhaustive: bool,
}

/// A valid choice of head mode and one mode per distinct body literal,
/// with body pairs kept in clause order.
struct Assignment {
    head: LmPair,
    body: Vec<LmPair>,
}

/// Orders the body pairs so that every input is available when its literal
/// is reached, preferring clause order. `None` if no such order exists.
fn greedy_order(head: &LmPair, body: &[LmPair]) -> Option<Vec<LmPair>> {
    let mut available: HashSet<Key> = inputs(head).into_iter().collect();
    let mut placed = vec![false; body.len()];
    let mut order = vec![head.clone()];
    'outer: while order.len() <= body.len() {
        for (i, p) in body.iter().enumerate() {
            if !placed[i] && inputs(p).iter().all(|k| available.contains(k)) {
                placed[i] = true;
                available.extend(outputs(p));
                order.push(p.clone());
                continue 'outer;
            }
        }
        return None;
    }
    Some(order)
}

/// Odometer step over per-literal mode choices, last literal fastest.
/// False once every combination has been visited.
fn advance(choice: &mut [usize], options: &[Vec<Mode>]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < options[i].len() {
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// Backtracking search over mode assignments, in head-mode then clause order
/// then declaration order. Calls `visit` with each valid assignment's greedy
/// ordering; `visit` returns false to stop.
fn search_assignments(
    clause: &DefiniteClause,
    lang: &Language<'_>,
    mut visit: impl FnMut(Assignment, Vec<LmPair>) -> bool,
) -> bool {
    let body = clause.distinct_body();
    let heads = lang.candidates(&clause.head, ModeKind::Head);
    let options: Vec<Vec<Mode>> = body.iter().map(|l| lang.candidates(l, ModeKind::Body)).collect();
    if heads.is_empty() || options.iter().any(Vec::is_empty) {
        return true;
    }
    let mut leaves = 0usize;
    let mut choice = vec![0usize; body.len()];
    for h in heads {
        let head = LmPair::new(clause.head.clone(), h);
        choice.iter_mut().for_each(|c| *c = 0);
        loop {
            leaves += 1;
            if leaves > SEARCH_LIMIT {
                return false;
            }
            let pairs: Vec<LmPair> = body
                .iter()
                .zip(&choice)
                .zip(&options)
                .map(|((l, &c), opts)| LmPair::new(l.clone(), opts[c].clone()))
                .collect();
            if let Some(order) = greedy_order(&head, &pairs) {
                if check_closure(&order, lang).is_ok() {
                    let assignment = Assignment {
                        head: head.clone(),
                        body: pairs,
                    };
                    if !visit(assignment, order) {
                        return false;
                    }
                }
            }
            if !advance(&mut choice, &options) {
                break;
            }
        }
    }
    true
}

/// One sequence per valid mode assignment, each in its clause-order-first
/// ordering. At most `cap` are returned.
pub fn mode_assignments(clause: &DefiniteClause, lang: &Language<'_>, cap: usize) -> SequenceSearch {
    let mut sequences = Vec::new();
    let finished = search_assignments(clause, lang, |_, order| {
        if sequences.len() == cap {
            return false;
        }
        sequences.push(LambdaMuSeq(order));
        true
    });
    SequenceSearch {
        sequences,
        exhaustive: finished,
    }
}

fn orderings(
    body: &[LmPair],
    placed: &mut [bool],
    available: &mut Vec<Key>,
    prefix: &mut Vec<LmPair>,
    out: &mut Vec<LambdaMuSeq>,
    limit: usize,
) -> bool {
    if prefix.len() == body.len() + 1 {
        if out.len() == limit {
            return false;
        }
        out.push(LambdaMuSeq(prefix.clone()));
        return true;
    }
    for i in 0..body.len() {
        if placed[i] || !inputs(&body[i]).iter().all(|k| available.contains(k)) {
            continue;
        }
        placed[i] = true;
        let mark = available.len();
        available.extend(outputs(&body[i]));
        prefix.push(body[i].clone());
        let go_on = orderings(body, placed, available, prefix, out, limit);
        prefix.pop();
        available.truncate(mark);
        placed[i] = false;
        if !go_on {
            return false;
        }
    }
    true
}

/// All λμ-sequences for `clause`, up to `cap`: for each valid mode
/// assignment (head mode first, then clause order, then declaration order)
/// every admissible ordering of the body, clause order first.
pub fn enumerate_lambda_mu_sequences(clause: &DefiniteClause, lang: &Language<'_>, cap: usize) -> SequenceSearch {
    let mut sequences = Vec::new();
    let finished = search_assignments(clause, lang, |a, _| {
        let mut placed = vec![false; a.body.len()];
        let mut available = inputs(&a.head);
        let mut prefix = vec![a.head.clone()];
        orderings(&a.body, &mut placed, &mut available, &mut prefix, &mut sequences, cap)
    });
    SequenceSearch {
        sequences,
        exhaustive: finished,
    }
}

/// Membership in the mode language; `None` is the empty clause.
pub fn in_mode_language(clause: Option<&DefiniteClause>, lang: &Language<'_>) -> bool {
    match clause {
        None => true,
        Some(c) => !mode_assignments(c, lang, 1).sequences.is_empty(),
    }
}
