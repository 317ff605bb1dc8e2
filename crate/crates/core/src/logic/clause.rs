use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::term::{sym, write_atom, Symbol, Term};

/// Position of a term inside a literal: the i-th argument, then the j-th
/// argument of that term, and so on (1-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlaceNumber(Vec<usize>);

impl PlaceNumber {
    /// Returns `None` for the empty sequence or any zero index.
    pub fn new(indices: Vec<usize>) -> Option<Self> {
        if indices.is_empty() || indices.contains(&0) {
            None
        } else {
            Some(PlaceNumber(indices))
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        PlaceNumber(v)
    }
}

impl fmt::Display for PlaceNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{idx}")?;
        }
        f.write_str(">")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("place {place} does not address a term (failed at index {depth})")]
pub struct PositionError {
    pub place: PlaceNumber,
    pub depth: usize,
}

/// An atomic formula `p(t1,...,tn)`. Signs live on the clause.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Literal {
            predicate: sym(predicate),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn key(&self) -> (Symbol, usize) {
        (self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// The term at `place`, following compound arguments downwards.
    pub fn term_at(&self, place: &PlaceNumber) -> Result<&Term, PositionError> {
        let idx = place.indices();
        let err = |depth| PositionError {
            place: place.clone(),
            depth,
        };
        let mut term = self.args.get(idx[0] - 1).ok_or_else(|| err(0))?;
        for (depth, &i) in idx.iter().enumerate().skip(1) {
            term = term.args().get(i - 1).ok_or_else(|| err(depth))?;
        }
        Ok(term)
    }

    /// Every (place, term) pair, depth first and left to right.
    pub fn places(&self) -> Vec<(PlaceNumber, &Term)> {
        fn walk<'a>(place: PlaceNumber, term: &'a Term, out: &mut Vec<(PlaceNumber, &'a Term)>) {
            out.push((place.clone(), term));
            for (i, arg) in term.args().iter().enumerate() {
                walk(place.child(i + 1), arg, out);
            }
        }
        let mut out = Vec::new();
        for (i, arg) in self.args.iter().enumerate() {
            walk(PlaceNumber(vec![i + 1]), arg, &mut out);
        }
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{arg}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// `head :- b1, ..., bk.` Body order is kept for printing; equality of
/// clauses as sets goes through [`clause_equal`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DefiniteClause {
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl DefiniteClause {
    pub fn new(head: Literal, body: Vec<Literal>) -> Self {
        DefiniteClause { head, body }
    }

    pub fn fact(head: Literal) -> Self {
        DefiniteClause { head, body: Vec::new() }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(Literal::is_ground)
    }

    /// Body literals with duplicates removed, first occurrence kept.
    pub fn distinct_body(&self) -> Vec<Literal> {
        let mut seen = BTreeSet::new();
        self.body
            .iter()
            .filter(|l| seen.insert(*l))
            .cloned()
            .collect()
    }

    /// The clause as the set `{head, ¬b1, ..., ¬bk}`.
    pub fn literal_set(&self) -> BTreeSet<(Sign, Literal)> {
        std::iter::once((Sign::Positive, self.head.clone()))
            .chain(self.body.iter().map(|b| (Sign::Negative, b.clone())))
            .collect()
    }
}

impl fmt::Display for DefiniteClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :-")?;
            for (i, lit) in self.body.iter().enumerate() {
                let sep = if i + 1 == self.body.len() { "" } else { "," };
                write!(f, "\n    {lit}{sep}")?;
            }
        }
        f.write_str(".")
    }
}

/// Set equality of two clauses: body order and duplicates are ignored.
pub fn clause_equal(c: &DefiniteClause, d: &DefiniteClause) -> bool {
    c.literal_set() == d.literal_set()
}

/// 1-based line and column of a clause in its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A parsed clause file: definite clauses plus any `:- goal.` directives
/// (mode declarations, settings) that appeared in it.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub clauses: Vec<DefiniteClause>,
    pub positions: Vec<SourcePos>,
    pub directives: Vec<(Term, SourcePos)>,
}

impl Program {
    pub fn from_clauses(clauses: Vec<DefiniteClause>) -> Self {
        let positions = vec![SourcePos::default(); clauses.len()];
        Program {
            clauses,
            positions,
            directives: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Predicate symbols defined by some clause head, in first-definition order.
    pub fn predicates(&self) -> Vec<(Symbol, usize)> {
        let mut seen = BTreeSet::new();
        self.clauses
            .iter()
            .map(|c| c.head.key())
            .filter(|k| seen.insert(k.clone()))
            .collect()
    }

    pub fn defines(&self, predicate: &str, arity: usize) -> bool {
        self.clauses
            .iter()
            .any(|c| &*c.head.predicate == predicate && c.head.arity() == arity)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, _) in &self.directives {
            writeln!(f, ":- {d}.")?;
        }
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(p: &str, args: &[&str]) -> Literal {
        Literal::new(p, args.iter().map(|a| Term::atom(a)).collect())
    }

    #[test]
    fn flat_places() {
        let l = lit("gparent", &["henry", "john"]);
        let places: Vec<_> = l.places().into_iter().map(|(p, t)| (p.to_string(), t.to_string())).collect();
        assert_eq!(places, vec![("<1>".into(), "henry".into()), ("<2>".into(), "john".into())]);
        assert!(Literal::new("p", vec![]).places().is_empty());
    }

    #[test]
    fn nested_places() {
        let l = Literal::new(
            "mem",
            vec![Term::atom("a"), Term::list(vec![Term::atom("a"), Term::atom("b"), Term::atom("c")])],
        );
        let b = l.term_at(&PlaceNumber::new(vec![2, 2, 1]).unwrap()).unwrap();
        assert_eq!(b, &Term::atom("b"));
        let nil = l.term_at(&PlaceNumber::new(vec![2, 2, 2, 2]).unwrap()).unwrap();
        assert_eq!(nil, &Term::atom("nil"));
        let a_places: Vec<_> = l
            .places()
            .into_iter()
            .filter(|(_, t)| **t == Term::atom("a"))
            .map(|(p, _)| p.to_string())
            .collect();
        assert_eq!(a_places, vec!["<1>", "<2,1>"]);
    }

    #[test]
    fn out_of_range_place() {
        let l = lit("gparent", &["henry", "john"]);
        let err = l.term_at(&PlaceNumber::new(vec![3]).unwrap()).unwrap_err();
        assert_eq!(err.depth, 0);
        let err = l.term_at(&PlaceNumber::new(vec![1, 1]).unwrap()).unwrap_err();
        assert_eq!(err.depth, 1);
        assert!(PlaceNumber::new(vec![]).is_none());
    }

    #[test]
    fn set_semantics() {
        let h = lit("h", &[]);
        let a = lit("a", &[]);
        let b = lit("b", &[]);
        let ab = DefiniteClause::new(h.clone(), vec![a.clone(), b.clone()]);
        let ba = DefiniteClause::new(h.clone(), vec![b.clone(), a.clone()]);
        assert!(clause_equal(&ab, &ba));
        let a1 = DefiniteClause::new(h.clone(), vec![a.clone()]);
        let aa = DefiniteClause::new(h.clone(), vec![a.clone(), a.clone()]);
        assert!(clause_equal(&a1, &aa));
        assert!(!clause_equal(&a1, &DefiniteClause::new(h, vec![b])));
    }
}
