//! Ground first-order syntax: terms, literals, definite clauses,
//! place-numbering and the clause-file reader.

mod clause;
mod parser;
mod subsume;
mod term;

pub use clause::{clause_equal, DefiniteClause, Literal, PlaceNumber, PositionError, Program, Sign, SourcePos};
pub use parser::{parse_literal, parse_program, parse_term, ParseError, ParseErrorKind};
pub use subsume::subsumes;
pub use term::{sym, Number, Symbol, Term, LIST_FUNCTOR, NIL};

/// The term at `place` in `literal`.
pub fn term_at_place<'a>(literal: &'a Literal, place: &PlaceNumber) -> Result<&'a Term, PositionError> {
    literal.term_at(place)
}

/// Every (place, term) pair of `literal`, depth first, left to right.
pub fn enumerate_places(literal: &Literal) -> Vec<(PlaceNumber, Term)> {
    literal.places().into_iter().map(|(p, t)| (p, t.clone())).collect()
}
