//! Reader for the Prolog-compatible clause format used by data, background
//! knowledge, type definitions and mode files.
//!
//! Supported: `head :- b1, ..., bk.`, `fact.`, `:- directive.`, `%` line
//! comments, lowercase or quoted atoms, variables (uppercase or `_`),
//! integers and decimals, bracketed lists with an optional `|` tail, and the
//! prefix markers `+ - #` used inside mode declarations.

use thiserror::Error;

use super::clause::{DefiniteClause, Literal, Program, SourcePos};
use super::term::{sym, Number, Term, NIL};

/// Directive names accepted as headless clauses.
const DIRECTIVES: &[&str] = &[
    "modeh",
    "modeb",
    "mode",
    "set",
    "determination",
    "dynamic",
    "discontiguous",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unterminated quoted atom")]
    UnterminatedQuote,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("not a definite clause: {0}")]
    NonDefinite(&'static str),
    #[error("{0} cannot be used as a literal")]
    NotCallable(String),
    #[error("invalid number {0:?}")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Var(String),
    Num(String),
    Open,
    Close,
    LBracket,
    RBracket,
    Comma,
    Bar,
    End,
    Neck,
    Semicolon,
    Plus,
    Minus,
    Hash,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom {a:?}"),
            Tok::Var(v) => format!("variable {v}"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Open => "'('".into(),
            Tok::Close => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Bar => "'|'".into(),
            Tok::End => "'.'".into(),
            Tok::Neck => "':-'".into(),
            Tok::Semicolon => "';'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Hash => "'#'".into(),
            Tok::Star => "'*'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: SourcePos,
    /// Byte offsets, used to tell `-1` from `- 1`.
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let byte_at = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(text.len());
    while i < chars.len() {
        let c = chars[i].1;
        let pos = SourcePos { line, column: col };
        let start_i = i;
        let err = |kind| ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        };
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => {
                i += 1;
                Tok::Open
            }
            ')' => {
                i += 1;
                Tok::Close
            }
            '[' => {
                i += 1;
                Tok::LBracket
            }
            ']' => {
                i += 1;
                Tok::RBracket
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '|' => {
                i += 1;
                Tok::Bar
            }
            ';' => {
                i += 1;
                Tok::Semicolon
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '#' => {
                i += 1;
                Tok::Hash
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            ':' if chars.get(i + 1).map(|c| c.1) == Some('-') => {
                i += 2;
                Tok::Neck
            }
            '.' => {
                i += 1;
                Tok::End
            }
            '\'' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i).map(|c| c.1) {
                        None | Some('\n') => return Err(err(ParseErrorKind::UnterminatedQuote)),
                        Some('\\') => {
                            if let Some(&(_, n)) = chars.get(i + 1) {
                                s.push(n);
                            }
                            i += 2;
                        }
                        Some('\'') if chars.get(i + 1).map(|c| c.1) == Some('\'') => {
                            s.push('\'');
                            i += 2;
                        }
                        Some('\'') => {
                            i += 1;
                            break;
                        }
                        Some(ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Atom(s)
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let frac = chars.get(i).map(|c| c.1) == Some('.')
                    && chars.get(i + 1).is_some_and(|c| c.1.is_ascii_digit());
                if frac {
                    i += 1;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
                if matches!(chars.get(i).map(|c| c.1), Some('e' | 'E')) {
                    let mut j = i + 1;
                    if matches!(chars.get(j).map(|c| c.1), Some('+' | '-')) {
                        j += 1;
                    }
                    if chars.get(j).is_some_and(|c| c.1.is_ascii_digit()) {
                        i = j;
                        while i < chars.len() && chars[i].1.is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                Tok::Num(text[byte_at(start_i)..byte_at(i)].to_string())
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let word = text[byte_at(start_i)..byte_at(i)].to_string();
                if c.is_uppercase() || c == '_' {
                    Tok::Var(word)
                } else {
                    Tok::Atom(word)
                }
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        };
        col += i - start_i;
        out.push(Token {
            tok,
            pos,
            start: byte_at(start_i),
            end: byte_at(i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: SourcePos { line, column: col },
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    anon: usize,
}

/// Result of reading one clause-level item.
enum Item {
    Clause(DefiniteClause),
    Directive(Term),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: tok.pos.line,
            column: tok.pos.column,
            kind,
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(self.error_at(&t, ParseErrorKind::Unexpected { expected, found: t.tok.describe() }))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Var(name) => {
                if name == "_" {
                    self.anon += 1;
                    Ok(Term::var(&format!("_G{}", self.anon)))
                } else {
                    Ok(Term::var(&name))
                }
            }
            Tok::Num(lex) => Number::parse(&lex)
                .map(Term::Number)
                .ok_or_else(|| self.error_at(&t, ParseErrorKind::BadNumber(lex))),
            Tok::Minus => {
                let n = self.peek().clone();
                if let (Tok::Num(lex), true) = (&n.tok, n.start == t.end) {
                    self.next();
                    let neg = format!("-{lex}");
                    return Number::parse(&neg)
                        .map(Term::Number)
                        .ok_or_else(|| self.error_at(&t, ParseErrorKind::BadNumber(neg)));
                }
                self.prefixed("-", &t)
            }
            Tok::Plus => self.prefixed("+", &t),
            Tok::Hash => self.prefixed("#", &t),
            Tok::Star => Ok(Term::atom("*")),
            Tok::Atom(name) => {
                if self.peek().tok == Tok::Open && self.peek().start == t.end {
                    self.next();
                    let args = self.args(Tok::Close, "')' or ','")?;
                    Ok(Term::compound(&name, args))
                } else {
                    Ok(Term::atom(&name))
                }
            }
            Tok::LBracket => {
                if self.peek().tok == Tok::RBracket {
                    self.next();
                    return Ok(Term::atom(NIL));
                }
                let mut items = vec![self.term()?];
                let mut tail = Term::atom(NIL);
                loop {
                    let s = self.next();
                    match s.tok.clone() {
                        Tok::Comma => items.push(self.term()?),
                        Tok::Bar => {
                            tail = self.term()?;
                            self.expect(Tok::RBracket, "']'")?;
                            break;
                        }
                        Tok::RBracket => break,
                        other => {
                            return Err(self.error_at(
                                &s,
                                ParseErrorKind::Unexpected { expected: "',', '|' or ']'", found: other.describe() },
                            ))
                        }
                    }
                }
                Ok(Term::list_with_tail(items, tail))
            }
            Tok::Open => {
                let inner = self.term()?;
                self.expect(Tok::Close, "')'")?;
                Ok(inner)
            }
            other => Err(self.error_at(&t, ParseErrorKind::Unexpected { expected: "a term", found: other.describe() })),
        }
    }

    fn prefixed(&mut self, op: &str, t: &Token) -> Result<Term, ParseError> {
        match self.peek().tok {
            Tok::Atom(_) | Tok::Var(_) | Tok::Open | Tok::LBracket | Tok::Num(_) => {
                let inner = self.term()?;
                Ok(Term::Compound(sym(op), vec![inner]))
            }
            _ => Err(self.error_at(t, ParseErrorKind::Unexpected { expected: "a term after prefix operator", found: self.peek().tok.describe() })),
        }
    }

    fn args(&mut self, close: Tok, expected: &'static str) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        loop {
            let s = self.next();
            if s.tok == Tok::Comma {
                args.push(self.term()?);
            } else if s.tok == close {
                return Ok(args);
            } else {
                return Err(self.error_at(&s, ParseErrorKind::Unexpected { expected, found: s.tok.describe() }));
            }
        }
    }

    fn literal(&self, term: Term, at: &Token) -> Result<Literal, ParseError> {
        match term {
            Term::Atom(name) => Ok(Literal { predicate: name, args: Vec::new() }),
            Term::Compound(name, args) => Ok(Literal { predicate: name, args }),
            other => Err(self.error_at(at, ParseErrorKind::NotCallable(other.to_string()))),
        }
    }

    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut body = Vec::new();
        loop {
            let at = self.peek().clone();
            let t = self.term()?;
            body.push(self.literal(t, &at)?);
            let s = self.next();
            match s.tok.clone() {
                Tok::Comma => continue,
                Tok::End => return Ok(body),
                Tok::Semicolon => return Err(self.error_at(&s, ParseErrorKind::NonDefinite("disjunction in clause body"))),
                other => return Err(self.error_at(&s, ParseErrorKind::Unexpected { expected: "',' or '.'", found: other.describe() })),
            }
        }
    }

    fn item(&mut self) -> Result<Option<(Item, SourcePos)>, ParseError> {
        let first = self.peek().clone();
        if first.tok == Tok::Eof {
            return Ok(None);
        }
        if first.tok == Tok::Neck {
            self.next();
            let at = self.peek().clone();
            let goal = self.term()?;
            let is_directive = matches!(goal.functor(), Some((name, _)) if DIRECTIVES.contains(&name));
            if !is_directive || self.peek().tok != Tok::End {
                return Err(self.error_at(&at, ParseErrorKind::NonDefinite("clause has no head literal")));
            }
            self.next();
            return Ok(Some((Item::Directive(goal), first.pos)));
        }
        let head_term = self.term()?;
        let head = self.literal(head_term, &first)?;
        let s = self.next();
        let clause = match s.tok.clone() {
            Tok::End => DefiniteClause::fact(head),
            Tok::Neck => DefiniteClause::new(head, self.body()?),
            Tok::Comma | Tok::Semicolon => {
                return Err(self.error_at(&s, ParseErrorKind::NonDefinite("more than one head literal")))
            }
            other => return Err(self.error_at(&s, ParseErrorKind::Unexpected { expected: "':-' or '.'", found: other.describe() })),
        };
        Ok(Some((Item::Clause(clause), first.pos)))
    }
}

/// Parses a clause file into a [`Program`].
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, anon: 0 };
    let mut program = Program::default();
    while let Some((item, pos)) = parser.item()? {
        match item {
            Item::Clause(c) => {
                program.clauses.push(c);
                program.positions.push(pos);
            }
            Item::Directive(d) => program.directives.push((d, pos)),
        }
    }
    Ok(program)
}

/// Parses a single term, e.g. a goal typed on the command line.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, anon: 0 };
    let t = parser.term()?;
    if parser.peek().tok == Tok::End {
        parser.next();
    }
    let rest = parser.peek().clone();
    if rest.tok != Tok::Eof {
        return Err(parser.error_at(&rest, ParseErrorKind::Unexpected { expected: "end of input", found: rest.tok.describe() }));
    }
    Ok(t)
}

/// Parses a single literal such as `parent(henry,X)`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let t = parse_term(text)?;
    match t {
        Term::Atom(name) => Ok(Literal { predicate: name, args: Vec::new() }),
        Term::Compound(name, args) => Ok(Literal { predicate: name, args }),
        other => Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::NotCallable(other.to_string()) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_and_fact() {
        let p = parse_program("parent(X,Y) :- father(X,Y).\nmother(jane,alice).").unwrap();
        assert_eq!(p.clauses.len(), 2);
        assert_eq!(&*p.clauses[0].head.predicate, "parent");
        assert_eq!(p.clauses[0].head.arity(), 2);
        assert_eq!(p.clauses[0].body.len(), 1);
        assert_eq!(&*p.clauses[0].body[0].predicate, "father");
        assert!(p.clauses[1].is_fact());
        assert_eq!(p.positions[1].line, 2);
    }

    #[test]
    fn empty_and_comments() {
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("% nothing here\n  \n").unwrap().is_empty());
    }

    #[test]
    fn syntax_error_has_location() {
        let err = parse_program("p(a).\nq(b c).").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
    }

    #[test]
    fn non_definite_rejected() {
        let err = parse_program("a, b :- c.").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonDefinite(_)));
        let err = parse_program(":- a, b.").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonDefinite(_)));
        let err = parse_program("a ; b.").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonDefinite(_)));
    }

    #[test]
    fn directives_are_kept() {
        let p = parse_program(":- modeb(*,bond(+mol,-atomid)).\nbond(m1,a1).").unwrap();
        assert_eq!(p.directives.len(), 1);
        assert_eq!(p.directives[0].0.to_string(), "modeb(*,bond(+mol,-atomid))");
        assert_eq!(p.clauses.len(), 1);
    }

    #[test]
    fn lists_numbers_and_quotes() {
        let p = parse_program("functional_group(m1,[27],1,oxide).\nr(white,1.0,-2,'Big atom',[a|T]) :- s(T).").unwrap();
        let f = &p.clauses[0].head;
        assert_eq!(f.to_string(), "functional_group(m1,[27],1,oxide)");
        let r = &p.clauses[1].head;
        assert_eq!(r.args[1], Term::float(1.0));
        assert_eq!(r.args[2], Term::int(-2));
        assert_eq!(r.args[3], Term::atom("Big atom"));
        assert_eq!(r.to_string(), "r(white,1.0,-2,'Big atom',[a|T])");
        assert_eq!(parse_term("[]").unwrap(), Term::atom("nil"));
    }
}
