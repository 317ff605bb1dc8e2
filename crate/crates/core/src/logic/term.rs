use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Interned-by-refcount symbol. Cheap to clone and safe to share across threads.
pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

/// Functor used for list cells; `[a,b]` reads as `'.'(a,'.'(b,nil))`.
pub const LIST_FUNCTOR: &str = ".";
/// Terminal atom of a list.
pub const NIL: &str = "nil";

/// A numeric constant.
///
/// Equality and hashing go through the canonical text, so `1` and `1.0`
/// are different terms while `1.0` and `1.00` are the same one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Number {
    value: f64,
    text: Symbol,
}

impl Number {
    pub fn int(v: i64) -> Self {
        Number {
            value: v as f64,
            text: sym(&v.to_string()),
        }
    }

    pub fn float(v: f64) -> Self {
        let mut text = format!("{v}");
        if !text.contains(['.', 'e', 'E', 'N', 'i']) {
            text.push_str(".0");
        }
        Number {
            value: v,
            text: sym(&text),
        }
    }

    /// Parses an integer or decimal lexeme.
    pub fn parse(lexeme: &str) -> Option<Self> {
        if !lexeme.contains(['.', 'e', 'E']) {
            if let Ok(v) = lexeme.parse::<i64>() {
                return Some(Number::int(v));
            }
        }
        let v: f64 = lexeme.parse().ok()?;
        if !v.is_finite() {
            return None;
        }
        Some(Number::float(v))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_integer(&self) -> bool {
        !self.text.contains(['.', 'e', 'E'])
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Number {}

impl std::hash::Hash for Number {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.text.cmp(&other.text))
    }
}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A first-order term.
///
/// Variables only occur in background-knowledge rules and inside the
/// deduction engine; bottom clauses and graphs are always ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(Symbol),
    Atom(Symbol),
    Number(Number),
    Compound(Symbol, Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Self {
        Term::Atom(sym(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Var(sym(name))
    }

    pub fn int(v: i64) -> Self {
        Term::Number(Number::int(v))
    }

    pub fn float(v: f64) -> Self {
        Term::Number(Number::float(v))
    }

    pub fn compound(functor: &str, args: Vec<Term>) -> Self {
        if args.is_empty() {
            Term::atom(functor)
        } else {
            Term::Compound(sym(functor), args)
        }
    }

    /// Builds the right-nested list term for `items`, terminated by `tail`.
    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Self {
        items.into_iter().rev().fold(tail, |acc, item| {
            Term::Compound(sym(LIST_FUNCTOR), vec![item, acc])
        })
    }

    pub fn list(items: Vec<Term>) -> Self {
        Term::list_with_tail(items, Term::atom(NIL))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Number(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Term::Number(_))
    }

    pub fn as_number(&self) -> Option<&Number> {
        match self {
            Term::Number(n) => Some(n),
            _ => None,
        }
    }

    /// Functor name and arity; constants have arity 0.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(name) => Some((name, 0)),
            Term::Compound(name, args) => Some((name, args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Atom(_) | Term::Compound(..) => 1,
            Term::Number(_) => 2,
        }
    }
}

impl Ord for Term {
    // Canonical order: variables, then symbolic terms (by functor name,
    // arity, then arguments left to right), then numbers.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Number(a), Term::Number(b)) => a.cmp(b),
            (a, b) if a.rank() == 1 && b.rank() == 1 => {
                let (fa, na) = a.functor().expect("symbolic");
                let (fb, nb) = b.functor().expect("symbolic");
                fa.cmp(fb)
                    .then(na.cmp(&nb))
                    .then_with(|| a.args().cmp(b.args()))
            }
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn needs_quotes(name: &str) -> bool {
    if name == "*" {
        return false;
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => !chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => true,
    }
}

pub(crate) fn write_atom(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if needs_quotes(name) {
        write!(f, "'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    } else {
        f.write_str(name)
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_str("(")?;
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{arg}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => f.write_str(name),
            Term::Atom(name) => write_atom(f, name),
            Term::Number(n) => write!(f, "{n}"),
            Term::Compound(functor, args) if &**functor == LIST_FUNCTOR && args.len() == 2 => {
                f.write_str("[")?;
                write!(f, "{}", args[0])?;
                let mut rest = &args[1];
                loop {
                    match rest {
                        Term::Compound(g, a) if &**g == LIST_FUNCTOR && a.len() == 2 => {
                            write!(f, ",{}", a[0])?;
                            rest = &a[1];
                        }
                        Term::Atom(n) if &**n == NIL => break,
                        other => {
                            write!(f, "|{other}")?;
                            break;
                        }
                    }
                }
                f.write_str("]")
            }
            Term::Compound(functor, args)
                if args.len() == 1 && matches!(&**functor, "+" | "-" | "#") && matches!(args[0], Term::Atom(_)) =>
            {
                write!(f, "{functor}{}", args[0])
            }
            Term::Compound(functor, args) => {
                write_atom(f, functor)?;
                write_args(f, args)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_int_and_decimal_apart() {
        assert_ne!(Term::int(1), Term::float(1.0));
        assert_eq!(Number::parse("1.00"), Number::parse("1.0"));
        assert_eq!(Term::float(1.0).to_string(), "1.0");
        assert_eq!(Number::parse("-3").unwrap().value(), -3.0);
    }

    #[test]
    fn symbolic_sorts_before_numeric() {
        let mut terms = vec![Term::int(2), Term::atom("b"), Term::compound("a", vec![Term::int(1)]), Term::atom("a")];
        terms.sort();
        assert_eq!(
            terms,
            vec![Term::atom("a"), Term::compound("a", vec![Term::int(1)]), Term::atom("b"), Term::int(2)]
        );
    }

    #[test]
    fn list_rendering() {
        let l = Term::list(vec![Term::atom("a"), Term::atom("b")]);
        assert_eq!(l.to_string(), "[a,b]");
        let open = Term::list_with_tail(vec![Term::atom("a")], Term::var("T"));
        assert_eq!(open.to_string(), "[a|T]");
        assert_eq!(Term::atom("Hello").to_string(), "'Hello'");
    }
}
