use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{parse_program, sym, Literal, ParseError, PlaceNumber, SourcePos, Symbol, Term};

/// Name of the built-in numeric type; every numeric constant belongs to it.
pub const NUMERIC_TYPE: &str = "real";

/// A type name from a mode declaration, e.g. `person` or `real`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeName(pub Symbol);

impl TypeName {
    pub fn new(name: &str) -> Self {
        match name {
            "ℝ" | "R" => TypeName(sym(NUMERIC_TYPE)),
            other => TypeName(sym(other)),
        }
    }

    pub fn numeric() -> Self {
        TypeName(sym(NUMERIC_TYPE))
    }

    pub fn is_numeric(&self) -> bool {
        &*self.0 == NUMERIC_TYPE
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Input,
    Output,
    Constant,
}

impl Role {
    pub fn marker(self) -> char {
        match self {
            Role::Input => '+',
            Role::Output => '-',
            Role::Constant => '#',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeTerm {
    Input(TypeName),
    Output(TypeName),
    Constant(TypeName),
    /// `f(mt1, ..., mtj)`; a bare atom in a schema is a 0-ary structured term.
    Structured(Symbol, Vec<ModeTerm>),
}

impl ModeTerm {
    pub fn simple(&self) -> Option<(Role, &TypeName)> {
        match self {
            ModeTerm::Input(t) => Some((Role::Input, t)),
            ModeTerm::Output(t) => Some((Role::Output, t)),
            ModeTerm::Constant(t) => Some((Role::Constant, t)),
            ModeTerm::Structured(..) => None,
        }
    }
}

impl fmt::Display for ModeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeTerm::Input(t) => write!(f, "+{t}"),
            ModeTerm::Output(t) => write!(f, "-{t}"),
            ModeTerm::Constant(t) => write!(f, "#{t}"),
            ModeTerm::Structured(name, args) => {
                write!(f, "{}", Term::Atom(name.clone()))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeKind {
    Head,
    Body,
}

/// How many answers saturation admits per input binding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Recall {
    /// No recall given in the declaration; the saturation default applies.
    Default,
    Unbounded,
    Bounded(u32),
}

/// `modeh(Recall, p(mt1,...,mtn))` or `modeb(...)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeDecl {
    pub kind: ModeKind,
    pub recall: Recall,
    pub predicate: Symbol,
    pub args: Vec<ModeTerm>,
}

/// Modes are shared between sequences, graphs and provenance records.
pub type Mode = Arc<ModeDecl>;

/// One simple mode-term and where it sits in the schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModePlace {
    pub place: PlaceNumber,
    pub role: Role,
    pub ty: TypeName,
}

impl ModeDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_head(&self) -> bool {
        self.kind == ModeKind::Head
    }

    /// Same predicate symbol and arity as `literal`.
    pub fn matches(&self, literal: &Literal) -> bool {
        self.predicate == literal.predicate && self.args.len() == literal.args.len()
    }

    /// Role and type of the mode-term at `place`; `None` when the place is
    /// out of range or addresses a structured term rather than a simple one.
    pub fn mode_type(&self, place: &PlaceNumber) -> Option<(Role, &TypeName)> {
        let idx = place.indices();
        let mut mt = self.args.get(idx[0] - 1)?;
        for &i in &idx[1..] {
            match mt {
                ModeTerm::Structured(_, args) => mt = args.get(i - 1)?,
                _ => return None,
            }
        }
        mt.simple()
    }

    /// All simple mode-terms with their places, depth first.
    pub fn places(&self) -> Vec<ModePlace> {
        fn walk(prefix: Vec<usize>, mt: &ModeTerm, out: &mut Vec<ModePlace>) {
            match mt {
                ModeTerm::Structured(_, args) => {
                    for (i, a) in args.iter().enumerate() {
                        let mut p = prefix.clone();
                        p.push(i + 1);
                        walk(p, a, out);
                    }
                }
                simple => {
                    let (role, ty) = simple.simple().expect("simple mode-term");
                    out.push(ModePlace {
                        place: PlaceNumber::new(prefix).expect("non-empty place"),
                        role,
                        ty: ty.clone(),
                    });
                }
            }
        }
        let mut out = Vec::new();
        for (i, a) in self.args.iter().enumerate() {
            walk(vec![i + 1], a, &mut out);
        }
        out
    }

    /// True when `literal` has the same predicate and every structured
    /// mode-term is matched by a compound with the same functor and arity.
    pub fn conforms(&self, literal: &Literal) -> bool {
        fn fits(mt: &ModeTerm, t: &Term) -> bool {
            match mt {
                ModeTerm::Structured(name, args) => match t.functor() {
                    Some((f, n)) => f == &**name && n == args.len() && args.iter().zip(t.args()).all(|(m, a)| fits(m, a)),
                    None => false,
                },
                _ => true,
            }
        }
        self.matches(literal) && self.args.iter().zip(&literal.args).all(|(m, t)| fits(m, t))
    }

    /// Partitions the mode-visible places of `literal` by role.
    pub fn io_terms(&self, literal: &Literal) -> IoTerms {
        let mut io = IoTerms::default();
        for mp in self.places() {
            let Ok(term) = literal.term_at(&mp.place) else { continue };
            let entry = (term.clone(), mp.ty, mp.place);
            match mp.role {
                Role::Input => io.inputs.push(entry),
                Role::Output => io.outputs.push(entry),
                Role::Constant => io.constants.push(entry),
            }
        }
        io
    }

    /// A goal literal for this schema: `inputs[i]` fills the i-th `+` place,
    /// every other place becomes a fresh variable.
    pub fn goal(&self, inputs: &[Term]) -> Literal {
        fn build(mt: &ModeTerm, inputs: &mut std::slice::Iter<'_, Term>, fresh: &mut usize) -> Term {
            match mt {
                ModeTerm::Input(_) => inputs.next().cloned().expect("one term per input place"),
                ModeTerm::Output(_) | ModeTerm::Constant(_) => {
                    *fresh += 1;
                    Term::var(&format!("_M{fresh}"))
                }
                ModeTerm::Structured(name, args) => {
                    if args.is_empty() {
                        Term::Atom(name.clone())
                    } else {
                        Term::Compound(name.clone(), args.iter().map(|a| build(a, inputs, fresh)).collect())
                    }
                }
            }
        }
        let mut it = inputs.iter();
        let mut fresh = 0;
        let args = self.args.iter().map(|a| build(a, &mut it, &mut fresh)).collect();
        Literal {
            predicate: self.predicate.clone(),
            args,
        }
    }
}

impl fmt::Display for ModeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ModeKind::Head => "modeh",
            ModeKind::Body => "modeb",
        };
        write!(f, "{kind}(")?;
        match self.recall {
            Recall::Default => {}
            Recall::Unbounded => f.write_str("*,")?,
            Recall::Bounded(n) => write!(f, "{n},")?,
        }
        write!(f, "{}", Term::Atom(self.predicate.clone()))?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(")")
    }
}

/// Input, output and constant terms of a literal under a mode, with their
/// declared types and places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IoTerms {
    pub inputs: Vec<(Term, TypeName, PlaceNumber)>,
    pub outputs: Vec<(Term, TypeName, PlaceNumber)>,
    pub constants: Vec<(Term, TypeName, PlaceNumber)>,
}

#[derive(Debug, Error)]
pub enum ModeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{pos}: unknown role marker in {found}")]
    UnknownRole { pos: SourcePos, found: String },
    #[error("{pos}: malformed mode schema {found}")]
    MalformedSchema { pos: SourcePos, found: String },
    #[error("{pos}: recall must be a positive integer or '*', found {found}")]
    BadRecall { pos: SourcePos, found: String },
}

fn mode_term(t: &Term, pos: SourcePos) -> Result<ModeTerm, ModeError> {
    match t {
        Term::Compound(op, args) if args.len() == 1 && matches!(&**op, "+" | "-" | "#") => {
            let ty = match &args[0] {
                Term::Atom(name) => TypeName::new(name),
                other => return Err(ModeError::UnknownRole { pos, found: format!("{op}{other}") }),
            };
            Ok(match &**op {
                "+" => ModeTerm::Input(ty),
                "-" => ModeTerm::Output(ty),
                _ => ModeTerm::Constant(ty),
            })
        }
        Term::Compound(name, args) => {
            let args = args.iter().map(|a| mode_term(a, pos)).collect::<Result<_, _>>()?;
            Ok(ModeTerm::Structured(name.clone(), args))
        }
        Term::Atom(name) => Ok(ModeTerm::Structured(name.clone(), Vec::new())),
        other => Err(ModeError::UnknownRole { pos, found: other.to_string() }),
    }
}

/// Reads a mode declaration from a directive term, or `None` when the
/// directive is something else (e.g. `set/2`).
pub fn mode_from_directive(d: &Term, pos: SourcePos) -> Result<Option<ModeDecl>, ModeError> {
    let (kind, args) = match d {
        Term::Compound(name, args) if &**name == "modeh" => (ModeKind::Head, args),
        Term::Compound(name, args) if &**name == "modeb" => (ModeKind::Body, args),
        _ => return Ok(None),
    };
    let (recall, schema) = match args.as_slice() {
        [schema] => (Recall::Default, schema),
        [recall, schema] => {
            let recall = match recall {
                Term::Atom(a) if &**a == "*" => Recall::Unbounded,
                Term::Number(n) if n.is_integer() && n.value() >= 1.0 && n.value() <= u32::MAX as f64 => {
                    Recall::Bounded(n.value() as u32)
                }
                other => return Err(ModeError::BadRecall { pos, found: other.to_string() }),
            };
            (recall, schema)
        }
        _ => return Err(ModeError::MalformedSchema { pos, found: d.to_string() }),
    };
    let (predicate, margs) = match schema {
        Term::Atom(p) => (p.clone(), Vec::new()),
        Term::Compound(p, a) => (p.clone(), a.iter().map(|t| mode_term(t, pos)).collect::<Result<_, _>>()?),
        other => return Err(ModeError::MalformedSchema { pos, found: other.to_string() }),
    };
    Ok(Some(ModeDecl {
        kind,
        recall,
        predicate,
        args: margs,
    }))
}

/// Parses `:- modeh(...)` / `:- modeb(...)` directives, keeping declaration
/// order. Other directives and any clauses in the text are ignored.
pub fn parse_modes(text: &str) -> Result<Vec<ModeDecl>, ModeError> {
    let program = parse_program(text)?;
    let mut modes = Vec::new();
    for (d, pos) in &program.directives {
        if let Some(m) = mode_from_directive(d, *pos)? {
            modes.push(m);
        }
    }
    Ok(modes)
}

/// An ordered set of mode declarations `M`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeSet {
    modes: Vec<Mode>,
}

impl ModeSet {
    pub fn new(decls: Vec<ModeDecl>) -> Self {
        ModeSet {
            modes: decls.into_iter().map(Arc::new).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ModeError> {
        Ok(ModeSet::new(parse_modes(text)?))
    }

    pub fn all(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn heads(&self) -> impl Iterator<Item = &Mode> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Head)
    }

    pub fn bodies(&self) -> impl Iterator<Item = &Mode> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Body)
    }

    /// Index of `mode` in declaration order.
    pub fn position(&self, mode: &ModeDecl) -> Option<usize> {
        self.modes.iter().position(|m| **m == *mode)
    }
}
