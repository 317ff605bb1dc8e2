use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use crate::logic::{Literal, Term};
use crate::saturation::Engine;

use super::decl::TypeName;

/// Decides `τ ∈ T_γ`.
pub trait TypeOracle {
    fn is_member(&self, term: &Term, ty: &TypeName) -> bool;
}

/// Type membership from explicit member lists. Numeric constants belong to
/// `real` regardless of the lists.
#[derive(Clone, Debug, Default)]
pub struct FactTypes {
    members: HashMap<TypeName, HashSet<Term>>,
}

impl FactTypes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, ty: &str, term: Term) -> &mut Self {
        self.members.entry(TypeName::new(ty)).or_default().insert(term);
        self
    }

    pub fn with(mut self, ty: &str, terms: impl IntoIterator<Item = Term>) -> Self {
        for t in terms {
            self.add(ty, t);
        }
        self
    }
}

impl TypeOracle for FactTypes {
    fn is_member(&self, term: &Term, ty: &TypeName) -> bool {
        if ty.is_numeric() {
            return term.is_number();
        }
        self.members.get(ty).is_some_and(|m| m.contains(term))
    }
}

/// Type membership backed by the unary type predicates of `B`: `τ ∈ T_γ`
/// iff `γ(τ)` is derivable. Answers are cached.
pub struct TypeSystem {
    engine: RefCell<Engine>,
    cache: RefCell<HashMap<(Term, TypeName), bool>>,
}

impl TypeSystem {
    pub fn new(engine: Engine) -> Self {
        TypeSystem {
            engine: RefCell::new(engine),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn engine(&self) -> &RefCell<Engine> {
        &self.engine
    }

    /// Ground members of `T_γ` derivable from `B`, in derivation order. Empty
    /// for `real`, whose members are not enumerable.
    pub fn members(&self, ty: &TypeName) -> Vec<Term> {
        if ty.is_numeric() {
            return Vec::new();
        }
        let goal = Literal {
            predicate: ty.0.clone(),
            args: vec![Term::var("X")],
        };
        self.engine
            .borrow_mut()
            .query_lenient(&goal)
            .literals
            .into_iter()
            .map(|l| l.args.into_iter().next().expect("unary"))
            .collect()
    }

    /// True when `B` defines a unary predicate for the type.
    pub fn is_defined(&self, ty: &TypeName) -> bool {
        ty.is_numeric() || self.engine.borrow().knows(ty.as_str(), 1)
    }
}

impl TypeOracle for TypeSystem {
    fn is_member(&self, term: &Term, ty: &TypeName) -> bool {
        if ty.is_numeric() {
            return term.is_number();
        }
        if !term.is_ground() {
            return false;
        }
        let key = (term.clone(), ty.clone());
        if let Some(&hit) = self.cache.borrow().get(&key) {
            return hit;
        }
        let goal = Literal {
            predicate: ty.0.clone(),
            args: vec![term.clone()],
        };
        let hit = self.engine.borrow_mut().holds(&goal);
        self.cache.borrow_mut().insert(key, hit);
        hit
    }
}
