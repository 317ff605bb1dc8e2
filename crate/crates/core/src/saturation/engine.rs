use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{DefiniteClause, Literal, Number, Program, Symbol, Term};

/// Steps allowed per top-level query unless configured otherwise.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ETerm {
    Var(u32),
    Atom(Symbol),
    Num(Number),
    App(Symbol, Arc<[ETerm]>),
}

impl ETerm {
    fn is_ground(&self) -> bool {
        match self {
            ETerm::Var(_) => false,
            ETerm::Atom(_) | ETerm::Num(_) => true,
            ETerm::App(_, args) => args.iter().all(ETerm::is_ground),
        }
    }

    fn shift(&self, k: u32) -> ETerm {
        match self {
            ETerm::Var(v) => ETerm::Var(v + k),
            ETerm::App(f, args) => ETerm::App(f.clone(), args.iter().map(|a| a.shift(k)).collect()),
            other => other.clone(),
        }
    }

    fn to_term(&self) -> Term {
        match self {
            ETerm::Var(v) => Term::var(&format!("_E{v}")),
            ETerm::Atom(a) => Term::Atom(a.clone()),
            ETerm::Num(n) => Term::Number(n.clone()),
            ETerm::App(f, args) => Term::Compound(f.clone(), args.iter().map(ETerm::to_term).collect()),
        }
    }
}

fn compile_term(t: &Term, vars: &mut HashMap<Symbol, u32>) -> ETerm {
    match t {
        Term::Var(name) => {
            let n = vars.len() as u32;
            ETerm::Var(*vars.entry(name.clone()).or_insert(n))
        }
        Term::Atom(a) => ETerm::Atom(a.clone()),
        Term::Number(n) => ETerm::Num(n.clone()),
        Term::Compound(f, args) => ETerm::App(f.clone(), args.iter().map(|a| compile_term(a, vars)).collect()),
    }
}

struct Goal {
    pred: Symbol,
    args: Vec<ETerm>,
}

struct CClause {
    head: Vec<ETerm>,
    body: Vec<Goal>,
    nvars: u32,
}

fn compile_clause(c: &DefiniteClause) -> CClause {
    let mut vars = HashMap::new();
    let head = c.head.args.iter().map(|a| compile_term(a, &mut vars)).collect();
    let body = c
        .body
        .iter()
        .map(|l| Goal {
            pred: l.predicate.clone(),
            args: l.args.iter().map(|a| compile_term(a, &mut vars)).collect(),
        })
        .collect();
    CClause {
        head,
        body,
        nvars: vars.len() as u32,
    }
}

/// Definite clauses indexed by predicate symbol and arity.
#[derive(Default)]
pub struct KnowledgeBase {
    preds: HashMap<(Symbol, usize), Vec<Arc<CClause>>>,
}

impl KnowledgeBase {
    pub fn new(program: &Program) -> Self {
        Self::from_clauses(&program.clauses)
    }

    pub fn from_clauses(clauses: &[DefiniteClause]) -> Self {
        let mut kb = KnowledgeBase::default();
        for c in clauses {
            kb.add(c);
        }
        kb
    }

    pub fn add(&mut self, clause: &DefiniteClause) {
        self.preds
            .entry(clause.head.key())
            .or_default()
            .push(Arc::new(compile_clause(clause)));
    }

    pub fn defines(&self, predicate: &str, arity: usize) -> bool {
        self.preds.keys().any(|(p, n)| &**p == predicate && *n == arity)
    }

    fn clauses(&self, pred: &Symbol, arity: usize) -> &[Arc<CClause>] {
        self.preds
            .get(&(pred.clone(), arity))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

const BUILTINS: &[(&str, usize)] = &[
    ("true", 0),
    ("=", 2),
    ("lteq", 2),
    ("gteq", 2),
    ("=<", 2),
    (">=", 2),
    ("<", 2),
    (">", 2),
];

pub fn is_builtin(predicate: &str, arity: usize) -> bool {
    BUILTINS.contains(&(predicate, arity))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown predicate {0}/{1}")]
    UnknownPredicate(String, usize),
}

/// Ground answers to a query, in derivation order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Answers {
    pub literals: Vec<Literal>,
    /// False when the step budget ran out before the answer set was final.
    pub complete: bool,
}

type Key = (Symbol, Vec<ETerm>);

#[derive(Default)]
struct Table {
    answers: Vec<Arc<[ETerm]>>,
    seen: HashSet<Arc<[ETerm]>>,
    complete: bool,
    evaluating: bool,
    epoch: u64,
}

struct Bindings {
    slots: Vec<Option<ETerm>>,
    trail: Vec<u32>,
}

impl Bindings {
    fn new(n: u32) -> Self {
        Bindings {
            slots: vec![None; n as usize],
            trail: Vec::new(),
        }
    }

    fn walk(&self, t: &ETerm) -> ETerm {
        let mut t = t.clone();
        while let ETerm::Var(v) = t {
            match &self.slots[v as usize] {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &ETerm) -> ETerm {
        match self.walk(t) {
            ETerm::App(f, args) => ETerm::App(f, args.iter().map(|a| self.resolve(a)).collect()),
            other => other,
        }
    }

    fn bind(&mut self, v: u32, t: ETerm) {
        self.slots[v as usize] = Some(t);
        self.trail.push(v);
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.slots[v as usize] = None;
        }
    }

    fn occurs(&self, v: u32, t: &ETerm) -> bool {
        match self.walk(t) {
            ETerm::Var(w) => v == w,
            ETerm::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    fn unify(&mut self, a: &ETerm, b: &ETerm) -> bool {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (ETerm::Var(x), ETerm::Var(y)) if x == y => true,
            (ETerm::Var(x), t) | (t, ETerm::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bind(*x, t.clone());
                true
            }
            (ETerm::Atom(x), ETerm::Atom(y)) => x == y,
            (ETerm::Num(x), ETerm::Num(y)) => x == y,
            (ETerm::App(f, xs), ETerm::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }
}

/// Renames variables to 0, 1, ... in first-occurrence order so that
/// variant calls share a table.
fn canonical(args: &[ETerm]) -> (Vec<ETerm>, u32) {
    fn go(t: &ETerm, map: &mut HashMap<u32, u32>) -> ETerm {
        match t {
            ETerm::Var(v) => {
                let n = map.len() as u32;
                ETerm::Var(*map.entry(*v).or_insert(n))
            }
            ETerm::App(f, args) => ETerm::App(f.clone(), args.iter().map(|a| go(a, map)).collect()),
            other => other.clone(),
        }
    }
    let mut map = HashMap::new();
    let out = args.iter().map(|a| go(a, &mut map)).collect();
    (out, map.len() as u32)
}

/// Tabled SLD resolution over `B` plus a per-example set of extra clauses
/// (the body facts of the example being saturated), which are tried first.
///
/// Calls are memoised by variant; recursive dependencies are re-evaluated
/// until no table grows, so left recursion terminates on finite answer sets.
/// Only ground answers are kept.
pub struct Engine {
    kb: Arc<KnowledgeBase>,
    local: Arc<KnowledgeBase>,
    tables: HashMap<Key, Table>,
    budget: u64,
    steps: u64,
    exhausted: bool,
    epoch: u64,
    changed: bool,
    saw_incomplete: bool,
}

impl Engine {
    pub fn new(kb: Arc<KnowledgeBase>) -> Self {
        Engine::with_local(kb, KnowledgeBase::default())
    }

    pub fn with_local(kb: Arc<KnowledgeBase>, local: KnowledgeBase) -> Self {
        Engine {
            kb,
            local: Arc::new(local),
            tables: HashMap::new(),
            budget: DEFAULT_BUDGET,
            steps: 0,
            exhausted: false,
            epoch: 0,
            changed: false,
            saw_incomplete: false,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn knows(&self, predicate: &str, arity: usize) -> bool {
        is_builtin(predicate, arity) || self.kb.defines(predicate, arity) || self.local.defines(predicate, arity)
    }

    /// All ground instances of `goal` derivable within the budget.
    pub fn query(&mut self, goal: &Literal) -> Result<Answers, EngineError> {
        if !self.knows(&goal.predicate, goal.arity()) {
            return Err(EngineError::UnknownPredicate(goal.predicate.to_string(), goal.arity()));
        }
        Ok(self.query_lenient(goal))
    }

    /// Like [`Engine::query`], but an undefined predicate simply has no answers.
    pub fn query_lenient(&mut self, goal: &Literal) -> Answers {
        let mut vars = HashMap::new();
        let args: Vec<ETerm> = goal.args.iter().map(|a| compile_term(a, &mut vars)).collect();
        let (cargs, _) = canonical(&args);
        let key: Key = (goal.predicate.clone(), cargs);

        self.steps = 0;
        self.exhausted = false;
        loop {
            self.epoch += 1;
            self.changed = false;
            self.saw_incomplete = false;
            self.call_key(&key);
            if self.exhausted {
                let answers = self.answers_of(&key, goal);
                self.tables.retain(|_, t| t.complete);
                return Answers {
                    literals: answers,
                    complete: false,
                };
            }
            if self.tables[&key].complete {
                break;
            }
            if !self.changed {
                for t in self.tables.values_mut() {
                    t.complete = true;
                    t.evaluating = false;
                }
                break;
            }
        }
        Answers {
            literals: self.answers_of(&key, goal),
            complete: true,
        }
    }

    /// True when the ground literal is derivable.
    pub fn holds(&mut self, literal: &Literal) -> bool {
        !self.query_lenient(literal).literals.is_empty()
    }

    fn answers_of(&self, key: &Key, goal: &Literal) -> Vec<Literal> {
        self.tables
            .get(key)
            .map(|t| {
                t.answers
                    .iter()
                    .map(|a| Literal {
                        predicate: goal.predicate.clone(),
                        args: a.iter().map(ETerm::to_term).collect(),
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    fn step(&mut self) -> bool {
        self.steps += 1;
        if self.steps > self.budget {
            self.exhausted = true;
        }
        !self.exhausted
    }

    fn call(&mut self, pred: &Symbol, args: &[ETerm]) -> Vec<Arc<[ETerm]>> {
        let (cargs, _) = canonical(args);
        let key = (pred.clone(), cargs);
        self.call_key(&key);
        self.tables.get(&key).map(|t| t.answers.clone()).unwrap_or_default()
    }

    fn call_key(&mut self, key: &Key) {
        let epoch = self.epoch;
        let table = self.tables.entry(key.clone()).or_default();
        if table.complete {
            return;
        }
        if table.evaluating || table.epoch == epoch {
            self.saw_incomplete = true;
            return;
        }
        table.evaluating = true;
        table.epoch = epoch;

        let saved = std::mem::replace(&mut self.saw_incomplete, false);
        let arity = key.1.len();
        let nkey = {
            let mut max = 0;
            fn vmax(t: &ETerm, m: &mut u32) {
                match t {
                    ETerm::Var(v) => *m = (*m).max(v + 1),
                    ETerm::App(_, a) => a.iter().for_each(|x| vmax(x, m)),
                    _ => {}
                }
            }
            key.1.iter().for_each(|t| vmax(t, &mut max));
            max
        };
        if is_builtin(&key.0, arity) && self.step() {
            let goal = Goal {
                pred: key.0.clone(),
                args: key.1.clone(),
            };
            self.solve(&[goal], 0, &mut Bindings::new(nkey), &key.1, key);
        }
        let local = self.local.clone();
        let kb = self.kb.clone();
        let clauses = local.clauses(&key.0, arity).iter().chain(kb.clauses(&key.0, arity));
        for clause in clauses {
            if !self.step() {
                break;
            }
            let mut b = Bindings::new(clause.nvars + nkey);
            let goal_args: Vec<ETerm> = key.1.iter().map(|t| t.shift(clause.nvars)).collect();
            if clause.head.iter().zip(&goal_args).all(|(h, g)| b.unify(h, g)) {
                self.solve(&clause.body, 0, &mut b, &goal_args, key);
            }
        }

        let table = self.tables.get_mut(key).expect("table exists");
        table.evaluating = false;
        if !self.saw_incomplete && !self.exhausted {
            table.complete = true;
        }
        self.saw_incomplete |= saved;
    }

    fn add_answer(&mut self, key: &Key, answer: Vec<ETerm>) {
        let answer: Arc<[ETerm]> = answer.into();
        let table = self.tables.get_mut(key).expect("table exists");
        if table.seen.insert(answer.clone()) {
            table.answers.push(answer);
            self.changed = true;
        }
    }

    fn solve(&mut self, goals: &[Goal], i: usize, b: &mut Bindings, goal_args: &[ETerm], key: &Key) {
        if self.exhausted {
            return;
        }
        let Some(goal) = goals.get(i) else {
            let answer: Vec<ETerm> = goal_args.iter().map(|t| b.resolve(t)).collect();
            if answer.iter().all(ETerm::is_ground) {
                self.add_answer(key, answer);
            }
            return;
        };
        let args: Vec<ETerm> = goal.args.iter().map(|t| b.resolve(t)).collect();
        if let Some(outcome) = builtin(&goal.pred, &args) {
            let mark = b.trail.len();
            let ok = match outcome {
                Builtin::Fail => false,
                Builtin::Succeed => true,
                Builtin::Unify(x, y) => b.unify(&x, &y),
            };
            if ok {
                self.solve(goals, i + 1, b, goal_args, key);
            }
            b.undo(mark);
            return;
        }
        for answer in self.call(&goal.pred, &args) {
            if !self.step() {
                return;
            }
            let mark = b.trail.len();
            if args.iter().zip(answer.iter()).all(|(x, y)| b.unify(x, y)) {
                self.solve(goals, i + 1, b, goal_args, key);
            }
            b.undo(mark);
        }
    }
}

enum Builtin {
    Fail,
    Succeed,
    Unify(ETerm, ETerm),
}

fn builtin(pred: &Symbol, args: &[ETerm]) -> Option<Builtin> {
    if !is_builtin(pred, args.len()) {
        return None;
    }
    let test = |ok: bool| if ok { Builtin::Succeed } else { Builtin::Fail };
    let nums = || match (&args[0], &args[1]) {
        (ETerm::Num(x), ETerm::Num(y)) => Some((x.value(), y.value())),
        _ => None,
    };
    Some(match &**pred {
        "true" => Builtin::Succeed,
        "=" => Builtin::Unify(args[0].clone(), args[1].clone()),
        // An unbound side takes the value of the other, as in Aleph.
        "lteq" | "gteq" => match (&args[0], &args[1], nums()) {
            (_, _, Some((x, y))) => test(if &**pred == "lteq" { x <= y } else { x >= y }),
            (ETerm::Num(_), ETerm::Var(_), _) | (ETerm::Var(_), ETerm::Num(_), _) => {
                Builtin::Unify(args[0].clone(), args[1].clone())
            }
            _ => Builtin::Fail,
        },
        "=<" => nums().map_or(Builtin::Fail, |(x, y)| test(x <= y)),
        ">=" => nums().map_or(Builtin::Fail, |(x, y)| test(x >= y)),
        "<" => nums().map_or(Builtin::Fail, |(x, y)| test(x < y)),
        ">" => nums().map_or(Builtin::Fail, |(x, y)| test(x > y)),
        _ => unreachable!("builtin table covers {pred}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_literal, parse_program};

    fn engine(src: &str) -> Engine {
        Engine::new(Arc::new(KnowledgeBase::new(&parse_program(src).unwrap())))
    }

    fn answers(e: &mut Engine, q: &str) -> Vec<String> {
        e.query(&parse_literal(q).unwrap())
            .unwrap()
            .literals
            .iter()
            .map(|l| l.to_string())
            .collect()
    }

    #[test]
    fn facts_and_rules() {
        let mut e = engine("parent(X,Y) :- father(X,Y).\nparent(X,Y) :- mother(X,Y).\nmother(jane,alice).\nfather(henry,jane).");
        assert_eq!(answers(&mut e, "parent(henry,X)"), vec!["parent(henry,jane)"]);
        assert_eq!(answers(&mut e, "parent(X,Y)"), vec!["parent(henry,jane)", "parent(jane,alice)"]);
        assert!(answers(&mut e, "parent(alice,X)").is_empty());
    }

    #[test]
    fn local_facts_come_first() {
        let kb = Arc::new(KnowledgeBase::new(&parse_program("mother(jane,alice).").unwrap()));
        let local = KnowledgeBase::from_clauses(&parse_program("mother(jane,john).").unwrap().clauses);
        let mut e = Engine::with_local(kb, local);
        assert_eq!(answers(&mut e, "mother(jane,X)"), vec!["mother(jane,john)", "mother(jane,alice)"]);
    }

    #[test]
    fn left_recursion_terminates() {
        let mut e = engine("path(X,Y) :- path(X,Z), edge(Z,Y).\npath(X,Y) :- edge(X,Y).\nedge(a,b).\nedge(b,c).\nedge(c,a).");
        let mut got = answers(&mut e, "path(a,X)");
        got.sort();
        assert_eq!(got, vec!["path(a,a)", "path(a,b)", "path(a,c)"]);
    }

    #[test]
    fn unknown_predicate_and_budget() {
        let mut e = engine("nat(z).\nnat(s(X)) :- nat(X).");
        assert!(matches!(e.query(&parse_literal("foo(a)").unwrap()), Err(EngineError::UnknownPredicate(..))));
        let mut e = e.with_budget(200);
        let a = e.query(&parse_literal("nat(X)").unwrap()).unwrap();
        assert!(!a.complete);
        assert!(!a.literals.is_empty());
    }

    #[test]
    fn numeric_builtins() {
        let mut e = engine("small(X) :- val(X), lteq(X, 2).\nval(1).\nval(3).\nbound(Y) :- lteq(1.5, Y).");
        assert_eq!(answers(&mut e, "small(X)"), vec!["small(1)"]);
        assert_eq!(answers(&mut e, "bound(Y)"), vec!["bound(1.5)"]);
        assert_eq!(answers(&mut e, "lteq(6,X)"), vec!["lteq(6,6)"]);
        assert_eq!(answers(&mut e, "gteq(2,3)"), Vec::<String>::new());
    }
}
