use std::collections::HashMap;

use super::clause::{DefiniteClause, Literal};
use super::term::{Symbol, Term};

type Subst = HashMap<Symbol, Term>;

fn match_term(pattern: &Term, target: &Term, s: &mut Subst, trail: &mut Vec<Symbol>) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) if &**v == "_" => true,
        (Term::Var(v), _) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.insert(v.clone(), target.clone());
                trail.push(v.clone());
                true
            }
        },
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, s, trail))
        }
        _ => pattern == target,
    }
}

fn match_literal(p: &Literal, t: &Literal, s: &mut Subst) -> Option<Vec<Symbol>> {
    let mut trail = Vec::new();
    let ok = p.predicate == t.predicate
        && p.arity() == t.arity()
        && p.args.iter().zip(&t.args).all(|(x, y)| match_term(x, y, s, &mut trail));
    if ok {
        Some(trail)
    } else {
        trail.iter().for_each(|v| {
            s.remove(v);
        });
        None
    }
}

fn apply(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(|a| apply(a, s)).collect()),
        _ => t.clone(),
    }
}

fn search(body: &[Literal], target: &[Literal], s: &mut Subst) -> bool {
    let Some((first, rest)) = body.split_first() else {
        return true;
    };
    for t in target {
        if let Some(trail) = match_literal(first, t, s) {
            if search(rest, target, s) {
                return true;
            }
            trail.iter().for_each(|v| {
                s.remove(v);
            });
        }
    }
    false
}

/// Finds `θ` with `general θ ⊆ target`, mapping head to head and body into
/// body, and returns `general θ`. `_` is anonymous.
pub fn subsumes(general: &DefiniteClause, target: &DefiniteClause) -> Option<DefiniteClause> {
    let mut s = Subst::new();
    match_literal(&general.head, &target.head, &mut s)?;
    if !search(&general.body, &target.body, &mut s) {
        return None;
    }
    let inst = |l: &Literal| Literal {
        predicate: l.predicate.clone(),
        args: l.args.iter().map(|a| apply(a, &s)).collect(),
    };
    Some(DefiniteClause::new(inst(&general.head), general.body.iter().map(inst).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_program;

    fn clause(src: &str) -> DefiniteClause {
        parse_program(src).unwrap().clauses.remove(0)
    }

    #[test]
    fn finds_grandparent_instance() {
        let bot = clause("gparent(henry,john) :- father(henry,jane), mother(jane,john), parent(henry,jane), parent(jane,john).");
        let h = clause("gparent(X,Y) :- parent(X,Z), parent(Z,Y).");
        let got = subsumes(&h, &bot).unwrap();
        assert_eq!(got.to_string(), clause("gparent(henry,john) :- parent(henry,jane), parent(jane,john).").to_string());
    }

    #[test]
    fn backtracks_and_fails() {
        let bot = clause("p(a) :- q(a,b), q(a,c), r(c).");
        assert!(subsumes(&clause("p(X) :- q(X,Y), r(Y)."), &bot).is_some());
        assert!(subsumes(&clause("p(X) :- q(X,Y), r(X)."), &bot).is_none());
        assert!(subsumes(&clause("p(b) :- q(b,_)."), &bot).is_none());
        assert!(subsumes(&clause("p(_) :- q(_,b), q(_,c)."), &bot).is_some());
    }
}
