//! Random ground clauses in a small mode language, and random background
//! knowledge over the same predicates.

use rand::seq::SliceRandom;
use rand::Rng;

use botgraph::logic::{parse_program, DefiniteClause, Literal, Program, Term};
use botgraph::modes::{FactTypes, ModeSet};

pub const MODES: &str = "\
:- modeh(h(+a,-b)).
:- modeb(p(+a,-b)).
:- modeb(q(+b,-a)).
:- modeb(r(+a,#c)).
:- modeb(s(+b,+a)).
:- modeb(t(+a,-a)).";

pub const DEPTH: u32 = 3;

const A: [&str; 4] = ["a0", "a1", "a2", "a3"];
const B: [&str; 4] = ["b0", "b1", "b2", "b3"];
const C: [&str; 2] = ["c0", "c1"];

pub fn modes() -> ModeSet {
    ModeSet::parse(MODES).unwrap()
}

pub fn types() -> FactTypes {
    FactTypes::new()
        .with("a", A.map(Term::atom))
        .with("b", B.map(Term::atom))
        .with("c", C.map(Term::atom))
}

fn lit(p: &str, args: &[&str]) -> Literal {
    Literal::new(p, args.iter().map(|a| Term::atom(a)).collect())
}

/// A clause in the language with depth limit `DEPTH`. The first body
/// literal produces the head output, so every prefix of the body that keeps
/// it is also in the language.
pub fn clause(rng: &mut impl Rng, max_body: usize) -> DefiniteClause {
    let x = *A.choose(rng).unwrap();
    let y = *B.choose(rng).unwrap();
    let mut avail: Vec<(&str, char, u32)> = vec![(x, 'a', 0), (y, 'b', 1)];
    let mut body = vec![lit("p", &[x, y])];
    let n = rng.gen_range(0..max_body);
    let pick = |rng: &mut dyn rand::RngCore, avail: &[(&'static str, char, u32)], ty: char| {
        let pool: Vec<_> = avail.iter().filter(|(_, t, d)| *t == ty && *d < DEPTH).copied().collect();
        pool.choose(rng).copied()
    };
    for _ in 0..n {
        let a = *A.choose(rng).unwrap();
        let b = *B.choose(rng).unwrap();
        let c = *C.choose(rng).unwrap();
        let (l, out) = match rng.gen_range(0..5) {
            0 => match pick(rng, &avail, 'a') {
                Some((i, _, d)) => (lit("p", &[i, b]), Some((b, 'b', d + 1))),
                None => continue,
            },
            1 => match pick(rng, &avail, 'b') {
                Some((i, _, d)) => (lit("q", &[i, a]), Some((a, 'a', d + 1))),
                None => continue,
            },
            2 => match pick(rng, &avail, 'a') {
                Some((i, _, _)) => (lit("r", &[i, c]), None),
                None => continue,
            },
            3 => match (pick(rng, &avail, 'b'), pick(rng, &avail, 'a')) {
                (Some((i, _, _)), Some((j, _, _))) => (lit("s", &[i, j]), None),
                _ => continue,
            },
            _ => match pick(rng, &avail, 'a') {
                Some((i, _, d)) => (lit("t", &[i, a]), Some((a, 'a', d + 1))),
                None => continue,
            },
        };
        if body.contains(&l) {
            continue;
        }
        if let Some((term, ty, d)) = out {
            match avail.iter_mut().find(|(t, k, _)| *t == term && *k == ty) {
                Some(e) => e.2 = e.2.min(d),
                None => avail.push((term, ty, d)),
            }
        }
        body.push(l);
    }
    DefiniteClause::new(lit("h", &[x, y]), body)
}

/// Random facts for the body predicates plus type definitions.
pub fn background(rng: &mut impl Rng, facts: usize) -> Program {
    let mut src = String::new();
    for t in A {
        src.push_str(&format!("a({t}).\n"));
    }
    for t in B {
        src.push_str(&format!("b({t}).\n"));
    }
    for t in C {
        src.push_str(&format!("c({t}).\n"));
    }
    for _ in 0..facts {
        let a = A.choose(rng).unwrap();
        let b = B.choose(rng).unwrap();
        let f = match rng.gen_range(0..5) {
            0 => format!("p({a},{b})."),
            1 => format!("q({b},{a})."),
            2 => format!("r({a},{}).", C.choose(rng).unwrap()),
            3 => format!("s({b},{a})."),
            _ => format!("t({a},{}).", A.choose(rng).unwrap()),
        };
        src.push_str(&f);
        src.push('\n');
    }
    src.push_str("t(X,Y) :- p(X,Z), q(Z,Y).\n");
    parse_program(&src).unwrap()
}

/// A ground example `h(a, b)` with a few body facts of its own.
pub fn example(rng: &mut impl Rng) -> DefiniteClause {
    let a = *A.choose(rng).unwrap();
    let b = *B.choose(rng).unwrap();
    let body = (0..rng.gen_range(0..3))
        .map(|_| lit("p", &[A.choose(rng).unwrap(), B.choose(rng).unwrap()]))
        .collect();
    DefiniteClause::new(lit("h", &[a, b]), body)
}
