//! One line per primary acceptance criterion. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use botgraph::dataset::*;
use botgraph::graph::*;
use botgraph::logic::{clause_equal, parse_literal, DefiniteClause, Term};
use botgraph::modes::*;
use botgraph::saturation::{SaturationConfig, Saturator};
use common::*;

const SATURATION_SECONDS: f64 = 1.0;
const ALGEBRA_SECONDS: f64 = 60.0;
const ALGEBRA_CLAUSES: usize = 1000;
const INJECTIVITY_POOL: usize = 200;
const SOUNDNESS_INSTANCES: usize = 300;
const SEED: u64 = 0x05ee_db07;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn golden_saturation() -> Outcome {
    let t = Instant::now();
    let e = &examples("gparent")[0].clause;
    let b1 = saturator("gparent", 1).saturate(e).unwrap().unwrap();
    let b2 = saturator("gparent", 2).saturate(e).unwrap().unwrap();
    let secs = t.elapsed().as_secs_f64();
    check(clause_equal(&b1.clause, &clause(GPARENT_BOT1)), || format!("d=1 gave {}", b1.clause))?;
    check(clause_equal(&b2.clause, &clause(GPARENT_BOT2)), || format!("d=2 gave {}", b2.clause))?;
    check(secs < SATURATION_SECONDS, || format!("took {secs:.3} s"))?;
    Ok(format!("d=1 and d=2 clause-equal (tolerance 0), {secs:.4} s < {SATURATION_SECONDS} s"))
}

fn golden_depth() -> Outcome {
    let b = saturator("gparent", 2).saturate(&examples("gparent")[0].clause).unwrap().unwrap();
    let person = TypeName::new("person");
    let got: Vec<Option<u32>> = ["henry", "jane", "john", "alice"]
        .iter()
        .map(|t| term_depth(&b.witness, &Term::atom(t), &person))
        .collect();
    check(got == [Some(0), Some(1), Some(2), Some(2)], || format!("depths {got:?}"))?;
    Ok("(henry,jane,john,alice) = (0,1,2,2), exact".into())
}

fn seq(modes: &ModeSet, pairs: &[(&str, usize)]) -> LambdaMuSeq {
    LambdaMuSeq(
        pairs
            .iter()
            .map(|(l, m)| LmPair::new(parse_literal(l).unwrap(), modes.all()[*m].clone()))
            .collect(),
    )
}

fn sequence_enumeration() -> Outcome {
    let modes = ModeSet::parse(&read("multimode", "modes.pl")).unwrap();
    let types = FactTypes::new().with("int", [Term::int(1)]);
    let lang = Language::new(&modes, &types, 1);
    let c = clause("p(1) :- q(1), r(1).");
    let got: BTreeSet<LambdaMuSeq> = enumerate_lambda_mu_sequences(&c, &lang, DEFAULT_CAP).sequences.into_iter().collect();
    let want: BTreeSet<LambdaMuSeq> = [
        seq(&modes, &[("p(1)", 0), ("q(1)", 2), ("r(1)", 4)]),
        seq(&modes, &[("p(1)", 0), ("r(1)", 4), ("q(1)", 2)]),
        seq(&modes, &[("p(1)", 1), ("q(1)", 3), ("r(1)", 5)]),
        seq(&modes, &[("p(1)", 1), ("r(1)", 5), ("q(1)", 3)]),
    ]
    .into();
    check(got == want, || format!("{} sequences, not the expected four", got.len()))?;
    for bad in [[0, 3, 4], [1, 3, 4]] {
        let s = seq(&modes, &[("p(1)", bad[0]), ("q(1)", bad[1]), ("r(1)", bad[2])]);
        check(!is_lambda_mu_sequence(&c, &s, &lang), || format!("accepted mixed-type sequence {bad:?}"))?;
    }
    Ok("4 sequences exactly, 2 mixed-type sequences rejected".into())
}

fn golden_graphs() -> Outcome {
    let sat = saturator("gparent", 2);
    let g = bot_graph(&sat, &examples("gparent")[0].clause).unwrap().graph;
    let m = sat.modes().all();
    let x = |l: &str, i: usize| VertexLabel::X(LmPair::new(parse_literal(l).unwrap(), m[i].clone()));
    let y = |t: &str| {
        VertexLabel::Y(TermLabel {
            term: Term::atom(t),
            ty: TypeLabel::plain("person"),
        })
    };
    let xs = [
        x("gparent(henry,john)", 0),
        x("father(henry,jane)", 1),
        x("mother(jane,john)", 2),
        x("mother(jane,alice)", 2),
        x("parent(henry,jane)", 3),
        x("parent(jane,john)", 3),
        x("parent(jane,alice)", 3),
    ];
    let ys = ["henry", "john", "jane", "alice"].map(y);
    let mut want = BTreeSet::new();
    for (j, i) in [(1, 1), (1, 2), (1, 5), (3, 3), (3, 4), (3, 6), (3, 7)] {
        want.insert((ys[j - 1].clone(), xs[i - 1].clone()));
    }
    for (i, j) in [(1, 2), (2, 3), (3, 2), (4, 4), (5, 3), (6, 2), (7, 4)] {
        want.insert((xs[i - 1].clone(), ys[j - 1].clone()));
    }
    check(g.xs().len() == 7 && g.ys().len() == 4, || format!("|X|={} |Y|={}", g.xs().len(), g.ys().len()))?;
    check(g.arc_labels() == want, || "gparent arcs differ".into())?;

    let mm = bot_graph(&saturator("multimode", 1), &examples("multimode")[0].clause).unwrap().graph;
    let shape = (mm.xs().len(), mm.ys().len(), mm.arcs().len(), mm.e_out().len());
    check(shape == (6, 2, 6, 0), || format!("int/real graph {shape:?}"))?;

    let col = bot_graph(&saturator("colours", 1), &examples("colours")[0].clause).unwrap().graph;
    check(col.e_in() == [(0, 0), (0, 1)] && col.e_out() == [(1, 1), (2, 1), (2, 2)], || col.dump())?;
    Ok("gparent |X|=7 |Y|=4 with 7+7 arcs; int/real 6 x, 2 y, 6 arcs; colour 5 arcs; exact up to id bijection".into())
}

fn golden_vectors() -> Outcome {
    let sat = saturator("gparent", 2);
    let v = example_graph(&sat, &examples("gparent")[0].clause, &vocabulary(&sat)).unwrap();
    let mut rows: Vec<(String, Vec<f64>)> = v.labels.iter().map(|l| l.to_string()).zip(v.features.clone()).collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let want: Vec<(&str, [f64; 7])> = vec![
        ("(alice, person)", [0., 0., 0., 0., 1., 0., 0.]),
        ("(father(henry,jane),", [0., 1., 0., 0., 0., 0., 0.]),
        ("(henry, person)", [0., 0., 0., 0., 1., 0., 0.]),
        ("(jane, person)", [0., 0., 0., 0., 1., 0., 0.]),
        ("(john, person)", [0., 0., 0., 0., 1., 0., 0.]),
        ("(mother(jane,alice),", [0., 0., 1., 0., 0., 0., 0.]),
        ("(mother(jane,john),", [0., 0., 1., 0., 0., 0., 0.]),
        ("(parent(henry,jane),", [0., 0., 0., 1., 0., 0., 0.]),
        ("(parent(jane,alice),", [0., 0., 0., 1., 0., 0., 0.]),
        ("(parent(jane,john),", [0., 0., 0., 1., 0., 0., 0.]),
    ];
    check(rows.len() == want.len(), || format!("{} gparent rows", rows.len()))?;
    for ((label, got), (prefix, row)) in rows.iter().zip(&want) {
        check(label.starts_with(prefix) && got[..] == row[..], || format!("{label}: {got:?}"))?;
    }

    let sat = saturator("colours", 1);
    let v = example_graph(&sat, &examples("colours")[0].clause, &vocabulary(&sat)).unwrap();
    let want: [(&str, [f64; 9]); 5] = [
        ("(q(1.0,white), modeb(q(+real,#colour)))", [0., 1., 0., 0., 0., 0., 0., 0., 0.]),
        ("(r(white,1.0), modeb(r(#colour,#real)))", [0., 0., 1., 0., 0., 0., 0., 0., 0.]),
        ("(1.0, real)", [0., 0., 0., 1., 0., 0., 0., 0., 0.]),
        ("(white, #colour)", [0., 0., 0., 0., 1., 0., 1., 0., 0.]),
        ("(1.0, #real)", [0., 0., 0., 0., 0., 1., 0., 0., 1.]),
    ];
    for ((l, got), (label, row)) in v.labels.iter().zip(&v.features).zip(&want) {
        check(l.to_string() == *label && got[..] == row[..], || format!("{l}: {got:?}"))?;
    }
    Ok("10 gparent rows (width 7) and 5 colour rows (width 9), exact values".into())
}

fn algebra() -> Outcome {
    let t = Instant::now();
    let (modes, types) = (gen::modes(), gen::types());
    let lang = Language::new(&modes, &types, gen::DEPTH);
    let graph = |c: &DefiniteClause| clause_to_graph(Some(c), &lang, DEFAULT_CAP, None).unwrap();
    let lit_set = |c: &DefiniteClause| -> BTreeSet<LmPair> { lits(Some(c), &lang, DEFAULT_CAP, None).unwrap().pairs.into_iter().collect() };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let clauses: Vec<DefiniteClause> = (0..ALGEBRA_CLAUSES).map(|_| gen::clause(&mut rng, 10)).collect();
    let graphs: Vec<ClauseGraph> = clauses.iter().map(graph).collect();

    let mut round_trips = 0;
    let (mut nested, mut explained, mut order_checks) = (0, 0, 0);
    for (c, g) in clauses.iter().zip(&graphs) {
        check(in_mode_language(Some(c), &lang), || format!("generated clause outside language: {c}"))?;
        let back = graph_to_clause(g).map_err(|e| e.to_string())?.ok_or("empty round trip")?;
        check(clause_equal(&back, c), || format!("round trip failed for {c}"))?;
        round_trips += 1;

        let n = c.body.len();
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(i..=n);
        let prefix = |k: usize| DefiniteClause::new(c.head.clone(), c.body[..k].to_vec());
        let (pi, pj) = (prefix(i), prefix(j));
        let (gi, gj) = (graph(&pi), graph(&pj));
        check(lit_set(&pi).is_subset(&lit_set(&pj)), || format!("nested Lits not nested for {c}"))?;
        check(cg_leq(&gi, &gj) && cg_leq(&gj, g), || format!("monotonicity failed for {c}"))?;
        check(cg_leq(&gi, &gi), || format!("reflexivity failed for {c}"))?;
        check(cg_leq(&gi, g), || format!("transitivity failed for {c}"))?;
        nested += 1;

        let extra = c.body[1..].iter().filter(|_| rng.gen_bool(0.5)).cloned();
        let ct = DefiniteClause::new(c.head.clone(), std::iter::once(c.body[0].clone()).chain(extra).collect());
        if in_mode_language(Some(&ct), &lang) {
            let sub = explanation_subgraph(g, &ct).map_err(|e| e.to_string())?;
            let back = graph_to_clause(&sub).map_err(|e| e.to_string())?.ok_or("empty explanation")?;
            check(cg_leq(&sub, g) && clause_equal(&back, &ct), || format!("explanation failed for {ct}"))?;
            explained += 1;
        }
    }

    let mut pairs = 0;
    for a in 0..INJECTIVITY_POOL {
        for b in a + 1..INJECTIVITY_POOL {
            let distinct = clauses[a].literal_set() != clauses[b].literal_set();
            check((graphs[a] != graphs[b]) == distinct, || format!("injectivity failed for {} / {}", clauses[a], clauses[b]))?;
            pairs += distinct as usize;
        }
    }

    for _ in 0..ALGEBRA_CLAUSES {
        let ids: Vec<usize> = (0..ALGEBRA_CLAUSES).choose_multiple(&mut rng, 3);
        let [a, b, c] = [&graphs[ids[0]], &graphs[ids[1]], &graphs[ids[2]]];
        if cg_leq(a, b) && cg_leq(b, a) {
            check(a == b, || "antisymmetry failed".into())?;
        }
        if cg_leq(a, b) && cg_leq(b, c) {
            check(cg_leq(a, c), || "transitivity failed".into())?;
        }
        order_checks += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    check(secs < ALGEBRA_SECONDS, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{round_trips}/{ALGEBRA_CLAUSES} round trips, {pairs} distinct pairs injective, {nested} nested chains ordered, {order_checks} random triples, {explained} explanations; {secs:.2} s < {ALGEBRA_SECONDS} s"
    ))
}

fn soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut proved = 0usize;
    let mut bottoms = 0usize;
    let mut verify = |sat: &Saturator, e: &DefiniteClause| -> Result<(), String> {
        let types = sat.types_for(e);
        let Some(b) = sat.saturate_with(e, &types).map_err(|err| err.to_string())? else {
            return Ok(());
        };
        bottoms += 1;
        for l in &b.clause.body {
            check(types.engine().borrow_mut().holds(l), || format!("{l} does not re-prove"))?;
            proved += 1;
        }
        let lang = sat.language(&types).with_policy(b.policy());
        check(is_lambda_mu_sequence(&b.clause, &b.witness, &lang), || format!("witness rejected for {}", b.clause))
    };
    for i in 0..SOUNDNESS_INSTANCES {
        let bk = gen::background(&mut rng, 14);
        let e = gen::example(&mut rng);
        let config = SaturationConfig {
            depth: 1 + (i % 3) as u32,
            ..Default::default()
        };
        verify(&Saturator::new(&bk, gen::modes(), config), &e)?;
    }
    for name in ["gparent", "molecules", "colours", "multimode"] {
        let sat = saturator(name, 2);
        for e in examples(name) {
            verify(&sat, &e.clause)?;
        }
    }
    Ok(format!("{proved}/{proved} body literals of {bottoms} bottom clauses re-proved (100%)"))
}

fn exports() -> Outcome {
    let build = |jobs| {
        let sat = saturator("molecules", 2);
        let prov = Provenance::new(sat.config()).with_sources(read("molecules", "modes.pl").as_bytes(), read("molecules", "bk.pl").as_bytes());
        build_dataset(&sat, &examples("molecules"), prov, Some(jobs)).unwrap()
    };
    let (a, b) = (build(1), build(3));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut written = Vec::new();
    for (k, ds) in [&a, &b].into_iter().enumerate() {
        let sub = dir.path().join(k.to_string());
        let mut files = export_tu(ds, &sub, "MOL").map_err(|e| e.to_string())?;
        let json = sub.join("MOL.json");
        export_json(ds, &json).map_err(|e| e.to_string())?;
        files.push(json);
        written.push(files.iter().map(|p| std::fs::read(p).unwrap()).collect::<Vec<_>>());
    }
    check(written[0] == written[1], || "two runs differ".into())?;

    let tu = import_tu(&dir.path().join("0"), "MOL").map_err(|e| e.to_string())?;
    check(tu.len() == a.len(), || "graph count changed".into())?;
    for (g, e) in tu.iter().zip(&a.entries) {
        let mut edges = g.edges.clone();
        edges.sort_unstable();
        check(edges == e.graph.edges && g.attributes == e.graph.features && g.label == a.class_of(e), || {
            format!("TU round trip differs for {}", e.id)
        })?;
    }
    let doc = import_json(&dir.path().join("0").join("MOL.json")).map_err(|e| e.to_string())?;
    check(doc == to_document(&a), || "JSON round trip differs".into())?;
    let vertices: usize = a.entries.iter().map(|e| e.graph.num_vertices()).sum();
    Ok(format!("5 files byte-identical across runs; TU and JSON re-import exact ({} graphs, {vertices} vertices)", a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden saturation", golden_saturation),
        ("golden depth", golden_depth),
        ("sequence enumeration", sequence_enumeration),
        ("golden graphs", golden_graphs),
        ("golden vectors", golden_vectors),
        ("algebraic suite", algebra),
        ("soundness oracle", soundness),
        ("export determinism and round trip", exports),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} primary criteria passed", 8 - failed, 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
