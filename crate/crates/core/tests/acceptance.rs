//! Acceptance criteria. Prints one PASS/FAIL line per criterion, then fails
//! if any criterion failed. All comparisons are exact.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::ops::ControlFlow;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofactor_core::constructions::{constituents_with, named, CutChoice};
use twofactor_core::generator::{generate_all, GenOptions};
use twofactor_core::matching::count_perfect_matchings;
use twofactor_core::structure::is_essentially_4_edge_connected;
use twofactor_core::voltage::{enumerate_lifts, BaseGraph, FiniteGroup, LiftOptions};
use twofactor_core::{
    automorphisms, bipartition, canonical_form, classify, cyclic_edge_connectivity, enumerate_perfect_matchings, girth,
    transitivity, two_factor_of, ClassifyOptions, Graph, Mode, Status,
};

use common::*;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn types_of(g: &Graph) -> (u64, BTreeSet<Vec<usize>>) {
    let r = classify(g, &ClassifyOptions { full: true, ..Default::default() }).unwrap();
    assert_eq!(r.status, Status::Complete);
    let types = r.type_multiset.keys().map(|t| t.lengths().to_vec()).collect();
    (r.two_factor_count.unwrap(), types)
}

fn set(types: &[&[usize]]) -> BTreeSet<Vec<usize>> {
    types.iter().map(|t| t.to_vec()).collect()
}

fn verdicts(g: &Graph) -> (Option<bool>, Option<bool>, Option<bool>) {
    let r = classify(g, &ClassifyOptions { full: true, ..Default::default() }).unwrap();
    (r.verdict_p2fi, r.verdict_2fi, r.verdict_2fh)
}

fn known_graphs() -> Outcome {
    let cases: [(&str, (bool, bool, bool), Option<u64>, &[&[usize]]); 5] = [
        ("K33", (true, true, true), None, &[&[6]]),
        ("Heawood", (true, true, true), None, &[&[14]]),
        ("Pappus", (true, false, false), None, &[&[18], &[6, 6, 6]]),
        ("G30", (true, false, false), Some(312), &[&[6, 6, 18], &[6, 10, 14], &[10, 10, 10], &[30]]),
        ("Gray", (true, false, false), Some(10752), &[&[54], &[18, 18, 18], &[14, 14, 26]]),
    ];
    for (name, (p2fi, tfi, tfh), count, types) in cases {
        let g = named(name).map_err(|e| e.to_string())?;
        let v = verdicts(&g);
        ensure!(v == (Some(p2fi), Some(tfi), Some(tfh)), "{name}: verdicts {v:?}");
        let (c, t) = types_of(&g);
        ensure!(t == set(types), "{name}: types {t:?}");
        if let Some(expected) = count {
            ensure!(c == expected, "{name}: {c} 2-factors");
        }
    }
    Ok(())
}

fn structure() -> Outcome {
    let gray = named("Gray").map_err(|e| e.to_string())?;
    ensure!(girth(&gray) == Some(8), "girth(Gray) = {:?}", girth(&gray));
    ensure!(cyclic_edge_connectivity(&gray) == Some(8), "cec(Gray) = {:?}", cyclic_edge_connectivity(&gray));
    let aut = automorphisms(&gray).group_order;
    ensure!(aut == 1296, "|Aut(Gray)| = {aut}");
    ensure!(transitivity(&gray).semisymmetric, "Gray is not semisymmetric");

    let g30 = named("G30").map_err(|e| e.to_string())?;
    ensure!(g30.n() == 30 && g30.is_cubic(), "G30 is not a cubic graph on 30 vertices");
    ensure!(bipartition(&g30).is_bipartite(), "G30 is not bipartite");
    ensure!(girth(&g30) == Some(6), "girth(G30) = {:?}", girth(&g30));
    ensure!(cyclic_edge_connectivity(&g30) == Some(6), "cec(G30) = {:?}", cyclic_edge_connectivity(&g30));
    let aut = automorphisms(&g30).group_order;
    ensure!(aut == 144, "|Aut(G30)| = {aut}");
    let t = transitivity(&g30);
    ensure!(!t.vertex_transitive && !t.edge_transitive, "G30 transitivity {t:?}");
    for (name, g) in [("Gray", &gray), ("G30", &g30)] {
        ensure!(is_essentially_4_edge_connected(g).unwrap(), "{name} has a nontrivial 3-edge cut");
    }
    Ok(())
}

fn generator_counts(table: &BTreeMap<usize, Vec<Graph>>) -> Outcome {
    let counts: Vec<usize> = table.values().map(Vec::len).collect();
    ensure!(counts == [1, 1, 3, 10, 28, 162, 1201], "counts {counts:?}");
    let heawood = canonical_form(&named("Heawood").unwrap());
    ensure!(canonical_form(&table[&14][0]) == heawood, "n=14 graph is not Heawood");
    let pappus = canonical_form(&named("Pappus").unwrap());
    ensure!(table[&18].iter().any(|g| canonical_form(g) == pappus), "Pappus missing at n=18");
    Ok(())
}

fn mini_search(table: &BTreeMap<usize, Vec<Graph>>) -> Outcome {
    ensure!(verdicts(&named("K33").unwrap()).0 == Some(true), "K33 is not p2fi");
    let mut hits = BTreeSet::new();
    for g in table.values().flatten() {
        if !is_essentially_4_edge_connected(g).unwrap() {
            continue;
        }
        let r = classify(g, &ClassifyOptions { mode: Mode::Hybrid, workers: 2, ..Default::default() }).unwrap();
        ensure!(r.status != Status::NotRefutedWithinBudget, "undecided graph on {} vertices", g.n());
        if r.verdict_p2fi == Some(true) {
            hits.insert(canonical_form(g));
        }
    }
    let expected: BTreeSet<Vec<u8>> = ["Heawood", "Pappus"].iter().map(|n| canonical_form(&named(n).unwrap())).collect();
    ensure!(hits == expected, "{} e4ec p2fi graphs, expected Heawood and Pappus", hits.len());
    Ok(())
}

fn lift_forms(base: &BaseGraph, group: &str, min_girth: usize) -> BTreeSet<Vec<u8>> {
    let group = FiniteGroup::parse(group).unwrap();
    let opts = LiftOptions { min_girth, ..Default::default() };
    enumerate_lifts(base, &group, &opts, |_| true).iter().map(|f| canonical_form(&f.graph)).collect()
}

fn lifts() -> Outcome {
    let form = |name: &str| canonical_form(&named(name).unwrap());
    let theta = BaseGraph::theta();
    ensure!(lift_forms(&theta, "Z3", 3) == BTreeSet::from([form("K33")]), "theta over Z3");
    ensure!(lift_forms(&theta, "Z7", 6) == BTreeSet::from([form("Heawood")]), "theta over Z7");
    let k33 = BaseGraph::from_graph(&named("K33").unwrap());
    ensure!(lift_forms(&k33, "Z3", 6).contains(&form("Pappus")), "Pappus is not a Z3 lift of K33");
    let pappus = BaseGraph::from_graph(&named("Pappus").unwrap());
    ensure!(lift_forms(&pappus, "Z3", 8).contains(&form("Gray")), "Gray is not a Z3 lift of Pappus");
    let g30 = named("G30").map_err(|e| e.to_string())?;
    ensure!(!lift_forms(&theta, "Z15", 3).contains(&canonical_form(&g30)), "G30 is a Z15 lift of theta");

    let gray = BaseGraph::from_graph(&named("Gray").unwrap());
    let z3 = FiniteGroup::cyclic(3).unwrap();
    let found = enumerate_lifts(&gray, &z3, &LiftOptions { min_girth: 10, ..Default::default() }, |_| true);
    ensure!(found.len() == 1, "{} girth-10 Z3 lifts of Gray", found.len());
    let h = &found[0].graph;
    ensure!(girth(h) == Some(12), "lift girth {:?}", girth(h));
    let r = classify(h, &ClassifyOptions { mode: Mode::Hybrid, workers: 2, seed: 1, ..Default::default() }).unwrap();
    ensure!(r.verdict_p2fi == Some(false), "lift not refuted: {:?}", r.status);
    ensure!(r.witness.as_ref().is_some_and(|w| w.verify(h)), "witness does not verify");
    Ok(())
}

fn oracle_equivalence(table: &BTreeMap<usize, Vec<Graph>>) -> Outcome {
    let mut graphs: Vec<Graph> = table.range(..=22).flat_map(|(_, v)| v.iter().cloned()).collect();
    ensure!(graphs.len() == 43, "{} generated graphs with n <= 22", graphs.len());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = 2 * rng.gen_range(3..=10);
        graphs.push(random_cubic_bipartite(n, &mut rng));
    }
    for (i, g) in graphs.iter().enumerate() {
        let main = count_perfect_matchings(g);
        let oracle = subset_matching_count(g);
        ensure!(main == oracle, "graph {i}: {main} matchings, oracle {oracle}");
        let ex = classify(g, &ClassifyOptions::default()).unwrap();
        let hy = classify(g, &ClassifyOptions { mode: Mode::Hybrid, workers: 3, seed: i as u64, ..Default::default() }).unwrap();
        ensure!(ex.verdict_p2fi == hy.verdict_p2fi, "graph {i}: exhaustive {:?}, hybrid {:?}", ex.verdict_p2fi, hy.verdict_p2fi);
    }
    Ok(())
}

fn invariants(table: &BTreeMap<usize, Vec<Graph>>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut graphs: Vec<Graph> = table.range(..=22).flat_map(|(_, v)| v.iter().cloned()).collect();
    for _ in 0..200 {
        let n = 2 * rng.gen_range(3..=10);
        graphs.push(random_cubic_bipartite(n, &mut rng));
    }
    for name in ["K33", "Heawood", "Pappus", "G30", "Gray"] {
        graphs.push(named(name).map_err(|e| e.to_string())?);
    }
    for g in &graphs {
        let mut seen = BTreeSet::new();
        let mut failure = None;
        let count = enumerate_perfect_matchings(g, |m| {
            let pm = m.to_owned();
            let complement: Vec<(usize, usize)> = g.edges().into_iter().filter(|e| !pm.edges().contains(e)).collect();
            let t = two_factor_of(g, &pm).unwrap();
            let lengths = t.lengths();
            if cycle_lengths(g.n(), &complement).as_deref() != Some(lengths) {
                failure = Some("complement is not the reported 2-factor".to_string());
            } else if lengths.iter().sum::<usize>() != g.n() {
                failure = Some(format!("type {t} does not sum to {}", g.n()));
            } else if lengths.iter().any(|l| l % 2 == 1) {
                failure = Some(format!("odd cycle in {t}"));
            }
            seen.insert(complement);
            if failure.is_some() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        ensure!(seen.len() as u64 == count, "two matchings gave the same 2-factor");
        if g.n() <= 30 {
            let brute = brute_two_factor_count(g);
            ensure!(count == brute, "{count} matchings, {brute} 2-factors");
        }
        if verdicts(g).2 == Some(true) {
            ensure!(g.n() % 4 == 2, "2FH graph on {} vertices", g.n());
        }
    }

    let mut canon_set: Vec<Graph> = table.range(..=22).flat_map(|(_, v)| v.iter().cloned()).collect();
    for name in ["K4", "K5", "K33", "Petersen", "Heawood", "Pappus", "Gray"] {
        canon_set.push(named(name).unwrap());
    }
    ensure!(canon_set.len() == 50, "{} graphs for relabeling", canon_set.len());
    for g in &canon_set {
        let form = canonical_form(g);
        for _ in 0..100 {
            let p = random_permutation(g.n(), &mut rng);
            ensure!(canonical_form(&g.relabel(&p)) == form, "canonical form changed under relabeling");
        }
    }

    for i in 0..200u64 {
        let (g, factors) = random_star_product(rng.gen_range(1..5), &mut rng);
        let mut expected: Vec<Vec<u8>> = factors.iter().map(canonical_form).collect();
        expected.sort();
        for choice in [CutChoice::Smallest, CutChoice::Largest, CutChoice::Seeded(i)] {
            let parts = constituents_with(&g, choice).map_err(|e| e.to_string())?;
            let forms: Vec<Vec<u8>> = parts.iter().map(canonical_form).collect();
            ensure!(forms == expected, "star product {i}: constituents differ under {choice:?}");
        }
    }
    Ok(())
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = start.elapsed().as_secs_f64();
    // Straight to the stdout handle so the lines survive test output capture.
    let line = match &outcome {
        Ok(()) => format!("PASS {label} ({secs:.1}s)\n"),
        Err(e) => format!("FAIL {label} ({secs:.1}s): {e}\n"),
    };
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    outcome.is_ok()
}

fn within(label: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> impl FnOnce() -> Outcome {
    let label = label.to_string();
    move || {
        let start = Instant::now();
        f()?;
        ensure!(start.elapsed() <= limit, "{label} took {:?}, limit {limit:?}", start.elapsed());
        Ok(())
    }
}

#[test]
fn acceptance() {
    std::io::stdout().write_all(b"\n").unwrap();
    let start = Instant::now();
    let table: BTreeMap<usize, Vec<Graph>> =
        (14..=26).step_by(2).map(|n| (n, generate_all(n, &GenOptions::default()).unwrap())).collect();
    let generation = start.elapsed();

    let results = [
        run("1 known-graph classification", within("battery", Duration::from_secs(300), known_graphs)),
        run("2 structural battery", within("battery", Duration::from_secs(60), structure)),
        run("3 generator counts n=14..26", || {
            ensure!(generation <= Duration::from_secs(3600), "generation took {generation:?}");
            generator_counts(&table)
        }),
        run("4 e4ec p2fi mini-search n<=26", || mini_search(&table)),
        run("5 voltage-lift battery", within("battery", Duration::from_secs(600), lifts)),
        run("6 oracle equivalence", || oracle_equivalence(&table)),
        run("7 invariant suite", || invariants(&table)),
    ];
    assert!(results.iter().all(|&ok| ok), "acceptance criteria failed");
}
