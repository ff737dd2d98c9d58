mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofactor_core::constructions::{constituents, constituents_with, named, star_product, three_cut_reduction, CutChoice, StarProductSpec};
use twofactor_core::generator::{generate_all, GenOptions};
use twofactor_core::matching::count_perfect_matchings;
use twofactor_core::structure::is_essentially_4_edge_connected;
use twofactor_core::voltage::{lift, BaseGraph, FiniteGroup, VoltageAssignment};
use twofactor_core::{
    bipartition, canonical_form, classify, enumerate_perfect_matchings, girth, parse_graph6, two_factor_of, write_graph6,
    ClassifyOptions, Graph, Mode, Status,
};

use common::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (0usize..=20).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for j in 1..n {
                for i in 0..j {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graph6_round_trip(g in arb_graph()) {
        let s = write_graph6(&g);
        prop_assert!(s.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn pruning_does_not_change_verdicts(seed in any::<u64>(), half in 3usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_cubic_bipartite(2 * half, &mut rng);
        let pruned = classify(&g, &ClassifyOptions::default()).unwrap();
        let full = classify(&g, &ClassifyOptions { full: true, ..Default::default() }).unwrap();
        prop_assert_eq!(full.status, Status::Complete);
        prop_assert_eq!(pruned.verdict_p2fi, full.verdict_p2fi);
        prop_assert_eq!(full.two_factor_count, Some(count_perfect_matchings(&g)));
        if let Some(w) = &pruned.witness {
            prop_assert!(w.verify(&g));
            let even = cycle_lengths(g.n(), &w.even.edges).unwrap();
            let odd = cycle_lengths(g.n(), &w.odd.edges).unwrap();
            prop_assert!(even.len() % 2 == 0 && odd.len() % 2 == 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lift_degrees_follow_base(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = ["Z2", "Z3", "Z5", "Z2^2", "Z3^2", "Z2xZ3", "NA27"];
        let group = FiniteGroup::parse(groups[rng.gen_range(0..groups.len())]).unwrap();
        let n = rng.gen_range(1..6);
        let mut base = BaseGraph::new(n);
        for v in 1..n {
            base.add_edge(rng.gen_range(0..v), v).unwrap();
        }
        for _ in 0..rng.gen_range(0..6) {
            base.add_edge(rng.gen_range(0..n), rng.gen_range(0..n)).unwrap();
        }
        let volts = (0..base.edge_count()).map(|_| rng.gen_range(0..group.order())).collect();
        let a = VoltageAssignment::new(base.clone(), group.clone(), volts).unwrap();
        if let Ok(g) = lift(&a) {
            prop_assert_eq!(g.n(), n * group.order());
            for v in 0..n {
                for x in 0..group.order() {
                    prop_assert_eq!(g.degree(v * group.order() + x), base.degree(v));
                }
            }
            let b = lift(&a.normalized()).unwrap();
            prop_assert_eq!(canonical_form(&g), canonical_form(&b));
        }
    }

    #[test]
    fn star_products_of_bipartite_graphs_are_bipartite(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_star_product(rng.gen_range(1..4), &mut rng);
        prop_assert!(g.is_cubic());
        prop_assert!(bipartition(&g).is_bipartite());
        prop_assert!(!is_essentially_4_edge_connected(&g).unwrap());
    }

    #[test]
    fn constituents_are_confluent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, factors) = random_star_product(rng.gen_range(1..5), &mut rng);
        let mut expected: Vec<Vec<u8>> = factors.iter().map(canonical_form).collect();
        expected.sort();
        for choice in [CutChoice::Smallest, CutChoice::Largest, CutChoice::Seeded(seed)] {
            let parts = constituents_with(&g, choice).unwrap();
            let forms: Vec<Vec<u8>> = parts.iter().map(canonical_form).collect();
            prop_assert_eq!(&forms, &expected);
        }
    }

    #[test]
    fn reduction_undoes_star_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = ["K33", "Heawood", "Pappus", "Petersen"];
        let g1 = named(names[rng.gen_range(0..4)]).unwrap();
        let g2 = named(names[rng.gen_range(0..4)]).unwrap();
        let spec = StarProductSpec {
            x: rng.gen_range(0..g1.n()),
            y: rng.gen_range(0..g2.n()),
            g1: g1.clone(),
            g2: g2.clone(),
            pairing: [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][rng.gen_range(0..6)],
        };
        let g = star_product(&spec).unwrap();
        prop_assert_eq!(g.n(), g1.n() + g2.n() - 2);
        let k = g1.n() - 1;
        let cut: Vec<(usize, usize)> = g.edges().into_iter().filter(|&(u, v)| u < k && v >= k).collect();
        prop_assert_eq!(cut.len(), 3);
        let red = three_cut_reduction(&g, &cut).unwrap();
        let rebuilt = star_product(&red.star_spec()).unwrap();
        prop_assert_eq!(canonical_form(&rebuilt), canonical_form(&g));
        let mut sides = [canonical_form(&red.left), canonical_form(&red.right)];
        sides.sort();
        let mut orig = [canonical_form(&g1), canonical_form(&g2)];
        orig.sort();
        prop_assert_eq!(sides, orig);
    }
}

fn table_graphs() -> Vec<Graph> {
    (14..=22).step_by(2).flat_map(|n| generate_all(n, &GenOptions::default()).unwrap()).collect()
}

#[test]
fn canonical_form_ignores_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut graphs = table_graphs();
    graphs.extend(["Petersen", "Pappus", "Gray", "K33", "K4", "K5", "Heawood"].iter().map(|n| named(n).unwrap()));
    assert_eq!(graphs.len(), 50);
    for g in &graphs {
        let form = canonical_form(g);
        for _ in 0..100 {
            let p = random_permutation(g.n(), &mut rng);
            assert_eq!(canonical_form(&g.relabel(&p)), form);
        }
    }
}

#[test]
fn two_factor_type_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut graphs = table_graphs();
    for n in (6..=20).step_by(2) {
        for _ in 0..20 {
            graphs.push(random_cubic_bipartite(n, &mut rng));
        }
    }
    graphs.push(named("Gray").unwrap());
    for g in &graphs {
        let mut count = 0u64;
        enumerate_perfect_matchings(g, |m| {
            let pm = m.to_owned();
            let t = two_factor_of(g, &pm).unwrap();
            assert_eq!(t.order(), g.n());
            assert!(t.lengths().iter().all(|&l| l >= 4 && l % 2 == 0), "{t}");
            let rest: Vec<(usize, usize)> = g.edges().into_iter().filter(|e| !pm.edges().contains(e)).collect();
            assert_eq!(cycle_lengths(g.n(), &rest).unwrap(), t.lengths());
            count += 1;
            std::ops::ControlFlow::Continue(())
        });
        assert_eq!(count, brute_two_factor_count(g));
        let r = classify(g, &ClassifyOptions::default()).unwrap();
        if r.verdict_2fh == Some(true) {
            assert_eq!(g.n() % 4, 2, "2-factor Hamiltonian on {} vertices", g.n());
        }
    }
}

#[test]
fn verdict_implications_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..300 {
        let g = random_cubic_bipartite(2 * rng.gen_range(3..=12), &mut rng);
        let mode = [Mode::Exhaustive, Mode::Heuristic, Mode::Hybrid][i % 3];
        let r = classify(&g, &ClassifyOptions { mode, workers: 2, seed: i as u64, ..Default::default() }).unwrap();
        if r.verdict_2fh == Some(true) {
            assert_eq!(r.verdict_2fi, Some(true));
        }
        if r.verdict_2fi == Some(true) {
            assert_eq!(r.verdict_p2fi, Some(true));
        }
        assert_eq!(r.witness.is_some(), r.verdict_p2fi == Some(false));
        if mode == Mode::Heuristic {
            assert_ne!(r.verdict_p2fi, Some(true));
        }
        if r.status == Status::Complete && mode == Mode::Exhaustive {
            assert_eq!(r.two_factor_count, Some(r.type_multiset.values().sum()));
        }
    }
}

#[test]
fn generated_graphs_are_valid_and_distinct() {
    for n in (14..=24).step_by(2) {
        let graphs = generate_all(n, &GenOptions::default()).unwrap();
        let mut forms: Vec<Vec<u8>> = graphs.iter().map(canonical_form).collect();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), graphs.len());
        for g in &graphs {
            assert!(g.is_cubic() && g.is_connected() && bipartition(g).is_bipartite());
            assert!(girth(g).unwrap() >= 6);
        }
    }
}

#[test]
fn constituents_of_named_graphs() {
    for name in ["Gray", "Heawood", "Pappus", "K33"] {
        let g = named(name).unwrap();
        let parts = constituents(&g).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(canonical_form(&parts[0]), canonical_form(&g));
    }
}

#[test]
fn hybrid_agrees_with_exhaustive() {
    let graphs = table_graphs();
    assert_eq!(graphs.len(), 43);
    for g in &graphs {
        let ex = classify(g, &ClassifyOptions::default()).unwrap();
        for workers in [2, 4] {
            let hy = classify(g, &ClassifyOptions { mode: Mode::Hybrid, workers, seed: 3, ..Default::default() }).unwrap();
            assert_ne!(hy.status, Status::NotRefutedWithinBudget);
            assert_eq!(hy.verdict_p2fi, ex.verdict_p2fi);
            if let Some(w) = &hy.witness {
                assert!(w.verify(g));
            }
        }
    }
}
