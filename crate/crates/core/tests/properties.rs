mod common;

use flexdraw::graph::Graph;
use flexdraw::io::{instance_to_json, parse_instance};
use flexdraw::model::{EdgeCost, Instance};
use flexdraw::oracle::{for_each_rep_of_embedding, oracle_feasible, oracle_optimal, EnumerationBudget, PoleFilter};
use flexdraw::planar::planar_embedding;
use flexdraw::solve::{solve_fixed_embedding, solve_flexdraw_fpt, solve_optimal};
use proptest::prelude::*;
use std::ops::ControlFlow;

fn small_flex() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 2usize..=6, 0usize..=5).prop_map(|(seed, n, extra)| {
        let mut r = common::rng(seed);
        let edges = common::random_graph(&mut r, n, extra);
        let flex: Vec<u32> = (0..edges.len()).map(|i| ((seed >> (2 * (i % 30))) % 3) as u32).collect();
        Instance::new(Graph::from_edges(n, &edges), flex.into_iter().map(EdgeCost::Flex).collect())
    })
}

fn small_tables() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 2usize..=6, 0usize..=4).prop_map(|(seed, n, extra)| {
        let mut r = common::rng(seed);
        let edges = common::random_graph(&mut r, n, extra);
        common::with_tables(&mut r, n, &edges)
    })
}

fn relabel(inst: &Instance, shift: usize) -> Instance {
    let n = inst.n();
    let p = |v: usize| (v + shift) % n;
    let mut g = Graph::new(n);
    for e in (0..inst.m()).rev() {
        let (a, b) = inst.graph.endpoints(e);
        g.add_edge(p(b), p(a));
    }
    Instance::new(g, inst.costs.iter().rev().cloned().collect())
}

/// The same table with its increments sorted, which makes it convex.
fn convex(c: &EdgeCost) -> EdgeCost {
    let EdgeCost::Table(t) = c else { return c.clone() };
    let mut inc: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    inc.sort_by(f64::total_cmp);
    let mut out = vec![t[0]];
    for d in inc {
        out.push(out.last().unwrap() + d);
    }
    EdgeCost::Table(out)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn feasibility_matches_oracle(inst in small_flex()) {
        let want = oracle_feasible(&inst, &EnumerationBudget::default()).unwrap();
        let sol = solve_flexdraw_fpt(&inst).unwrap();
        prop_assert_eq!(sol.is_feasible(), want);
        if let Some(w) = &sol.witness {
            prop_assert!(w.is_valid());
            prop_assert!(w.validate_costs(&inst.costs).is_empty());
        }
    }

    #[test]
    fn optimum_matches_oracle_and_ignores_labels(inst in small_tables(), shift in 0usize..6) {
        let want = oracle_optimal(&inst, &EnumerationBudget::default()).unwrap();
        let got = solve_optimal(&inst).unwrap().cost;
        prop_assert_eq!(got, want);
        prop_assert_eq!(solve_optimal(&relabel(&inst, shift)).unwrap().cost, got);
    }

    #[test]
    fn fixed_embedding_is_the_per_embedding_minimum(inst in small_tables()) {
        let mut inst = inst;
        for c in &mut inst.costs {
            *c = convex(c);
        }
        let emb = planar_embedding(&inst.graph).unwrap();
        let mut best = f64::INFINITY;
        for_each_rep_of_embedding(&inst, &EnumerationBudget::default(), &emb, &PoleFilter::default(), &mut |_, c| {
            best = best.min(c);
            ControlFlow::Continue(())
        }).unwrap();
        let sol = solve_fixed_embedding(&inst, &emb).unwrap();
        prop_assert_eq!(sol.cost, best.is_finite().then_some(best));
    }

    #[test]
    fn instance_files_round_trip(inst in small_tables(), poles in any::<bool>()) {
        let mut inst = inst;
        if poles {
            inst.poles = Some((0, 1));
            inst.embedding = planar_embedding(&inst.graph);
        }
        let json = instance_to_json(&inst);
        prop_assert_eq!(parse_instance(&json).unwrap(), inst);
    }
}
