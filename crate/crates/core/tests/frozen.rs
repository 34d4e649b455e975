mod common;

use flexdraw::graph::Graph;
use flexdraw::model::{EdgeCost, Instance};
use flexdraw::oracle::{classes, oracle_optimal, EnumerationBudget};
use flexdraw::solve::solve_optimal;

fn linear(n: usize, edges: &[(usize, usize)]) -> Instance {
    let g = Graph::from_edges(n, edges);
    let m = g.m();
    Instance::new(g, vec![EdgeCost::Table((0..6).map(|b| b as f64).collect()); m])
}

#[test]
fn graph_counts_up_to_isomorphism() {
    let counts: Vec<usize> = (1..=6).map(|n| common::graphs_up_to_iso(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 20, 74]);
}

#[test]
fn bend_minima_of_classic_graphs() {
    let cube = linear(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]);
    let k4 = linear(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let octa = linear(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3), (5, 4), (1, 2), (2, 3), (3, 4), (4, 1)]);
    let prism = linear(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
    for (g, want) in [(&cube, 4.0), (&k4, 4.0), (&octa, 12.0), (&prism, 4.0)] {
        assert_eq!(solve_optimal(g).unwrap().cost, Some(want));
        assert_eq!(oracle_optimal(g, &EnumerationBudget::default()).unwrap(), Some(want));
    }
}

#[test]
fn representation_classes() {
    let tri = Instance::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 1);
    let sq = Instance::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 1);
    assert_eq!(classes(&tri, &EnumerationBudget::default()).unwrap(), 21);
    assert_eq!(classes(&sq, &EnumerationBudget::default()).unwrap(), 266);
}
