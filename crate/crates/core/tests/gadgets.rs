use flexdraw::gadgets::*;
use flexdraw::model::{EdgeCost, Instance};
use flexdraw::oracle::{for_each_rep, for_each_rep_of_embedding, oracle_feasible, EnumerationBudget, PoleFilter};
use flexdraw::ortho::OrthoRep;
use flexdraw::solve::{solve_flexdraw_fpt, solve_st, SolveOptions};
use std::collections::BTreeSet;
use std::ops::ControlFlow;

fn outer_vertices(r: &OrthoRep) -> BTreeSet<usize> {
    r.faces.cycles[r.faces.outer].iter().map(|&d| r.graph.tail(d)).collect()
}

fn gadget_bends(r: &OrthoRep, s: usize, t: usize, edges: &[usize]) -> Option<i32> {
    let (sub, orig) = r.restrict_to(edges);
    let ls = orig.iter().position(|&v| v == s)?;
    let lt = orig.iter().position(|&v| v == t)?;
    sub.bends_st(ls, lt).map(|b| b.0)
}

#[test]
fn w4_rim_outer_face_is_rectangle() {
    let w = wheel_w4();
    let mut seen = 0;
    for_each_rep(&w.instance, &EnumerationBudget::default(), &PoleFilter::default(), &mut |r, _| {
        if !outer_vertices(r).contains(&4) {
            assert!(outer_is_rectangle(r, &w.attach));
            seen += 1;
        }
        ControlFlow::Continue(())
    })
    .unwrap();
    assert!(seen > 0);
}

#[test]
fn b12_bend_set_by_oracle() {
    let b = bend_gadget_b12();
    let (s, t) = b.poles.unwrap();
    let mut set = BTreeSet::new();
    let f = PoleFilter { poles: Some((s, t)), occupancy: None };
    for_each_rep(&b.instance, &EnumerationBudget::default(), &f, &mut |r, _| {
        if !outer_vertices(r).contains(&4) {
            set.insert(r.bends_st(s, t).unwrap().0);
        }
        ControlFlow::Continue(())
    })
    .unwrap();
    assert_eq!(set, BTreeSet::from([1, 2]));
}

#[test]
fn b12_closed_by_solver() {
    let b = bend_gadget_b12();
    let (s, t) = b.poles.unwrap();
    let sol = solve_flexdraw_fpt(&b.instance).unwrap();
    assert!(sol.is_feasible());
    // Closing the poles with a generously flexible edge exposes the gadget as an st-graph.
    let mut closed = b.instance.clone();
    let gadget: Vec<usize> = (0..closed.m()).collect();
    closed.add_edge(s, t, EdgeCost::Flex(6));
    let st = solve_st(&closed, s, t, &SolveOptions::default()).unwrap();
    let p = st.profile().clone();
    let mut set = BTreeSet::new();
    for (sigma, tau) in p.pairs() {
        for pc in p.pieces(sigma, tau) {
            for r in pc.lo..=pc.hi {
                let w = st.witness(sigma, tau, r).unwrap();
                assert!(w.is_valid());
                set.insert(gadget_bends(&w, s, t, &gadget).unwrap());
            }
        }
    }
    assert_eq!(set, BTreeSet::from([1, 2]));
}

#[test]
fn w3_prime_bend_distribution() {
    let w3 = w3_prime();
    assert!(solve_flexdraw_fpt(&w3.instance).unwrap().is_feasible());
    let Property::OneTwoTwo(gadgets) = &w3.properties[0] else { panic!() };
    let emb = w3_prime_embedding(&w3).unwrap();
    let budget = EnumerationBudget { max_reps: 5_000_000, ..Default::default() };
    let mut count = 0u64;
    for_each_rep_of_embedding(&w3.instance, &budget, &emb, &PoleFilter::default(), &mut |r, _| {
        let mut bs: Vec<i32> = gadgets.iter().map(|(s, t, es)| gadget_bends(r, *s, *t, es).unwrap()).collect();
        bs.sort_unstable();
        assert_eq!(bs, vec![1, 1, 2]);
        count += 1;
        ControlFlow::Continue(())
    })
    .unwrap();
    assert!(count > 0);
}

fn octahedron(flex: u32) -> Instance {
    let e = [(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3), (5, 4), (1, 2), (2, 3), (3, 4), (4, 1)];
    Instance::from_edges(6, &e, flex)
}

#[test]
fn deg4_expansion_preserves_feasibility() {
    for flex in [2, 3] {
        let base = octahedron(flex);
        let want = oracle_feasible(&base, &EnumerationBudget::default()).unwrap();
        let x = expand_deg4(&base, 0).unwrap();
        assert_eq!(solve_flexdraw_fpt(&x).unwrap().is_feasible(), want, "flex {flex}");
    }
}

#[test]
fn deg3_expansion_preserves_feasibility() {
    let k4 = |f| Instance::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], f);
    for flex in [1, 2] {
        let base = k4(flex);
        let want = oracle_feasible(&base, &EnumerationBudget::default()).unwrap();
        let x = expand_deg3(&base, 0).unwrap();
        assert_eq!(solve_flexdraw_fpt(&x).unwrap().is_feasible(), want, "flex {flex}");
    }
}

#[test]
fn reduce_flex_preserves_feasibility() {
    let tri = |f| Instance::from_edges(3, &[(0, 1), (1, 2), (2, 0)], f);
    let mut cases = vec![tri(0), tri(1), tri(3), octahedron(2), octahedron(3)];
    let mut mixed = tri(0);
    mixed.costs[0] = EdgeCost::Flex(3);
    cases.push(mixed);
    for inst in cases {
        let want = oracle_feasible(&inst, &EnumerationBudget::default()).unwrap();
        let r = reduce_flex(&inst).unwrap();
        assert!(r.costs.iter().all(|c| c.flex().unwrap() <= 1));
        assert_eq!(solve_flexdraw_fpt(&r).unwrap().is_feasible(), want);
    }
}

#[test]
fn amplify_spreads_inflexible_edges() {
    let mut inst = octahedron(2);
    inst.costs[0] = EdgeCost::Flex(0);
    inst.costs[7] = EdgeCost::Flex(0);
    let d0 = inflexible_distance(&inst).unwrap();
    let a = amplify(&inst, 2).unwrap();
    assert_eq!(a.costs.iter().filter(|c| c.is_inflexible()).count(), 2);
    assert!(inflexible_distance(&a).unwrap() >= d0 + 4);
}
