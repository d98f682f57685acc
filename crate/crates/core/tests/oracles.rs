//! Cross-checks of the library against small independent oracles.

use jacstab_core::assignment::{
    is_stability_assignment, lift_assignment, pushforward_compatible, verify_lift_theorem,
};
use jacstab_core::chip::Jacobian;
use jacstab_core::graph::families;
use jacstab_core::linalg::solve_rational;
use jacstab_core::polarization::{
    assignment_from_polarization, box_points, classify, enumeration_box, is_nondegenerate, random_nondegenerate,
    Rational,
};
use jacstab_core::{EdgeSet, Graph, Multidegree, Polarization, VertexSet};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..5, proptest::collection::vec((0usize..5, 0usize..5), 0..5), proptest::collection::vec(0u32..2, 5))
        .prop_map(|(n, extra, genera)| {
            let mut b = Graph::builder();
            for v in 0..n {
                b = b.vertex(format!("v{v}"), genera[v]);
            }
            // a path keeps it connected
            for v in 1..n {
                b = b.edge(format!("p{v}"), format!("v{}", v - 1), format!("v{v}"));
            }
            for (i, (x, y)) in extra.into_iter().enumerate() {
                b = b.edge(format!("x{i}"), format!("v{}", x % n), format!("v{}", y % n));
            }
            b.build().unwrap()
        })
}

/// `d1 ~ d2` iff `L x = d1 - d2` has an integer solution with `x_0 = 0`.
fn equivalent_by_solving(g: &Graph, d1: &Multidegree, d2: &Multidegree) -> bool {
    if d1.total() != d2.total() {
        return false;
    }
    let lap = jacstab_core::graph::laplacian(g, g.all_edges());
    let reduced: Vec<Vec<i64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    let rhs: Vec<i64> = (1..g.vertex_count()).map(|v| d1[v] - d2[v]).collect();
    let x = solve_rational(&reduced, &rhs).expect("connected graphs have invertible reduced Laplacian");
    x.iter().all(|q| q.is_integer())
}

/// Oda-Seshadri semistability straight from the inequality.
fn semistable_by_definition(g: &Graph, phi: &Polarization, kept: EdgeSet, d: &Multidegree) -> (bool, bool) {
    let n = g.vertex_count();
    let mut semistable = true;
    let mut stable = true;
    for bits in 1..(1u128 << n) - 1 {
        let vs = VertexSet::from_bits(bits);
        let mut lhs = Rational::zero();
        for v in vs.iter() {
            lhs += Rational::from_integer(d[v]) - phi.values[v];
        }
        let mut rhs = Rational::zero();
        for (e, edge) in g.edges().iter().enumerate() {
            let (a, b) = (vs.contains(edge.ends[0]), vs.contains(edge.ends[1]));
            let half = Rational::new(1, 2);
            match (a && b, a != b, kept.contains(e)) {
                (true, _, false) => lhs += Rational::one(),
                (_, true, false) => lhs += half,
                (_, true, true) => rhs += half,
                _ => {}
            }
        }
        let l = if lhs < Rational::zero() { -lhs } else { lhs };
        semistable &= l <= rhs;
        stable &= l < rhs;
    }
    (semistable, stable)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivalence_matches_linear_algebra(
        g in connected_graph(),
        a in proptest::collection::vec(-4i64..5, 5),
        b in proptest::collection::vec(-4i64..5, 5),
    ) {
        let n = g.vertex_count();
        let d1 = Multidegree(a[..n].to_vec());
        let mut v2 = b[..n].to_vec();
        v2[0] += d1.total() - v2.iter().sum::<i64>();
        let d2 = Multidegree(v2);
        let jac = Jacobian::new(&g, g.all_edges()).unwrap();
        let expected = equivalent_by_solving(&g, &d1, &d2);
        prop_assert_eq!(jac.equivalent(&d1, &d2), expected);
        prop_assert_eq!(jac.reduce(&d1) == jac.reduce(&d2), expected);
    }

    #[test]
    fn firing_a_vertex_stays_in_class(g in connected_graph(), v in 0usize..5, a in proptest::collection::vec(-3i64..4, 5)) {
        let n = g.vertex_count();
        let v = v % n;
        let d = Multidegree(a[..n].to_vec());
        let tw = jacstab_core::chip::twister_vector(&g.whole(), v).unwrap();
        let jac = Jacobian::new(&g, g.all_edges()).unwrap();
        prop_assert!(jac.equivalent(&d, &(&d + &tw)));
    }

    #[test]
    fn contraction_preserves_genus(g in connected_graph(), bits in 0u128..32) {
        let s = EdgeSet::from_bits(bits & g.all_edges().bits());
        let (h, f) = g.contract(s);
        prop_assert!(f.validate(&g, &h).is_ok());
        prop_assert_eq!(h.graph_genus().unwrap(), g.graph_genus().unwrap());
        prop_assert_eq!(h.edge_count(), g.edge_count() - s.len());
    }

    #[test]
    fn subdivision_counts(g in connected_graph(), m in proptest::collection::vec(0u32..3, 9)) {
        let m = &m[..g.edge_count()];
        let sub = g.subdivide(m).unwrap();
        let added: u32 = m.iter().sum();
        prop_assert_eq!(sub.result.vertex_count(), g.vertex_count() + added as usize);
        prop_assert_eq!(sub.result.edge_count(), g.edge_count() + added as usize);
        prop_assert_eq!(sub.result.graph_genus().unwrap(), g.graph_genus().unwrap());
    }

    #[test]
    fn classify_matches_definition(g in connected_graph(), seed in 0u64..1000, bits in 0u128..512) {
        let d = (seed % 5) as i64 - 2;
        let phi = random_nondegenerate(&g, d, seed, 200).unwrap();
        let kept = EdgeSet::from_bits(bits & g.all_edges().bits());
        let total = d - (g.edge_count() - kept.len()) as i64;
        for x in box_points(&enumeration_box(&g, &phi, 1), total) {
            let verdict = classify(&g, &phi, kept, &x).unwrap();
            let (semi, stable) = semistable_by_definition(&g, &phi, kept, &x);
            prop_assert_eq!(verdict.is_semistable(), semi);
            prop_assert_eq!(verdict == jacstab_core::StabilityVerdict::Stable, stable);
        }
    }

    #[test]
    fn polarization_assignments_lift(g in connected_graph(), seed in 0u64..1000, m in proptest::collection::vec(0u32..3, 9)) {
        let phi = random_nondegenerate(&g, 1, seed, 200).unwrap();
        let a = assignment_from_polarization(&g, &phi).unwrap();
        prop_assert!(is_stability_assignment(&a));
        let sub = g.subdivide(&m[..g.edge_count()]).unwrap();
        prop_assert!(verify_lift_theorem(&a, &sub).passed());
        prop_assert_eq!(lift_assignment(&a, &sub).len() as u64, sub.result.whole().complexity());
    }

    #[test]
    fn contraction_of_polarization_assignments(g in connected_graph(), seed in 0u64..1000, bits in 0u128..512) {
        let phi = random_nondegenerate(&g, 0, seed, 200).unwrap();
        let s = EdgeSet::from_bits(bits & g.all_edges().bits());
        let (h, f) = g.contract(s);
        let mut pushed = vec![Rational::zero(); h.vertex_count()];
        for (v, &w) in f.vertex_map.iter().enumerate() {
            pushed[w] += phi.values[v];
        }
        let psi = Polarization::new(pushed);
        prop_assume!(is_nondegenerate(&h, &psi).unwrap());
        let src = assignment_from_polarization(&g, &phi).unwrap();
        let tgt = assignment_from_polarization(&h, &psi).unwrap();
        prop_assert!(pushforward_compatible(&src, &tgt, &f).unwrap().passed());
    }
}

#[test]
fn kirchhoff_on_named_graphs() {
    let cases = [
        (families::theta(), 3),
        (families::complete(4), 16),
        (families::cycle(5), 5),
        (families::dumbbell(), 1),
        (families::banana(5), 5),
        (families::complete(5), 125),
    ];
    for (g, c) in cases {
        let whole = g.whole();
        assert_eq!(whole.complexity(), c);
        assert_eq!(whole.complexity_by_enumeration(), c);
        assert_eq!(Jacobian::new(&g, g.all_edges()).unwrap().order(), c);
    }
}

#[test]
fn disconnected_subgraphs_have_no_trees() {
    let g = families::banana(2);
    assert_eq!(g.spanning(EdgeSet::empty()).complexity(), 0);
    assert_eq!(g.spanning(EdgeSet::empty()).complexity_by_enumeration(), 0);
}
