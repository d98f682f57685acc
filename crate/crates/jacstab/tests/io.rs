use jacstab::io::{
    self, parse_assignment, parse_graph, parse_polarization, serialize_assignment, serialize_graph,
    serialize_polarization, CategoryDocument, GraphDocument,
};
use jacstab_core::assignment::vine_assignment;
use jacstab_core::polarization::{ibd_assignment, Rational};
use jacstab_core::universal::enumerate_stable_graphs;
use jacstab_core::{Graph, Polarization};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (1usize..5, proptest::collection::vec((0usize..5, 0usize..5), 0..7), proptest::collection::vec(0u32..3, 5), 0usize..3)
        .prop_map(|(n, edges, genera, legs)| {
            let mut b = Graph::builder();
            for v in 0..n {
                b = b.vertex(format!("v{v}"), genera[v]);
            }
            for (i, (x, y)) in edges.into_iter().enumerate() {
                b = b.edge(format!("e{i}"), format!("v{}", x % n), format!("v{}", y % n));
            }
            for l in 0..legs {
                b = b.leg(format!("p{l}"), format!("v{}", l % n), l as u32 + 1);
            }
            b.build().unwrap()
        })
}

proptest! {
    #[test]
    fn graph_round_trip(g in graph_strategy()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn order_of_lists_does_not_matter(g in graph_strategy(), rot in 0usize..7) {
        let mut doc = GraphDocument::from_graph(&g);
        let k = rot % doc.vertices.len();
        doc.vertices.rotate_left(k);
        doc.edges.reverse();
        for e in &mut doc.edges {
            e.ends.reverse();
        }
        let back = doc.to_graph().unwrap();
        prop_assert_eq!(serialize_graph(&back), serialize_graph(&g));
    }

    #[test]
    fn polarization_round_trip(nums in proptest::collection::vec((-20i64..20, 1i64..9), 1..5)) {
        let n = nums.len();
        let g = jacstab_core::graph::families::path(n, 0);
        let phi = Polarization::new(nums.iter().map(|&(p, q)| Rational::new(p, q)).collect());
        let text = serialize_polarization(&g, &phi);
        prop_assert_eq!(parse_polarization(&text, &g).unwrap(), phi);
    }
}

#[test]
fn assignment_round_trip() {
    for a in [vine_assignment(3, 1, 2), ibd_assignment(&jacstab_core::graph::families::complete(4)).unwrap()] {
        let text = serialize_assignment(&a);
        let parsed = parse_assignment(&text).unwrap();
        assert!(parsed.repeated.is_empty());
        assert_eq!(parsed.assignment, a);
        assert_eq!(serialize_assignment(&parsed.assignment), text);
    }
}

#[test]
fn assignment_errors_are_located() {
    let a = vine_assignment(2, 0, 0);
    let mut doc = io::AssignmentDocument::from_assignment(&a);
    doc.entries[1].kept.push("nope".into());
    let err = doc.to_assignment().unwrap_err();
    assert!(err.path.starts_with("entries[1].kept"), "{err}");

    let mut doc = io::AssignmentDocument::from_assignment(&a);
    doc.entries[0].multidegree.insert("v1".into(), 7);
    let err = doc.to_assignment().unwrap_err();
    assert_eq!(err.path, "entries[0]");

    let mut doc = io::AssignmentDocument::from_assignment(&a);
    doc.graph.edges[0].ends[0] = "v9".into();
    let err = doc.to_assignment().unwrap_err();
    assert_eq!(err.path, "graph.edges[0].ends[0]");

    let err = io::parse_assignment(r#"{"version":"1","graph":{"version":"1","vertices":[],"edges":[]},"degree":"x","entries":[]}"#)
        .unwrap_err();
    assert_eq!(err.path, "degree");
}

#[test]
fn polarization_errors_are_located() {
    let g = jacstab_core::graph::families::banana(2);
    let err = parse_polarization(r#"{"version":"1","values":{"v1":"1/0","v2":"0"}}"#, &g).unwrap_err();
    assert_eq!(err.path, "values.v1");
    let err = parse_polarization(r#"{"version":"1","values":{"v1":"1"}}"#, &g).unwrap_err();
    assert!(err.message.contains("v2"));
    let err = parse_polarization(r#"{"version":"1","values":{"v1":"1","v2":"0","v3":"0"}}"#, &g).unwrap_err();
    assert_eq!(err.path, "values.v3");
}

#[test]
fn category_document_morphisms_parse_back() {
    let cat = enumerate_stable_graphs(1, 2).unwrap();
    let doc = CategoryDocument::from_category(&cat);
    assert_eq!(doc.objects.len(), cat.objects.len());
    assert_eq!(doc.morphisms.len(), cat.morphism_count());
    for m in &doc.morphisms {
        let (s, t) = (&cat.objects[m.source], &cat.objects[m.target]);
        let f = m.to_morphism(s, t).unwrap();
        assert!(cat.morphisms_between(m.source, m.target).contains(&f));
    }
}
