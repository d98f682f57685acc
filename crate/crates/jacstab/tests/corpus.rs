//! The checked-in corpus matches the generators. Run with
//! `JACSTAB_BLESS=1` to rewrite it.

use jacstab::corpus::{self, Corpus};

#[test]
fn fixtures_are_current() {
    let root = corpus::default_dir();
    if std::env::var_os("JACSTAB_BLESS").is_some() {
        corpus::write(&root).unwrap();
    }
    for (rel, text) in corpus::generate() {
        let on_disk = std::fs::read_to_string(root.join(&rel)).unwrap_or_default();
        assert!(on_disk == text, "{rel} is stale; rerun with JACSTAB_BLESS=1");
    }
}

#[test]
fn corpus_loads() {
    let c = Corpus::load_default().unwrap();
    assert_eq!(c.graphs.len(), 18);
    let theta = c.graph("theta").unwrap();
    assert_eq!((theta.vertex_count(), theta.edge_count()), (2, 3));
    let m20: Vec<_> = c.graphs.iter().filter(|(n, _)| n.starts_with("m20_")).collect();
    assert_eq!(m20.len(), 7);
    for (_, g) in &c.graphs {
        assert!(g.is_connected());
    }
    let repeated = c.assignments.iter().find(|(e, _)| e.name == "vine2_d0_l0_repeated").unwrap();
    assert_eq!(repeated.1.repeated.len(), 1);
}

#[test]
fn missing_corpus_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = Corpus::load(dir.path()).unwrap_err();
    assert_eq!(err.path, "manifest.json");
}
