//! The fixture corpus shipped in `crates/jacstab/corpus`.
//!
//! The directory is described by `manifest.json`. [`generate`] rebuilds every
//! file from the graph families; a test keeps the checked-in copy in sync.

use std::path::{Path, PathBuf};

use jacstab_core::assignment::vine_assignment;
use jacstab_core::graph::families;
use jacstab_core::polarization::{ibd_polarization, Rational};
use jacstab_core::universal::{enumerate_stable_objects, gsym};
use jacstab_core::{Graph, Polarization};
use serde::{Deserialize, Serialize};

use crate::io::{self, DocError, ParsedAssignment, VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub graphs: Vec<GraphEntry>,
    pub assignments: Vec<AssignmentEntry>,
    pub polarizations: Vec<PolarizationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEntry {
    pub name: String,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentEntry {
    pub name: String,
    pub file: String,
    /// Whether `check` should pass on it.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationEntry {
    pub name: String,
    pub graph: String,
    pub file: String,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub root: PathBuf,
    pub graphs: Vec<(String, Graph)>,
    pub assignments: Vec<(AssignmentEntry, ParsedAssignment)>,
    pub polarizations: Vec<(PolarizationEntry, Polarization)>,
    /// Every file read, as `(relative path, contents)` in reading order.
    pub sources: Vec<(String, String)>,
}

fn in_file(rel: &str) -> impl Fn(DocError) -> DocError + '_ {
    move |e| DocError::new(format!("{rel}: {}", e.path), e.message)
}

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

impl Corpus {
    pub fn load(root: &Path) -> Result<Self, DocError> {
        let sources = std::cell::RefCell::new(Vec::new());
        let read = |rel: &str| {
            let text = io::read_file(&root.join(rel)).map_err(|e| DocError::new(rel, e.message))?;
            sources.borrow_mut().push((rel.to_string(), text.clone()));
            Ok::<_, DocError>(text)
        };
        let manifest: Manifest = io::from_json(&read("manifest.json")?).map_err(in_file("manifest.json"))?;
        if manifest.version != VERSION {
            return Err(DocError::new("manifest.json: version", "unsupported manifest version"));
        }
        let mut graphs = Vec::new();
        for g in &manifest.graphs {
            graphs.push((g.name.clone(), io::parse_graph(&read(&g.file)?).map_err(in_file(&g.file))?));
        }
        let mut assignments = Vec::new();
        for a in &manifest.assignments {
            assignments.push((a.clone(), io::parse_assignment(&read(&a.file)?).map_err(in_file(&a.file))?));
        }
        let mut polarizations = Vec::new();
        for p in &manifest.polarizations {
            let g = graphs
                .iter()
                .find(|(n, _)| *n == p.graph)
                .map(|(_, g)| g)
                .ok_or_else(|| DocError::new("manifest.json", format!("unknown graph `{}`", p.graph)))?;
            let phi = io::parse_polarization(&read(&p.file)?, g).map_err(in_file(&p.file))?;
            polarizations.push((p.clone(), phi));
        }
        Ok(Self {
            root: root.to_path_buf(),
            graphs,
            assignments,
            polarizations,
            sources: sources.into_inner(),
        })
    }

    pub fn load_default() -> Result<Self, DocError> {
        Self::load(&default_dir())
    }

    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }
}

/// Named graphs of the corpus, in manifest order.
pub fn corpus_graphs() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = vec![("theta".into(), families::theta())];
    for t in 1..=5 {
        out.push((format!("banana{t}"), families::banana(t)));
    }
    out.push(("dumbbell".into(), families::dumbbell()));
    out.push(("k4".into(), families::complete(4)));
    out.push(("path3".into(), families::path(3, 0)));
    out.push(("gsym2".into(), gsym(2).expect("genus 2").0));
    out.push(("gsym3".into(), gsym(3).expect("genus 3").0));
    let objects = enumerate_stable_objects(2, 0).expect("genus 2 stable graphs");
    for (i, o) in objects.into_iter().enumerate() {
        out.push((format!("m20_{}", i + 1), o));
    }
    out
}

/// Every corpus file as `(relative path, contents)`, manifest last.
pub fn generate() -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut manifest = Manifest {
        version: VERSION.into(),
        graphs: Vec::new(),
        assignments: Vec::new(),
        polarizations: Vec::new(),
    };
    let graphs = corpus_graphs();
    for (name, g) in &graphs {
        let file = format!("graphs/{name}.json");
        files.push((file.clone(), io::serialize_graph(g)));
        manifest.graphs.push(GraphEntry { name: name.clone(), file });
    }

    let vine = vine_assignment(2, 0, 0);
    let text = io::serialize_assignment(&vine);
    files.push(("assignments/vine2_d0_l0.json".into(), text));
    manifest.assignments.push(AssignmentEntry {
        name: "vine2_d0_l0".into(),
        file: "assignments/vine2_d0_l0.json".into(),
        valid: true,
    });
    let mut doc = io::AssignmentDocument::from_assignment(&vine);
    let last = doc.entries.last().cloned().expect("non-empty");
    doc.entries.push(last);
    files.push(("assignments/vine2_d0_l0_repeated.json".into(), io::to_json(&doc)));
    manifest.assignments.push(AssignmentEntry {
        name: "vine2_d0_l0_repeated".into(),
        file: "assignments/vine2_d0_l0_repeated.json".into(),
        valid: false,
    });
    let vine3 = vine_assignment(3, 1, -1);
    files.push(("assignments/vine3_d1_lm1.json".into(), io::serialize_assignment(&vine3)));
    manifest.assignments.push(AssignmentEntry {
        name: "vine3_d1_lm1".into(),
        file: "assignments/vine3_d1_lm1.json".into(),
        valid: true,
    });

    let find = |n: &str| &graphs.iter().find(|(m, _)| m == n).expect("corpus graph").1;
    let half = Rational::new(1, 2);
    let phis: Vec<(&str, &str, Polarization, bool)> = vec![
        ("banana2_half", "banana2", Polarization::new(vec![half, -half]), true),
        ("banana2_zero", "banana2", Polarization::from_integers(&[0, 0]), false),
        ("theta_ibd", "theta", ibd_polarization(find("theta")).expect("ibd"), true),
        ("k4_ibd", "k4", ibd_polarization(find("k4")).expect("ibd"), true),
    ];
    for (name, graph, phi, nondegenerate) in phis {
        let file = format!("polarizations/{name}.json");
        files.push((file.clone(), io::serialize_polarization(find(graph), &phi)));
        manifest.polarizations.push(PolarizationEntry {
            name: name.into(),
            graph: graph.into(),
            file,
            nondegenerate,
        });
    }
    files.push(("manifest.json".into(), io::to_json(&manifest)));
    files
}

/// Writes the generated corpus under `root`.
pub fn write(root: &Path) -> std::io::Result<()> {
    for (rel, text) in generate() {
        let path = root.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, text)?;
    }
    Ok(())
}
