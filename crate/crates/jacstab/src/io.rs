//! JSON documents for graphs, assignments, polarizations and stable-graph
//! categories.
//!
//! Every document carries `"version": "1"`. Serialization is canonical:
//! vertices, edges and legs are sorted by id, edge ends are sorted, and
//! rationals are written as `"p/q"` in lowest terms (`"p"` for integers).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use jacstab_core::polarization::Rational;
use jacstab_core::universal::StableGraphCategory;
use jacstab_core::{EdgeSet, Error as CoreError, Graph, GraphMorphism, Multidegree, Polarization, StabilityAssignment};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "1";

/// A parse or validation failure, located by a JSON path such as
/// `edges[2].ends[1]` (`.` is the document root).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl DocError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }

    fn nested(self, prefix: &str) -> Self {
        let path = if self.path == "." {
            prefix.to_string()
        } else if self.path.starts_with('[') {
            format!("{prefix}{}", self.path)
        } else {
            format!("{prefix}.{}", self.path)
        };
        Self { path, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegDoc {
    pub id: String,
    pub vertex: String,
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub legs: Vec<LegDoc>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        let vid = |i: usize| g.vertices()[i].id.clone();
        let mut doc = Self {
            version: VERSION.into(),
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.clone(),
                    genus: v.genus,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    ends: [vid(e.ends[0]), vid(e.ends[1])],
                })
                .collect(),
            legs: g
                .legs()
                .iter()
                .map(|l| LegDoc {
                    id: l.id.clone(),
                    vertex: vid(l.vertex),
                    label: l.label,
                })
                .collect(),
        };
        doc.canonicalize();
        doc
    }

    /// Sorts everything into the canonical order used for serialization.
    pub fn canonicalize(&mut self) {
        self.vertices.sort_by(|a, b| a.id.cmp(&b.id));
        self.edges.sort_by(|a, b| a.id.cmp(&b.id));
        for e in &mut self.edges {
            e.ends.sort();
        }
        self.legs.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn to_graph(&self) -> Result<Graph, DocError> {
        check_version(&self.version)?;
        let mut b = Graph::builder();
        for v in &self.vertices {
            b = b.vertex(v.id.clone(), v.genus);
        }
        for e in &self.edges {
            b = b.edge(e.id.clone(), e.ends[0].clone(), e.ends[1].clone());
        }
        for l in &self.legs {
            b = b.leg(l.id.clone(), l.vertex.clone(), l.label);
        }
        b.build().map_err(|err| self.locate(err))
    }

    fn locate(&self, err: CoreError) -> DocError {
        let last = |ids: Vec<&String>, id: &str| ids.iter().rposition(|x| *x == id);
        let path = match &err {
            CoreError::DuplicateVertex(id) => last(self.vertices.iter().map(|v| &v.id).collect(), id)
                .map(|i| format!("vertices[{i}].id")),
            CoreError::DuplicateEdge(id) => {
                last(self.edges.iter().map(|e| &e.id).collect(), id).map(|i| format!("edges[{i}].id"))
            }
            CoreError::DuplicateLeg(id) => {
                last(self.legs.iter().map(|l| &l.id).collect(), id).map(|i| format!("legs[{i}].id"))
            }
            CoreError::DanglingEdge { edge, vertex } => self.edges.iter().position(|e| &e.id == edge).map(|i| {
                let j = usize::from(self.edges[i].ends[0] != *vertex);
                format!("edges[{i}].ends[{j}]")
            }),
            CoreError::DanglingLeg { leg, .. } => {
                self.legs.iter().position(|l| &l.id == leg).map(|i| format!("legs[{i}].vertex"))
            }
            CoreError::BadLegLabels(_) => Some("legs".into()),
            _ => None,
        };
        DocError::new(path.unwrap_or_else(|| ".".into()), err)
    }
}

fn check_version(v: &str) -> Result<(), DocError> {
    if v == VERSION {
        Ok(())
    } else {
        Err(DocError::new("version", format!("unsupported version `{v}`, expected `{VERSION}`")))
    }
}

/// Deserializes `text`, reporting structural errors with their JSON path.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, DocError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        DocError::new(path, e.into_inner())
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn read_file(path: &Path) -> Result<String, DocError> {
    std::fs::read_to_string(path).map_err(|e| DocError::new(".", format!("{}: {e}", path.display())))
}

pub fn parse_graph(text: &str) -> Result<Graph, DocError> {
    from_json::<GraphDocument>(text)?.to_graph()
}

pub fn serialize_graph(g: &Graph) -> String {
    to_json(&GraphDocument::from_graph(g))
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
    let q: i64 = q.parse().map_err(|_| format!("bad denominator in `{s}`"))?;
    if q == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(p, q))
}

fn kept_ids(g: &Graph, kept: EdgeSet) -> Vec<String> {
    kept.iter().map(|e| g.edges()[e].id.clone()).collect()
}

fn degree_map(g: &Graph, d: &Multidegree) -> BTreeMap<String, i64> {
    g.vertices().iter().map(|v| v.id.clone()).zip(d.values().iter().copied()).collect()
}

fn vertex_values<T: Clone>(g: &Graph, map: &BTreeMap<String, T>) -> Result<Vec<T>, DocError> {
    for id in map.keys() {
        if g.vertex_index(id).is_none() {
            return Err(DocError::new(id.as_str(), format!("unknown vertex `{id}`")));
        }
    }
    g.vertices()
        .iter()
        .map(|v| {
            map.get(&v.id)
                .cloned()
                .ok_or_else(|| DocError::new(".", format!("missing value for vertex `{}`", v.id)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub kept: Vec<String>,
    pub multidegree: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDocument {
    pub version: String,
    pub graph: GraphDocument,
    pub degree: i64,
    pub entries: Vec<EntryDoc>,
}

/// A parsed assignment together with entries that were listed more than
/// once in the document (the set keeps only one copy).
#[derive(Debug, Clone)]
pub struct ParsedAssignment {
    pub assignment: StabilityAssignment,
    pub repeated: Vec<(EdgeSet, Multidegree)>,
}

impl AssignmentDocument {
    pub fn from_assignment(a: &StabilityAssignment) -> Self {
        let g = &a.graph;
        Self {
            version: VERSION.into(),
            graph: GraphDocument::from_graph(g),
            degree: a.degree,
            entries: a
                .iter()
                .map(|(kept, d)| EntryDoc {
                    kept: kept_ids(g, kept),
                    multidegree: degree_map(g, d),
                })
                .collect(),
        }
    }

    pub fn to_assignment(&self) -> Result<ParsedAssignment, DocError> {
        check_version(&self.version)?;
        let g = self.graph.to_graph().map_err(|e| e.nested("graph"))?;
        let mut a = StabilityAssignment::new(g.clone(), self.degree);
        let mut repeated = Vec::new();
        for (i, entry) in self.entries.iter().enumerate() {
            let at = |sub: &str| format!("entries[{i}].{sub}");
            let mut kept = EdgeSet::empty();
            for (j, id) in entry.kept.iter().enumerate() {
                let e = g
                    .edge_index(id)
                    .ok_or_else(|| DocError::new(at(&format!("kept[{j}]")), format!("unknown edge `{id}`")))?;
                kept.insert(e);
            }
            let values = vertex_values(&g, &entry.multidegree).map_err(|e| e.nested(&at("multidegree")))?;
            let d = Multidegree(values);
            if !a.insert(kept, d.clone()).map_err(|e| DocError::new(format!("entries[{i}]"), e))? {
                repeated.push((kept, d));
            }
        }
        Ok(ParsedAssignment { assignment: a, repeated })
    }
}

pub fn parse_assignment(text: &str) -> Result<ParsedAssignment, DocError> {
    from_json::<AssignmentDocument>(text)?.to_assignment()
}

pub fn serialize_assignment(a: &StabilityAssignment) -> String {
    to_json(&AssignmentDocument::from_assignment(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationDocument {
    pub version: String,
    pub values: BTreeMap<String, String>,
}

impl PolarizationDocument {
    pub fn from_polarization(g: &Graph, phi: &Polarization) -> Self {
        Self {
            version: VERSION.into(),
            values: g
                .vertices()
                .iter()
                .map(|v| v.id.clone())
                .zip(phi.values.iter().map(format_rational))
                .collect(),
        }
    }

    /// Values are matched to the vertices of `g` by id.
    pub fn to_polarization(&self, g: &Graph) -> Result<Polarization, DocError> {
        check_version(&self.version)?;
        let mut parsed = BTreeMap::new();
        for (id, s) in &self.values {
            let x = parse_rational(s).map_err(|m| DocError::new(format!("values.{id}"), m))?;
            parsed.insert(id.clone(), x);
        }
        let values = vertex_values(g, &parsed).map_err(|e| e.nested("values"))?;
        Ok(Polarization::new(values))
    }
}

pub fn parse_polarization(text: &str, g: &Graph) -> Result<Polarization, DocError> {
    from_json::<PolarizationDocument>(text)?.to_polarization(g)
}

pub fn serialize_polarization(g: &Graph, phi: &Polarization) -> String {
    to_json(&PolarizationDocument::from_polarization(g, phi))
}

/// A morphism between two graphs, written with ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: usize,
    pub target: usize,
    pub vertex_map: BTreeMap<String, String>,
    pub contracted_edges: Vec<String>,
    pub edge_map: BTreeMap<String, String>,
    #[serde(default)]
    pub leg_map: BTreeMap<String, String>,
}

impl MorphismDoc {
    pub fn from_morphism(source: (usize, &Graph), target: (usize, &Graph), f: &GraphMorphism) -> Self {
        let (s, t) = (source.1, target.1);
        Self {
            source: source.0,
            target: target.0,
            vertex_map: s
                .vertices()
                .iter()
                .zip(&f.vertex_map)
                .map(|(v, &w)| (v.id.clone(), t.vertices()[w].id.clone()))
                .collect(),
            contracted_edges: kept_ids(s, f.contracted),
            edge_map: s
                .edges()
                .iter()
                .zip(&f.edge_map)
                .filter_map(|(e, img)| img.map(|j| (e.id.clone(), t.edges()[j].id.clone())))
                .collect(),
            leg_map: s
                .legs()
                .iter()
                .zip(&f.leg_map)
                .map(|(l, &j)| (l.id.clone(), t.legs()[j].id.clone()))
                .collect(),
        }
    }

    pub fn to_morphism(&self, s: &Graph, t: &Graph) -> Result<GraphMorphism, DocError> {
        let vertex = |g: &Graph, id: &str, path: String| {
            g.vertex_index(id)
                .ok_or_else(|| DocError::new(path, format!("unknown vertex `{id}`")))
        };
        let edge = |g: &Graph, id: &str, path: String| {
            g.edge_index(id).ok_or_else(|| DocError::new(path, format!("unknown edge `{id}`")))
        };
        let leg = |g: &Graph, id: &str, path: String| {
            g.legs()
                .iter()
                .position(|l| l.id == id)
                .ok_or_else(|| DocError::new(path, format!("unknown leg `{id}`")))
        };
        let mut vertex_map = vec![usize::MAX; s.vertex_count()];
        for (a, b) in &self.vertex_map {
            vertex_map[vertex(s, a, format!("vertex_map.{a}"))?] = vertex(t, b, format!("vertex_map.{a}"))?;
        }
        if let Some(i) = vertex_map.iter().position(|&w| w == usize::MAX) {
            return Err(DocError::new("vertex_map", format!("vertex `{}` is not mapped", s.vertices()[i].id)));
        }
        let mut contracted = EdgeSet::empty();
        for (j, id) in self.contracted_edges.iter().enumerate() {
            contracted.insert(edge(s, id, format!("contracted_edges[{j}]"))?);
        }
        let mut edge_map = vec![None; s.edge_count()];
        for (a, b) in &self.edge_map {
            edge_map[edge(s, a, format!("edge_map.{a}"))?] = Some(edge(t, b, format!("edge_map.{a}"))?);
        }
        let mut leg_map = vec![usize::MAX; s.legs().len()];
        for (a, b) in &self.leg_map {
            leg_map[leg(s, a, format!("leg_map.{a}"))?] = leg(t, b, format!("leg_map.{a}"))?;
        }
        let f = GraphMorphism {
            vertex_map,
            contracted,
            edge_map,
            leg_map,
        };
        f.validate(s, t).map_err(|e| DocError::new(".", e))?;
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDocument {
    pub version: String,
    pub genus: u32,
    pub markings: u32,
    pub objects: Vec<GraphDocument>,
    pub morphisms: Vec<MorphismDoc>,
}

impl CategoryDocument {
    pub fn from_category(cat: &StableGraphCategory) -> Self {
        let mut morphisms = Vec::new();
        for (&(i, j), fs) in &cat.morphisms {
            for f in fs {
                morphisms.push(MorphismDoc::from_morphism((i, &cat.objects[i]), (j, &cat.objects[j]), f));
            }
        }
        Self {
            version: VERSION.into(),
            genus: cat.genus,
            markings: cat.markings,
            objects: cat.objects.iter().map(GraphDocument::from_graph).collect(),
            morphisms,
        }
    }
}

/// Per-object assignments of one universal search result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalDocument {
    pub degree: i64,
    pub per_object: Vec<Vec<EntryDoc>>,
}

impl UniversalDocument {
    pub fn new(degree: i64, per_object: &[StabilityAssignment]) -> Self {
        Self {
            degree,
            per_object: per_object
                .iter()
                .map(|a| AssignmentDocument::from_assignment(a).entries)
                .collect(),
        }
    }
}
