//! Genus-labelled multigraphs with loops and legs.
//!
//! Vertices, edges and legs are stored sorted by id, so an index is the
//! position of an id in lexicographic order. Everything downstream uses
//! indices and [`EdgeSet`]/[`VertexSet`] bitsets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::bitset::{all_subsets, EdgeSet, VertexSet, MAX_INDEX};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

/// An edge between two vertex indices, `ends[0] <= ends[1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leg {
    pub id: String,
    pub vertex: usize,
    pub label: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
}

/// Collects ids and validates them into a [`Graph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String, String)>,
    legs: Vec<(String, String, u32)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>, genus: u32) -> Self {
        self.vertices.push((id.into(), genus));
        self
    }

    pub fn edge(mut self, id: impl Into<String>, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.edges.push((id.into(), a.into(), b.into()));
        self
    }

    pub fn leg(mut self, id: impl Into<String>, vertex: impl Into<String>, label: u32) -> Self {
        self.legs.push((id.into(), vertex.into(), label));
        self
    }

    pub fn build(self) -> Result<Graph> {
        let mut vertices: Vec<Vertex> = self
            .vertices
            .into_iter()
            .map(|(id, genus)| Vertex { id, genus })
            .collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateVertex(w[0].id.clone()));
            }
        }
        let find = |id: &str| vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok();

        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, a, b) in self.edges {
            let mut ends = [0; 2];
            for (slot, name) in ends.iter_mut().zip([&a, &b]) {
                *slot = find(name).ok_or_else(|| Error::DanglingEdge {
                    edge: id.clone(),
                    vertex: name.clone(),
                })?;
            }
            ends.sort_unstable();
            edges.push(Edge { id, ends });
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdge(w[0].id.clone()));
            }
        }

        let mut legs = Vec::with_capacity(self.legs.len());
        for (id, v, label) in self.legs {
            let vertex = find(&v).ok_or_else(|| Error::DanglingLeg {
                leg: id.clone(),
                vertex: v.clone(),
            })?;
            legs.push(Leg { id, vertex, label });
        }
        legs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in legs.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateLeg(w[0].id.clone()));
            }
        }
        let labels: BTreeSet<u32> = legs.iter().map(|l| l.label).collect();
        let n = legs.len();
        if labels.len() != n || labels.iter().any(|&l| l == 0 || l as usize > n) {
            return Err(Error::BadLegLabels(n));
        }

        if vertices.len() > MAX_INDEX || edges.len() > MAX_INDEX {
            return Err(Error::TooLarge);
        }
        Ok(Graph {
            vertices,
            edges,
            legs,
        })
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn edge_set<'a, I: IntoIterator<Item = &'a str>>(&self, ids: I) -> Result<EdgeSet> {
        let mut s = EdgeSet::empty();
        for id in ids {
            s.insert(self.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?);
        }
        Ok(s)
    }

    pub fn genus_of(&self, v: usize) -> u32 {
        self.vertices[v].genus
    }

    /// Edge-ends at `v` among `kept`, loops counted twice, legs excluded.
    pub fn valence_in(&self, v: usize, kept: EdgeSet) -> usize {
        kept.iter()
            .map(|e| {
                let [a, b] = self.edges[e].ends;
                usize::from(a == v) + usize::from(b == v)
            })
            .sum()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.valence_in(v, self.all_edges())
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.ends == [v, v]).count()
    }

    pub fn legs_at(&self, v: usize) -> usize {
        self.legs.iter().filter(|l| l.vertex == v).count()
    }

    /// Number of edges joining `a` and `b` (loops at `a` when equal).
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let key = if a <= b { [a, b] } else { [b, a] };
        self.edges.iter().filter(|e| e.ends == key).count()
    }

    pub fn loops(&self) -> EdgeSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_loop())
            .map(|(i, _)| i)
            .collect()
    }

    /// Connected components of the spanning subgraph on `kept`.
    pub fn components(&self, kept: EdgeSet) -> Vec<VertexSet> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in kept.iter() {
            let [a, b] = self.edges[e].ends;
            uf.union(a, b);
        }
        let mut by_root: Vec<(usize, VertexSet)> = Vec::new();
        for v in 0..self.vertices.len() {
            let r = uf.find(v);
            match by_root.iter_mut().find(|(root, _)| *root == r) {
                Some((_, s)) => s.insert(v),
                None => by_root.push((r, VertexSet::singleton(v))),
            }
        }
        by_root.into_iter().map(|(_, s)| s).collect()
    }

    pub fn is_connected_with(&self, kept: EdgeSet) -> bool {
        self.components(kept).len() <= 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_with(self.all_edges())
    }

    /// Whether the induced subgraph on `vs` is connected (and non-empty).
    pub fn induced_connected(&self, vs: VertexSet) -> bool {
        let Some(start) = vs.first() else {
            return false;
        };
        let mut seen = VertexSet::singleton(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.ends[0] == v || e.ends[1] == v {
                    let w = e.other(v);
                    if vs.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
        }
        seen == vs
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn first_betti(&self) -> usize {
        self.betti_of(self.all_edges())
    }

    pub fn betti_of(&self, kept: EdgeSet) -> usize {
        kept.len() + self.components(kept).len() - self.vertices.len()
    }

    /// Arithmetic genus `b1 + sum of vertex genera` of a connected graph.
    pub fn graph_genus(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let b1 = self.first_betti() as u32;
        Ok(b1 + self.vertices.iter().map(|v| v.genus).sum::<u32>())
    }

    pub fn spanning(&self, kept: EdgeSet) -> SpanningSubgraph<'_> {
        debug_assert!(kept.is_subset(self.all_edges()));
        SpanningSubgraph { graph: self, kept }
    }

    pub fn whole(&self) -> SpanningSubgraph<'_> {
        self.spanning(self.all_edges())
    }

    /// All spanning subgraphs, ordered lexicographically by sorted edge-id lists.
    pub fn spanning_subgraphs(&self, connected_only: bool) -> Vec<SpanningSubgraph<'_>> {
        let mut sets: Vec<EdgeSet> = all_subsets(self.edges.len())
            .map(EdgeSet::from_bits)
            .filter(|&s| !connected_only || self.is_connected_with(s))
            .collect();
        sort_lex(&mut sets);
        sets.into_iter().map(|s| self.spanning(s)).collect()
    }

    /// Subdivides each edge `e` into `m[e] + 1` edges.
    pub fn subdivide(&self, m: &[u32]) -> Result<SubdividedGraph> {
        assert_eq!(m.len(), self.edges.len(), "one subdivision count per edge");
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b = b.vertex(v.id.clone(), v.genus);
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let k = m[e];
            if k == 0 {
                b = b.edge(edge.id.clone(), self.vertices[edge.ends[0]].id.clone(), self.vertices[edge.ends[1]].id.clone());
                continue;
            }
            let mut prev = self.vertices[edge.ends[0]].id.clone();
            for pos in 1..=k {
                let x = format!("{}:{}", edge.id, pos);
                b = b.vertex(x.clone(), 0);
                b = b.edge(format!("{}:{}", edge.id, pos - 1), prev, x.clone());
                prev = x;
            }
            b = b.edge(format!("{}:{}", edge.id, k), prev, self.vertices[edge.ends[1]].id.clone());
        }
        for l in &self.legs {
            b = b.leg(l.id.clone(), self.vertices[l.vertex].id.clone(), l.label);
        }
        let result = b.build()?;

        let mut vertex_origin = Vec::with_capacity(result.vertex_count());
        for v in &result.vertices {
            let origin = match self.vertex_index(&v.id) {
                Some(i) => VertexOrigin::Base(i),
                None => {
                    let (e, pos) = split_chain_id(&v.id);
                    VertexOrigin::Exceptional {
                        edge: self.edge_index(e).expect("chain vertex of a base edge"),
                        position: pos,
                    }
                }
            };
            vertex_origin.push(origin);
        }
        let edge_origin = result
            .edges
            .iter()
            .map(|e| match self.edge_index(&e.id) {
                Some(i) if m[i] == 0 => i,
                _ => self.edge_index(split_chain_id(&e.id).0).expect("chain edge of a base edge"),
            })
            .collect();
        Ok(SubdividedGraph {
            base: self.clone(),
            m: m.to_vec(),
            result,
            vertex_origin,
            edge_origin,
        })
    }

    /// Contracts `edges`, returning the quotient and the contraction morphism.
    ///
    /// Each merged vertex keeps the smallest id of its class.
    pub fn contract(&self, edges: EdgeSet) -> (Graph, GraphMorphism) {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for e in edges.iter() {
            let [a, b] = self.edges[e].ends;
            uf.union(a, b);
        }
        let mut rep = vec![usize::MAX; n];
        for v in 0..n {
            let r = uf.find(v);
            if rep[r] == usize::MAX {
                rep[r] = v;
            }
        }
        let reps: Vec<usize> = (0..n).filter(|&v| rep[uf.find(v)] == v).collect();
        let mut genus = vec![0u32; n];
        let mut size = vec![0i64; n];
        for v in 0..n {
            let r = rep[uf.find(v)];
            genus[r] += self.vertices[v].genus;
            size[r] += 1;
        }
        let mut inner = vec![0i64; n];
        for e in edges.iter() {
            inner[rep[uf.find(self.edges[e].ends[0])]] += 1;
        }
        let vertices: Vec<Vertex> = reps
            .iter()
            .map(|&r| Vertex {
                id: self.vertices[r].id.clone(),
                genus: (genus[r] as i64 + inner[r] - size[r] + 1) as u32,
            })
            .collect();
        let mut target_index = |v: usize| {
            let r = rep[uf.find(v)];
            reps.binary_search(&r).expect("representative")
        };
        let mut target_edges = Vec::new();
        let mut edge_map = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if edges.contains(i) {
                continue;
            }
            let mut ends = [target_index(e.ends[0]), target_index(e.ends[1])];
            ends.sort_unstable();
            edge_map[i] = Some(target_edges.len());
            target_edges.push(Edge {
                id: e.id.clone(),
                ends,
            });
        }
        let legs: Vec<Leg> = self
            .legs
            .iter()
            .map(|l| Leg {
                id: l.id.clone(),
                vertex: target_index(l.vertex),
                label: l.label,
            })
            .collect();
        let vertex_map = (0..n).map(target_index).collect();
        let target = Graph {
            vertices,
            edges: target_edges,
            legs,
        };
        let f = GraphMorphism {
            vertex_map,
            contracted: edges,
            edge_map,
            leg_map: (0..self.legs.len()).collect(),
        };
        (target, f)
    }

    /// Splits the edges by the cut `V | V^c`: edges inside `V`, edges inside
    /// `V^c`, crossing edges. Loops lie on the side of their vertex.
    pub fn cut_partition(&self, vs: VertexSet) -> Result<(EdgeSet, EdgeSet, EdgeSet)> {
        let all = self.all_vertices();
        if vs.is_empty() || !vs.is_subset(all) || vs == all {
            return Err(Error::TrivialCut);
        }
        Ok(self.cut_partition_unchecked(vs))
    }

    pub(crate) fn cut_partition_unchecked(&self, vs: VertexSet) -> (EdgeSet, EdgeSet, EdgeSet) {
        let (mut inside, mut outside, mut crossing) = (EdgeSet::empty(), EdgeSet::empty(), EdgeSet::empty());
        for (i, e) in self.edges.iter().enumerate() {
            match (vs.contains(e.ends[0]), vs.contains(e.ends[1])) {
                (true, true) => inside.insert(i),
                (false, false) => outside.insert(i),
                _ => crossing.insert(i),
            }
        }
        (inside, outside, crossing)
    }

    /// All genus- and leg-preserving isomorphisms `self -> other`.
    pub fn isomorphisms(&self, other: &Graph) -> Vec<GraphMorphism> {
        let mut out = Vec::new();
        for vm in self.vertex_isomorphisms(other) {
            out.extend(self.edge_matchings(other, &vm));
        }
        out
    }

    pub fn automorphisms(&self) -> Vec<GraphMorphism> {
        self.isomorphisms(self)
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        !self.vertex_isomorphisms_up_to(other, 1).is_empty()
    }

    /// Vertex bijections preserving genus, legs and every edge multiplicity.
    pub fn vertex_isomorphisms(&self, other: &Graph) -> Vec<Vec<usize>> {
        self.vertex_isomorphisms_up_to(other, usize::MAX)
    }

    fn vertex_isomorphisms_up_to(&self, other: &Graph, limit: usize) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        if n != other.vertices.len() || self.edges.len() != other.edges.len() || self.legs.len() != other.legs.len() {
            return Vec::new();
        }
        let sig = |g: &Graph, v: usize| {
            let mut labels: Vec<u32> = g.legs.iter().filter(|l| l.vertex == v).map(|l| l.label).collect();
            labels.sort_unstable();
            (g.vertices[v].genus, g.valence(v), g.loops_at(v), labels)
        };
        let mine: Vec<_> = (0..n).map(|v| sig(self, v)).collect();
        let theirs: Vec<_> = (0..n).map(|v| sig(other, v)).collect();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_vertex_map(other, &mine, &theirs, 0, &mut map, &mut used, &mut out, limit);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_vertex_map<S: PartialEq>(
        &self,
        other: &Graph,
        mine: &[S],
        theirs: &[S],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == map.len() {
            out.push(map.clone());
            return;
        }
        for j in 0..map.len() {
            if used[j] || mine[i] != theirs[j] {
                continue;
            }
            if (0..i).any(|k| self.multiplicity(i, k) != other.multiplicity(j, map[k])) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            self.extend_vertex_map(other, mine, theirs, i + 1, map, used, out, limit);
            used[j] = false;
        }
        map[i] = usize::MAX;
    }

    /// Every way to match edges once the vertex map is fixed.
    fn edge_matchings(&self, other: &Graph, vm: &[usize]) -> Vec<GraphMorphism> {
        let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut seen = EdgeSet::empty();
        for (i, e) in self.edges.iter().enumerate() {
            if seen.contains(i) {
                continue;
            }
            let src: Vec<usize> = (0..self.edges.len()).filter(|&j| self.edges[j].ends == e.ends).collect();
            for &j in &src {
                seen.insert(j);
            }
            let mut key = [vm[e.ends[0]], vm[e.ends[1]]];
            key.sort_unstable();
            let dst: Vec<usize> = (0..other.edges.len()).filter(|&j| other.edges[j].ends == key).collect();
            classes.push((src, dst));
        }
        let leg_map: Vec<usize> = self
            .legs
            .iter()
            .map(|l| other.legs.iter().position(|m| m.label == l.label).expect("labels match"))
            .collect();

        let mut maps = vec![vec![None; self.edges.len()]];
        for (src, dst) in &classes {
            let perms = permutations(dst.len());
            let mut next = Vec::with_capacity(maps.len() * perms.len());
            for base in &maps {
                for p in &perms {
                    let mut m = base.clone();
                    for (k, &s) in src.iter().enumerate() {
                        m[s] = Some(dst[p[k]]);
                    }
                    next.push(m);
                }
            }
            maps = next;
        }
        maps.into_iter()
            .map(|edge_map| GraphMorphism {
                vertex_map: vm.to_vec(),
                contracted: EdgeSet::empty(),
                edge_map,
                leg_map: leg_map.clone(),
            })
            .collect()
    }
}

/// Sorts edge sets lexicographically by their ascending index lists.
pub fn sort_lex(sets: &mut [EdgeSet]) {
    sets.sort_by_cached_key(|s| s.to_vec());
}

fn split_chain_id(id: &str) -> (&str, u32) {
    let (e, pos) = id.rsplit_once(':').expect("chain ids have the form edge:k");
    (e, pos.parse().expect("chain position"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A spanning subgraph: all vertices of `graph`, the edges in `kept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpanningSubgraph<'g> {
    pub graph: &'g Graph,
    pub kept: EdgeSet,
}

impl<'g> SpanningSubgraph<'g> {
    pub fn missing(&self) -> EdgeSet {
        self.kept.complement(self.graph.edge_count())
    }

    /// `n(G)`, the number of edges of the parent not in `G`.
    pub fn n_missing(&self) -> usize {
        self.graph.edge_count() - self.kept.len()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected_with(self.kept)
    }

    /// Number of spanning trees by the matrix-tree theorem.
    pub fn complexity(&self) -> u64 {
        let n = self.graph.vertex_count();
        if n == 0 {
            return 0;
        }
        let lap = laplacian(self.graph, self.kept);
        let reduced: Vec<Vec<i64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
        linalg::determinant(&reduced).to_u64().expect("spanning-tree count fits in u64")
    }

    /// Number of spanning trees by explicit enumeration.
    pub fn complexity_by_enumeration(&self) -> u64 {
        self.spanning_trees().len() as u64
    }

    /// Edge sets of all spanning trees of `G`, in lexicographic order.
    pub fn spanning_trees(&self) -> Vec<EdgeSet> {
        let n = self.graph.vertex_count();
        let candidates: Vec<usize> = self.kept.iter().filter(|&e| !self.graph.edges[e].is_loop()).collect();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut chosen = Vec::new();
        grow_trees(self.graph, &candidates, 0, n - 1, &mut chosen, &mut out);
        sort_lex(&mut out);
        out
    }
}

fn grow_trees(g: &Graph, cand: &[usize], from: usize, need: usize, chosen: &mut Vec<usize>, out: &mut Vec<EdgeSet>) {
    if chosen.len() == need {
        out.push(chosen.iter().copied().collect());
        return;
    }
    if cand.len() - from < need - chosen.len() {
        return;
    }
    for i in from..cand.len() {
        if cand.len() - i < need - chosen.len() {
            break;
        }
        chosen.push(cand[i]);
        if forest(g, chosen) {
            grow_trees(g, cand, i + 1, need, chosen, out);
        }
        chosen.pop();
    }
}

fn forest(g: &Graph, edges: &[usize]) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    edges.iter().all(|&e| uf.union(g.edges[e].ends[0], g.edges[e].ends[1]))
}

/// Loop-free Laplacian of the spanning subgraph on `kept`.
pub fn laplacian(g: &Graph, kept: EdgeSet) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut l = vec![vec![0i64; n]; n];
    for e in kept.iter() {
        let [a, b] = g.edges[e].ends;
        if a == b {
            continue;
        }
        l[a][a] += 1;
        l[b][b] += 1;
        l[a][b] -= 1;
        l[b][a] -= 1;
    }
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Base(usize),
    /// Interior vertex number `position` (1-based) on the chain of `edge`.
    Exceptional { edge: usize, position: u32 },
}

#[derive(Clone, Debug)]
pub struct SubdividedGraph {
    pub base: Graph,
    pub m: Vec<u32>,
    pub result: Graph,
    pub vertex_origin: Vec<VertexOrigin>,
    /// Base edge index of each result edge.
    pub edge_origin: Vec<usize>,
}

impl SubdividedGraph {
    /// Result vertex index of base vertex `v`.
    pub fn base_vertex(&self, v: usize) -> usize {
        self.vertex_origin
            .iter()
            .position(|o| *o == VertexOrigin::Base(v))
            .expect("base vertex survives subdivision")
    }

    /// Result vertex indices of the interior vertices on the chain of `e`, in chain order.
    pub fn exceptional(&self, e: usize) -> Vec<usize> {
        let mut found: Vec<(u32, usize)> = self
            .vertex_origin
            .iter()
            .enumerate()
            .filter_map(|(i, o)| match *o {
                VertexOrigin::Exceptional { edge, position } if edge == e => Some((position, i)),
                _ => None,
            })
            .collect();
        found.sort_unstable();
        found.into_iter().map(|(_, i)| i).collect()
    }
}

/// A contraction followed by a relabelling, stored as index maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphMorphism {
    pub vertex_map: Vec<usize>,
    pub contracted: EdgeSet,
    /// Target edge of each non-contracted source edge.
    pub edge_map: Vec<Option<usize>>,
    pub leg_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn identity(g: &Graph) -> Self {
        Self {
            vertex_map: (0..g.vertex_count()).collect(),
            contracted: EdgeSet::empty(),
            edge_map: (0..g.edge_count()).map(Some).collect(),
            leg_map: (0..g.legs.len()).collect(),
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &GraphMorphism) -> GraphMorphism {
        let mut contracted = self.contracted;
        let edge_map = self
            .edge_map
            .iter()
            .enumerate()
            .map(|(e, m)| {
                let mid = (*m)?;
                let out = then.edge_map[mid];
                if out.is_none() {
                    contracted.insert(e);
                }
                out
            })
            .collect();
        GraphMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
            contracted,
            edge_map,
            leg_map: self.leg_map.iter().map(|&l| then.leg_map[l]).collect(),
        }
    }

    /// Image in the target of the spanning subgraph `kept`.
    pub fn image_of(&self, kept: EdgeSet) -> EdgeSet {
        kept.iter().filter_map(|e| self.edge_map[e]).collect()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.contracted.is_empty()
    }

    /// Checks that this is a contraction-type morphism `source -> target`.
    pub fn validate(&self, source: &Graph, target: &Graph) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidMorphism(msg.to_string()));
        if self.vertex_map.len() != source.vertex_count()
            || self.edge_map.len() != source.edge_count()
            || self.leg_map.len() != source.legs.len()
        {
            return bad("map lengths do not match the source");
        }
        if self.vertex_map.iter().any(|&w| w >= target.vertex_count()) {
            return bad("vertex map leaves the target");
        }
        let mut hit = vec![false; target.edge_count()];
        for (e, edge) in source.edges.iter().enumerate() {
            let [a, b] = edge.ends;
            let (fa, fb) = (self.vertex_map[a], self.vertex_map[b]);
            match (self.contracted.contains(e), self.edge_map[e]) {
                (true, None) => {
                    if fa != fb {
                        return bad("contracted edge joins distinct target vertices");
                    }
                }
                (false, Some(t)) => {
                    if t >= target.edge_count() || hit[t] {
                        return bad("edge map is not injective");
                    }
                    hit[t] = true;
                    let mut key = [fa, fb];
                    key.sort_unstable();
                    if target.edges[t].ends != key {
                        return bad("edge endpoints are not respected");
                    }
                }
                _ => return bad("edge map disagrees with the contracted set"),
            }
        }
        if hit.iter().any(|h| !h) {
            return bad("edge map is not surjective");
        }
        let mut leg_hit = vec![false; target.legs.len()];
        for (l, leg) in source.legs.iter().enumerate() {
            let t = self.leg_map[l];
            if t >= target.legs.len() || leg_hit[t] {
                return bad("leg map is not a bijection");
            }
            leg_hit[t] = true;
            let tl = &target.legs[t];
            if tl.label != leg.label || tl.vertex != self.vertex_map[leg.vertex] {
                return bad("leg map does not respect labels or anchors");
            }
        }
        if source.legs.len() != target.legs.len() {
            return bad("leg map is not a bijection");
        }
        for w in 0..target.vertex_count() {
            let pre: VertexSet = (0..source.vertex_count()).filter(|&v| self.vertex_map[v] == w).collect();
            if pre.is_empty() {
                return bad("vertex map is not surjective");
            }
            let inner: EdgeSet = self
                .contracted
                .iter()
                .filter(|&e| pre.contains(source.edges[e].ends[0]))
                .collect();
            if !source.induced_connected_by(pre, inner) {
                return bad("vertex preimage is not connected by contracted edges");
            }
            let b1 = inner.len() + 1 - pre.len();
            let genus: u32 = pre.iter().map(|v| source.vertices[v].genus).sum::<u32>() + b1 as u32;
            if genus != target.vertices[w].genus {
                return bad("genus is not preserved");
            }
        }
        Ok(())
    }
}

impl Graph {
    fn induced_connected_by(&self, vs: VertexSet, edges: EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in edges.iter() {
            let [a, b] = self.edges[e].ends;
            uf.union(a, b);
        }
        let Some(first) = vs.first() else {
            return false;
        };
        let r = uf.find(first);
        vs.iter().all(|v| uf.find(v) == r)
    }
}

/// Standard families used by tests, fixtures and the CLI.
pub mod families {
    use super::*;

    fn name(prefix: &str, i: usize, count: usize) -> String {
        if count >= 10 {
            format!("{prefix}{i:02}")
        } else {
            format!("{prefix}{i}")
        }
    }

    /// Two vertices joined by `t` parallel edges.
    pub fn banana_with_genera(t: usize, g1: u32, g2: u32) -> Graph {
        let mut b = Graph::builder().vertex("v1", g1).vertex("v2", g2);
        for i in 1..=t {
            b = b.edge(name("e", i, t), "v1", "v2");
        }
        b.build().expect("valid banana graph")
    }

    pub fn banana(t: usize) -> Graph {
        banana_with_genera(t, 0, 0)
    }

    pub fn theta() -> Graph {
        banana(3)
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 1);
        let mut b = Graph::builder();
        for i in 1..=n {
            b = b.vertex(name("v", i, n), 0);
        }
        for i in 1..=n {
            let j = i % n + 1;
            b = b.edge(name("e", i, n), name("v", i, n), name("v", j, n));
        }
        b.build().expect("valid cycle")
    }

    pub fn path(n: usize, genus: u32) -> Graph {
        let mut b = Graph::builder();
        for i in 1..=n {
            b = b.vertex(name("v", i, n), genus);
        }
        for i in 1..n {
            b = b.edge(name("e", i, n), name("v", i, n), name("v", i + 1, n));
        }
        b.build().expect("valid path")
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = Graph::builder();
        for i in 1..=n {
            b = b.vertex(name("v", i, n), 0);
        }
        let m = n * n.saturating_sub(1) / 2;
        let mut k = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                k += 1;
                b = b.edge(name("e", k, m), name("v", i, n), name("v", j, n));
            }
        }
        b.build().expect("valid complete graph")
    }

    /// Two genus-0 vertices with a loop each, joined by a bridge.
    pub fn dumbbell() -> Graph {
        Graph::builder()
            .vertex("v1", 0)
            .vertex("v2", 0)
            .edge("b", "v1", "v2")
            .edge("l1", "v1", "v1")
            .edge("l2", "v2", "v2")
            .build()
            .expect("valid dumbbell")
    }

    /// One vertex of the given genus with `t` loops.
    pub fn rose(t: usize, genus: u32) -> Graph {
        let mut b = Graph::builder().vertex("v", genus);
        for i in 1..=t {
            b = b.edge(name("e", i, t), "v", "v");
        }
        b.build().expect("valid rose")
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn builder_rejects_bad_input() {
        let e = Graph::builder().vertex("a", 0).edge("x", "a", "b").build();
        assert_eq!(
            e,
            Err(Error::DanglingEdge {
                edge: "x".into(),
                vertex: "b".into()
            })
        );
        let e = Graph::builder().vertex("a", 0).vertex("a", 1).build();
        assert_eq!(e, Err(Error::DuplicateVertex("a".into())));
        let e = Graph::builder().vertex("a", 0).leg("p", "a", 2).build();
        assert_eq!(e, Err(Error::BadLegLabels(1)));
    }

    #[test]
    fn betti_and_genus() {
        assert_eq!(rose(0, 0).first_betti(), 0);
        assert_eq!(theta().first_betti(), 2);
        assert_eq!(cycle(4).first_betti(), 1);
        assert_eq!(rose(0, 2).graph_genus(), Ok(2));
        assert_eq!(theta().graph_genus(), Ok(2));
        assert_eq!(dumbbell().graph_genus(), Ok(2));
        let two = Graph::builder().vertex("a", 0).vertex("b", 0).build().unwrap();
        assert_eq!(two.graph_genus(), Err(Error::Disconnected));
    }

    #[test]
    fn spanning_subgraph_counts() {
        assert_eq!(banana(2).spanning_subgraphs(true).len(), 3);
        assert_eq!(rose(1, 0).spanning_subgraphs(true).len(), 2);
        assert_eq!(theta().spanning_subgraphs(true).len(), 7);
        assert_eq!(theta().spanning_subgraphs(false).len(), 8);
        let order: Vec<Vec<usize>> = theta().spanning_subgraphs(false).iter().map(|s| s.kept.to_vec()).collect();
        assert_eq!(
            order,
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![1], vec![1, 2], vec![2]]
        );
    }

    #[test]
    fn complexity_examples() {
        let t = theta();
        assert_eq!(t.spanning(EdgeSet::empty()).complexity(), 0);
        assert_eq!(t.whole().complexity(), 3);
        assert_eq!(t.whole().complexity_by_enumeration(), 3);
        assert_eq!(complete(4).whole().complexity(), 16);
        assert_eq!(complete(4).whole().complexity_by_enumeration(), 16);
        assert_eq!(dumbbell().whole().complexity(), 1);
    }

    #[test]
    fn subdivision_shapes() {
        let s = banana(2).subdivide(&[1, 1]).unwrap();
        assert_eq!(s.result.vertex_count(), 4);
        assert_eq!(s.result.edge_count(), 4);
        assert!(s.result.is_isomorphic(&cycle(4)));
        assert_eq!(s.exceptional(0).len(), 1);

        let s = rose(1, 0).subdivide(&[2]).unwrap();
        assert!(s.result.is_isomorphic(&cycle(3)));
        assert_eq!(s.exceptional(0).len(), 2);

        let d = dumbbell();
        let s = d.subdivide(&[0, 0, 0]).unwrap();
        assert_eq!(s.result, d);
    }

    #[test]
    fn contraction_examples() {
        let b = banana(2);
        let (q, f) = b.contract(EdgeSet::singleton(0));
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.loops().len(), 1);
        assert_eq!(q.vertices()[0].genus, 0);
        f.validate(&b, &q).unwrap();

        let (q, f) = b.contract(EdgeSet::empty());
        assert_eq!(q, b);
        assert_eq!(f, GraphMorphism::identity(&b));

        let c = cycle(3);
        let (q, f) = c.contract(EdgeSet::from_indices([0, 1]));
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.edge_count(), 1);
        f.validate(&c, &q).unwrap();

        let r = rose(2, 1);
        let (q, f) = r.contract(EdgeSet::singleton(1));
        assert_eq!(q.vertices()[0].genus, 2);
        f.validate(&r, &q).unwrap();
    }

    #[test]
    fn cut_examples() {
        let t = theta();
        let (a, b, c) = t.cut_partition(VertexSet::singleton(0)).unwrap();
        assert!(a.is_empty() && b.is_empty());
        assert_eq!(c, t.all_edges());

        let d = dumbbell();
        let (a, b, c) = d.cut_partition(VertexSet::singleton(0)).unwrap();
        assert_eq!(a, EdgeSet::singleton(1));
        assert_eq!(b, EdgeSet::singleton(2));
        assert_eq!(c, EdgeSet::singleton(0));

        let (a, b, c) = cycle(4).cut_partition(VertexSet::from_indices([0, 1])).unwrap();
        assert_eq!((a.len(), b.len(), c.len()), (1, 1, 2));

        assert_eq!(t.cut_partition(VertexSet::empty()), Err(Error::TrivialCut));
        assert_eq!(t.cut_partition(t.all_vertices()), Err(Error::TrivialCut));
    }

    #[test]
    fn isomorphism_examples() {
        let t = theta();
        assert_eq!(t.vertex_isomorphisms(&t).len(), 2);
        assert_eq!(t.automorphisms().len(), 2 * 6);
        let vine = banana_with_genera(1, 1, 2);
        assert_eq!(vine.vertex_isomorphisms(&vine), vec![vec![0, 1]]);
        assert!(banana(2).isomorphisms(&path(3, 0)).is_empty());
        for f in t.automorphisms() {
            f.validate(&t, &t).unwrap();
        }
    }

    #[test]
    fn legs_block_swaps() {
        let g = Graph::builder()
            .vertex("a", 0)
            .vertex("b", 0)
            .edge("e1", "a", "b")
            .edge("e2", "a", "b")
            .leg("p", "a", 1)
            .leg("q", "b", 2)
            .build()
            .unwrap();
        assert_eq!(g.vertex_isomorphisms(&g).len(), 1);
    }

    #[test]
    fn composition_tracks_contracted_edges() {
        let c = cycle(3);
        let (q1, f1) = c.contract(EdgeSet::singleton(0));
        let (q2, f2) = q1.contract(EdgeSet::singleton(0));
        let h = f1.then(&f2);
        h.validate(&c, &q2).unwrap();
        assert_eq!(h.contracted.len(), 2);
    }
}
