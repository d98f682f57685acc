//! Categories of stable graphs of small type `(g, n)`, their contraction
//! morphisms, and assignments compatible with all of them at once.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::assignment::{enumerate_assignments, pushforward_compatible, StabilityAssignment};
use crate::bitset::{EdgeSet, VertexSet};
use crate::chip::Multidegree;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, GraphMorphism};
use crate::linalg;
use crate::polarization::{
    canonical_polarization, induced_assignment, is_nondegenerate, Polarization, Rational,
};

/// Objects of a stable-graph category, one per isomorphism class, plus the
/// morphisms between them.
#[derive(Clone, Debug)]
pub struct StableGraphCategory {
    pub genus: u32,
    pub markings: u32,
    pub objects: Vec<Graph>,
    /// Morphisms `i -> j`: every contraction of `i` composed with every
    /// isomorphism onto `j`.
    pub morphisms: BTreeMap<(usize, usize), Vec<GraphMorphism>>,
}

impl StableGraphCategory {
    pub fn object_index(&self, g: &Graph) -> Option<usize> {
        let key = invariant_key(g);
        (0..self.objects.len()).find(|&i| invariant_key(&self.objects[i]) == key && self.objects[i].is_isomorphic(g))
    }

    pub fn morphisms_between(&self, i: usize, j: usize) -> &[GraphMorphism] {
        self.morphisms.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.values().map(Vec::len).sum()
    }

    /// Objects with no separating edge.
    pub fn without_separating_edges(&self) -> Vec<usize> {
        (0..self.objects.len()).filter(|&i| !has_bridge(&self.objects[i])).collect()
    }
}

fn has_bridge(g: &Graph) -> bool {
    let all = g.all_edges();
    (0..g.edge_count()).any(|e| !g.edges()[e].is_loop() && !g.is_connected_with(all.without(e)))
}

/// Working form of a graph during generation: genera, edge endpoints,
/// and the vertex of each leg (leg `i` has label `i + 1`).
#[derive(Clone, Debug)]
struct Raw {
    genus: Vec<u32>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl Raw {
    fn stable_at(&self, v: usize) -> bool {
        let val: usize = self
            .edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum();
        let legs = self.legs.iter().filter(|&&l| l == v).count();
        2 * self.genus[v] as i64 - 2 + (val + legs) as i64 > 0
    }

    /// Builds a graph whose vertex, edge and leg ids follow a canonical
    /// signature order.
    fn to_graph(&self) -> Graph {
        let n = self.genus.len();
        let sig = |v: usize| {
            let val: usize = self
                .edges
                .iter()
                .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
                .sum();
            let loops = self.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
            let labels: Vec<usize> = (0..self.legs.len()).filter(|&l| self.legs[l] == v).collect();
            (self.genus[v], val, loops, labels)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| sig(v));
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut ends: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (pos[a], pos[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        ends.sort_unstable();
        let vname = |i: usize| id("v", i + 1, n);
        let mut b = GraphBuilder::new();
        for (i, &v) in order.iter().enumerate() {
            b = b.vertex(vname(i), self.genus[v]);
        }
        for (k, &(x, y)) in ends.iter().enumerate() {
            b = b.edge(id("e", k + 1, ends.len()), vname(x), vname(y));
        }
        for (l, &v) in self.legs.iter().enumerate() {
            b = b.leg(id("p", l + 1, self.legs.len()), vname(pos[v]), l as u32 + 1);
        }
        b.build().expect("generated graphs are valid")
    }
}

fn id(prefix: &str, i: usize, count: usize) -> String {
    if count >= 10 {
        format!("{prefix}{i:02}")
    } else {
        format!("{prefix}{i}")
    }
}

type Key = (usize, usize, Vec<(u32, usize, usize, Vec<u32>)>, Vec<(usize, usize)>);

/// Isomorphism invariant used to bucket candidates before a full test.
fn invariant_key(g: &Graph) -> Key {
    let sig = |v: usize| {
        let mut labels: Vec<u32> = g.legs().iter().filter(|l| l.vertex == v).map(|l| l.label).collect();
        labels.sort_unstable();
        (g.genus_of(v), g.valence(v), g.loops_at(v), labels)
    };
    let sigs: Vec<_> = (0..g.vertex_count()).map(sig).collect();
    let mut sorted = sigs.clone();
    sorted.sort();
    let rank = |v: usize| sorted.binary_search(&sigs[v]).expect("own signature");
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (rank(e.ends[0]), rank(e.ends[1]));
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    (g.vertex_count(), g.edge_count(), sorted, edges)
}

fn from_graph(g: &Graph) -> Raw {
    let mut legs = vec![0; g.legs().len()];
    for l in g.legs() {
        legs[l.label as usize - 1] = l.vertex;
    }
    Raw {
        genus: g.vertices().iter().map(|v| v.genus).collect(),
        edges: g.edges().iter().map(|e| (e.ends[0], e.ends[1])).collect(),
        legs,
    }
}

/// One-step degenerations of `raw`: trade a unit of genus for a loop, or
/// split a vertex in two joined by a new edge.
fn degenerations(raw: &Raw) -> Vec<Raw> {
    let mut out = Vec::new();
    for v in 0..raw.genus.len() {
        if raw.genus[v] > 0 {
            let mut r = raw.clone();
            r.genus[v] -= 1;
            r.edges.push((v, v));
            out.push(r);
        }
        let ends: Vec<(usize, bool)> = raw
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, &(a, b))| {
                let mut s = Vec::new();
                if a == v {
                    s.push((i, false));
                }
                if b == v {
                    s.push((i, true));
                }
                s
            })
            .collect();
        let legs: Vec<usize> = (0..raw.legs.len()).filter(|&l| raw.legs[l] == v).collect();
        let nv = raw.genus.len();
        for end_mask in 0u64..(1 << ends.len()) {
            for leg_mask in 0u64..(1 << legs.len()) {
                for g1 in 0..=raw.genus[v] {
                    let mut r = raw.clone();
                    r.genus[v] = g1;
                    r.genus.push(raw.genus[v] - g1);
                    for (k, &(e, second)) in ends.iter().enumerate() {
                        if end_mask >> k & 1 == 1 {
                            if second {
                                r.edges[e].1 = nv;
                            } else {
                                r.edges[e].0 = nv;
                            }
                        }
                    }
                    for (k, &l) in legs.iter().enumerate() {
                        if leg_mask >> k & 1 == 1 {
                            r.legs[l] = nv;
                        }
                    }
                    r.edges.push((v, nv));
                    if r.stable_at(v) && r.stable_at(nv) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

/// Isomorphism classes of stable graphs of genus `g` with `n` legs,
/// ordered by edge count, then vertex count, then invariants.
pub fn enumerate_stable_objects(g: u32, n: u32) -> Result<Vec<Graph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::OutOfRange(format!("(g, n) = ({g}, {n}) is not of hyperbolic type")));
    }
    if g > 4 || n > 4 {
        return Err(Error::OutOfRange(format!("(g, n) = ({g}, {n}) exceeds g <= 4, n <= 4")));
    }
    let smooth = Raw {
        genus: vec![g],
        edges: Vec::new(),
        legs: vec![0; n as usize],
    };
    let mut objects: Vec<Graph> = vec![smooth.to_graph()];
    let mut buckets: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    buckets.insert(invariant_key(&objects[0]), vec![0]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for r in degenerations(&from_graph(&objects[i])) {
                let cand = r.to_graph();
                let key = invariant_key(&cand);
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|&j| objects[j].is_isomorphic(&cand)) {
                    continue;
                }
                bucket.push(objects.len());
                next.push(objects.len());
                objects.push(cand);
            }
        }
        frontier = next;
    }
    objects.sort_by_cached_key(|o| (o.edge_count(), o.vertex_count(), invariant_key(o)));
    Ok(objects)
}

/// The category of stable graphs of type `(g, n)` with all morphisms.
pub fn enumerate_stable_graphs(g: u32, n: u32) -> Result<StableGraphCategory> {
    let objects = enumerate_stable_objects(g, n)?;
    let keys: Vec<Key> = objects.iter().map(invariant_key).collect();
    let mut morphisms: BTreeMap<(usize, usize), Vec<GraphMorphism>> = BTreeMap::new();
    for (i, src) in objects.iter().enumerate() {
        for bits in crate::bitset::all_subsets(src.edge_count()) {
            let (quotient, contraction) = src.contract(EdgeSet::from_bits(bits));
            let key = invariant_key(&quotient);
            let j = (0..objects.len())
                .find(|&j| keys[j] == key && objects[j].is_isomorphic(&quotient))
                .expect("contractions of stable graphs are stable");
            let list = morphisms.entry((i, j)).or_default();
            for iso in quotient.isomorphisms(&objects[j]) {
                list.push(contraction.then(&iso));
            }
        }
    }
    Ok(StableGraphCategory {
        genus: g,
        markings: n,
        objects,
        morphisms,
    })
}

/// Objects with two vertices and no loops (`T`), those among them whose
/// automorphisms fix both vertices (`T'`), and those in `T` with a single
/// edge (`C`).
pub fn vine_subsets(cat: &StableGraphCategory) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let t: Vec<usize> = (0..cat.objects.len())
        .filter(|&i| {
            let o = &cat.objects[i];
            o.vertex_count() == 2 && o.loops().is_empty()
        })
        .collect();
    let t_prime = t
        .iter()
        .copied()
        .filter(|&i| {
            let o = &cat.objects[i];
            o.vertex_isomorphisms(o).iter().all(|m| m[0] == 0)
        })
        .collect();
    let c = t.iter().copied().filter(|&i| cat.objects[i].edge_count() == 1).collect();
    (t, t_prime, c)
}

/// The trivalent graph on `2g-2` genus-0 vertices: a cycle `e_i` through
/// all vertices plus chords `e_j'` from `v_j` to `v_{j+g-1}`. Also returns
/// the cycle as an edge set.
pub fn gsym(g: u32) -> Result<(Graph, EdgeSet)> {
    if g < 2 {
        return Err(Error::OutOfRange(format!("gsym needs g >= 2, got {g}")));
    }
    let k = 2 * g as usize - 2;
    let v = |i: usize| id("v", i, k);
    let mut b = GraphBuilder::new();
    for i in 1..=k {
        b = b.vertex(v(i), 0);
    }
    for i in 1..=k {
        b = b.edge(id("e", i, k), v(i), v(i % k + 1));
    }
    for j in 1..g as usize {
        b = b.edge(format!("{}'", id("e", j, k)), v(j), v(j + g as usize - 1));
    }
    let graph = b.build()?;
    let cycle = graph.edge_set((1..=k).map(|i| id("e", i, k)).collect::<Vec<_>>().iter().map(String::as_str))?;
    Ok((graph, cycle))
}

/// Side of a tree edge: the vertices on one side of `tree - {e}`.
fn tree_side(g: &Graph, tree: EdgeSet, e: usize) -> VertexSet {
    let comps = g.components(tree.without(e));
    let a = g.edges()[e].ends[0];
    *comps.iter().find(|c| c.contains(a)).expect("endpoint has a component")
}

/// Values on a spanning tree forced by compatibility with the two-vertex
/// contractions of the graph.
///
/// For a tree edge `e`, contracting every edge not crossing the cut of
/// `tree - {e}` gives a two-vertex object. If it lies in `T'`, the side
/// mapped to its first vertex must carry `alpha` of that object; otherwise
/// both sides must carry the same amount. Together with the total this is
/// a square linear system.
pub fn solve_tree_system(
    cat: &StableGraphCategory,
    object: usize,
    tree: EdgeSet,
    d: i64,
    alpha: &BTreeMap<usize, i64>,
) -> Result<Multidegree> {
    let g = &cat.objects[object];
    let n = g.vertex_count();
    if !g.spanning(tree).is_connected() || tree.len() + 1 != n {
        return Err(Error::Precondition("not a spanning tree".into()));
    }
    let (_, t_prime, _) = vine_subsets(cat);
    let missing = tree.complement(g.edge_count());
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for e in tree.iter() {
        let side = tree_side(g, tree, e);
        let (inside, outside, crossing) = g.cut_partition_unchecked(side);
        let (quotient, contraction) = g.contract(inside.union(outside));
        let j = cat
            .object_index(&quotient)
            .ok_or_else(|| Error::Precondition("contraction outside the category".into()))?;
        let in_a = missing.intersection(inside).len() as i64;
        let in_b = missing.intersection(outside).len() as i64;
        let mut row = vec![0i64; n];
        if t_prime.contains(&j) {
            let a_value = *alpha
                .get(&j)
                .ok_or_else(|| Error::Precondition(format!("no value for object {j}")))?;
            let iso = &quotient.vertex_isomorphisms(&cat.objects[j])[0];
            let a_first = iso[contraction.vertex_map[side.first().expect("non-empty side")]] == 0;
            let (chosen, extra) = if a_first { (side, in_a) } else { (side.complement(n), in_b) };
            for v in chosen.iter() {
                row[v] = 1;
            }
            rows.push(row);
            rhs.push(a_value - extra);
        } else {
            for v in 0..n {
                row[v] = if side.contains(v) { 1 } else { -1 };
            }
            rows.push(row);
            rhs.push(in_b - in_a);
        }
        debug_assert!(!crossing.is_empty());
    }
    rows.push(vec![1; n]);
    rhs.push(d - missing.len() as i64);
    let solution = linalg::solve_rational(&rows, &rhs)
        .ok_or_else(|| Error::Precondition("tree system is singular".into()))?;
    to_integers(&solution).map(Multidegree)
}

fn to_integers(xs: &[BigRational]) -> Result<Vec<i64>> {
    xs.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64().ok_or(Error::NoIntegerSolution)
            } else {
                Err(Error::NoIntegerSolution)
            }
        })
        .collect()
}

/// One stability assignment per object, compatible with every morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalAssignment {
    pub degree: i64,
    pub per_object: Vec<StabilityAssignment>,
}

#[derive(Clone, Debug)]
pub struct UniversalSearch {
    pub genus: u32,
    pub markings: u32,
    pub degree: i64,
    pub window: i64,
    pub results: Vec<UniversalAssignment>,
    /// Whether the degree is ruled out by the gcd condition; only decided
    /// for `g >= 2` without markings.
    pub obstructed: Option<bool>,
}

/// All universal assignments whose per-object tree values lie in the window.
pub fn universal_search(g: u32, n: u32, d: i64, window: i64) -> Result<UniversalSearch> {
    if g > 3 || n > 2 {
        return Err(Error::OutOfRange(format!("universal search supports g <= 3, n <= 2, got ({g}, {n})")));
    }
    let cat = enumerate_stable_graphs(g, n)?;
    universal_search_in(&cat, d, window)
}

pub fn universal_search_in(cat: &StableGraphCategory, d: i64, window: i64) -> Result<UniversalSearch> {
    let mut candidates = Vec::with_capacity(cat.objects.len());
    for (i, o) in cat.objects.iter().enumerate() {
        let autos = cat.morphisms_between(i, i);
        let mut keep = Vec::new();
        for a in enumerate_assignments(o, d, window)? {
            if all_compatible(&a, &a, autos)? {
                keep.push(a);
            }
        }
        candidates.push(keep);
    }
    // objects are sorted by edge count, so every non-invertible morphism
    // out of object i lands on an earlier object
    let mut results = Vec::new();
    let mut chosen: Vec<StabilityAssignment> = Vec::new();
    extend_universal(cat, &candidates, &mut chosen, &mut results)?;
    let obstructed = (cat.genus >= 2 && cat.markings == 0).then(|| gcd_obstruction(cat.genus, d)).transpose()?;
    Ok(UniversalSearch {
        genus: cat.genus,
        markings: cat.markings,
        degree: d,
        window,
        results: results
            .into_iter()
            .map(|per_object| UniversalAssignment { degree: d, per_object })
            .collect(),
        obstructed,
    })
}

fn all_compatible(src: &StabilityAssignment, tgt: &StabilityAssignment, fs: &[GraphMorphism]) -> Result<bool> {
    for f in fs {
        if !pushforward_compatible(src, tgt, f)?.passed() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn extend_universal(
    cat: &StableGraphCategory,
    candidates: &[Vec<StabilityAssignment>],
    chosen: &mut Vec<StabilityAssignment>,
    results: &mut Vec<Vec<StabilityAssignment>>,
) -> Result<()> {
    let i = chosen.len();
    if i == candidates.len() {
        results.push(chosen.clone());
        return Ok(());
    }
    for a in &candidates[i] {
        let mut ok = true;
        for j in 0..i {
            if !all_compatible(a, &chosen[j], cat.morphisms_between(i, j))?
                || !all_compatible(&chosen[j], a, cat.morphisms_between(j, i))?
            {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(a.clone());
            extend_universal(cat, candidates, chosen, results)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Whether `gcd(d - g + 1, 2g - 2) != 1`.
pub fn gcd_obstruction(g: u32, d: i64) -> Result<bool> {
    if g < 2 {
        return Err(Error::OutOfRange(format!("obstruction needs g >= 2, got {g}")));
    }
    let k = 2 * g as i64 - 2;
    Ok((d - g as i64 + 1).gcd(&k) != 1)
}

/// Independent check of the obstruction on the cycle of [`gsym`]: the
/// constant polarization of total `d - g + 1` that the rotation symmetry
/// forces there is degenerate exactly when the degree is obstructed.
pub fn cycle_obstruction(g: u32, d: i64) -> Result<bool> {
    let (graph, cycle) = gsym(g)?;
    let mut b = GraphBuilder::new();
    for v in graph.vertices() {
        b = b.vertex(v.id.clone(), 0);
    }
    for e in cycle.iter() {
        let edge = &graph.edges()[e];
        b = b.edge(edge.id.clone(), graph.vertices()[edge.ends[0]].id.clone(), graph.vertices()[edge.ends[1]].id.clone());
    }
    let ring = b.build()?;
    let k = ring.vertex_count() as i64;
    let total = d - g as i64 + 1;
    let phi = Polarization::new(vec![Rational::new(total, k); k as usize]);
    Ok(!is_nondegenerate(&ring, &phi)?)
}

/// Outcome of comparing a family of polarizations over a category.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub strong: bool,
    pub weak: bool,
    /// Morphisms `(source, target, index)` where additivity fails.
    pub strong_failures: Vec<(usize, usize, usize)>,
    /// Morphisms where the induced assignments are incompatible.
    pub weak_failures: Vec<(usize, usize, usize)>,
}

impl CompatibilityReport {
    pub fn implication_holds(&self) -> bool {
        !self.strong || self.weak
    }
}

/// Strong compatibility (`φ'` is the pushforward sum of `φ`) and weak
/// compatibility (induced assignments are compatible) over every morphism.
pub fn weak_vs_strong_compatibility(phis: &[Polarization], cat: &StableGraphCategory) -> Result<CompatibilityReport> {
    let mut induced = Vec::with_capacity(phis.len());
    for (o, phi) in cat.objects.iter().zip(phis) {
        if !is_nondegenerate(o, phi)? {
            return Err(Error::Degenerate);
        }
        induced.push(induced_assignment(o, phi)?);
    }
    let mut report = CompatibilityReport::default();
    for (&(i, j), fs) in &cat.morphisms {
        for (k, f) in fs.iter().enumerate() {
            let mut pushed = vec![Rational::from_integer(0); cat.objects[j].vertex_count()];
            for (v, &w) in f.vertex_map.iter().enumerate() {
                pushed[w] += phis[i].values[v];
            }
            if pushed != phis[j].values {
                report.strong_failures.push((i, j, k));
            }
            if !pushforward_compatible(&induced[i], &induced[j], f)?.passed() {
                report.weak_failures.push((i, j, k));
            }
        }
    }
    report.strong = report.strong_failures.is_empty();
    report.weak = report.weak_failures.is_empty();
    Ok(report)
}

/// The canonical polarization of degree `d` on every object.
pub fn canonical_family(cat: &StableGraphCategory, d: i64) -> Result<Vec<Polarization>> {
    cat.objects.iter().map(|o| canonical_polarization(o, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{extend_from_trees, is_stability_assignment, vine_assignment};
    use crate::graph::families::*;
    use crate::polarization::assignment_from_polarization;

    #[test]
    fn object_counts() {
        for (g, n, count) in [(2, 0, 7), (1, 1, 2), (0, 3, 1), (1, 2, 5), (0, 4, 4), (3, 0, 42)] {
            let objs = enumerate_stable_objects(g, n).unwrap();
            assert_eq!(objs.len(), count, "({g}, {n})");
            for o in &objs {
                assert_eq!(o.graph_genus().unwrap(), g);
                for v in 0..o.vertex_count() {
                    assert!(2 * o.genus_of(v) as usize + o.valence(v) + o.legs_at(v) >= 3);
                }
            }
            for a in 0..objs.len() {
                for b in a + 1..objs.len() {
                    assert!(!objs[a].is_isomorphic(&objs[b]));
                }
            }
        }
        assert!(enumerate_stable_objects(1, 0).is_err());
        assert!(enumerate_stable_objects(5, 0).is_err());
    }

    #[test]
    #[ignore = "slow: a few seconds in release mode"]
    fn genus_four_count() {
        assert_eq!(enumerate_stable_objects(4, 0).unwrap().len(), 379);
    }

    #[test]
    fn morphisms_are_valid_and_closed() {
        let cat = enumerate_stable_graphs(2, 0).unwrap();
        for (&(i, j), fs) in &cat.morphisms {
            for f in fs {
                f.validate(&cat.objects[i], &cat.objects[j]).unwrap();
            }
        }
        for (&(i, j), fs) in &cat.morphisms {
            for (&(j2, k), gs) in &cat.morphisms {
                if j2 != j {
                    continue;
                }
                for f in fs.iter().take(3) {
                    for h in gs.iter().take(3) {
                        assert!(cat.morphisms_between(i, k).contains(&f.then(h)));
                    }
                }
            }
        }
    }

    #[test]
    fn vine_subset_examples() {
        let cat = enumerate_stable_graphs(2, 0).unwrap();
        let (t, tp, c) = vine_subsets(&cat);
        assert_eq!(t.len(), 2);
        assert!(tp.is_empty());
        assert_eq!(c.len(), 1);
        let one = &cat.objects[c[0]];
        assert_eq!(one.vertex_count(), 2);
        assert!(t.contains(&c[0]));
        assert!(t.iter().any(|&i| cat.objects[i].is_isomorphic(&theta())));

        let cat3 = enumerate_stable_graphs(3, 0).unwrap();
        let (_, tp3, _) = vine_subsets(&cat3);
        let vine12 = banana_with_genera(1, 1, 2);
        assert!(tp3.iter().any(|&i| cat3.objects[i].is_isomorphic(&vine12)));

        let cat12 = enumerate_stable_graphs(1, 2).unwrap();
        let (_, tp12, _) = vine_subsets(&cat12);
        let marked = Graph::builder()
            .vertex("a", 0)
            .vertex("b", 0)
            .edge("e1", "a", "b")
            .edge("e2", "a", "b")
            .leg("p", "a", 1)
            .leg("q", "b", 2)
            .build()
            .unwrap();
        assert!(tp12.iter().any(|&i| cat12.objects[i].is_isomorphic(&marked)));
    }

    #[test]
    fn gsym_examples() {
        let (g2, cycle2) = gsym(2).unwrap();
        assert!(g2.is_isomorphic(&theta()));
        assert_eq!(cycle2.len(), 2);
        let (g3, _) = gsym(3).unwrap();
        assert!(g3.is_isomorphic(&complete(4)));
        for g in 2..=5 {
            let (x, _) = gsym(g).unwrap();
            assert_eq!(x.graph_genus().unwrap(), g);
            assert!((0..x.vertex_count()).all(|v| x.valence(v) == 3));
        }
        assert!(gsym(1).is_err());
    }

    #[test]
    fn tree_system_examples() {
        let cat = enumerate_stable_graphs(3, 0).unwrap();
        let p = cat.object_index(&path(3, 1)).unwrap();
        let vine12 = cat.object_index(&banana_with_genera(1, 1, 2)).unwrap();
        let obj = &cat.objects[p];
        for d in -2..=3 {
            for a in -2..=2 {
                let alpha = BTreeMap::from([(vine12, a)]);
                let x = solve_tree_system(&cat, p, obj.all_edges(), d, &alpha).unwrap();
                // the middle vertex is the genus-1 vertex of valence 2
                let mid = (0..3).find(|&v| obj.valence(v) == 2).unwrap();
                for v in 0..3 {
                    assert_eq!(x[v], if v == mid { d - 2 * a } else { a });
                }
            }
        }

        let cat2 = enumerate_stable_graphs(2, 0).unwrap();
        let th = cat2.object_index(&theta()).unwrap();
        let r = solve_tree_system(&cat2, th, EdgeSet::singleton(0), 1, &BTreeMap::new());
        assert_eq!(r, Err(Error::NoIntegerSolution));
        let x = solve_tree_system(&cat2, th, EdgeSet::singleton(0), 0, &BTreeMap::new()).unwrap();
        assert_eq!(x, Multidegree(vec![-1, -1]));
    }

    #[test]
    fn tree_system_round_trip() {
        // a vine with distinct genera lies in T' and the tree value is α itself
        let cat = enumerate_stable_graphs(3, 0).unwrap();
        let j = cat.object_index(&banana_with_genera(2, 1, 1)).unwrap();
        let obj = cat.objects[j].clone();
        let (_, tp, _) = vine_subsets(&cat);
        assert!(!tp.contains(&j));
        let v = cat.object_index(&banana_with_genera(1, 1, 2)).unwrap();
        assert!(tp.contains(&v));
        for d in -1..=2 {
            let x = solve_tree_system(&cat, v, cat.objects[v].all_edges(), d, &BTreeMap::from([(v, 0)])).unwrap();
            assert_eq!(x[0], 0);
            let trees = BTreeMap::from([(cat.objects[v].all_edges(), x)]);
            let a = extend_from_trees(&cat.objects[v], d, &trees).unwrap().unwrap();
            assert!(is_stability_assignment(&a));
        }
        assert_eq!(obj.vertex_count(), 2);
    }

    #[test]
    fn obstruction_examples() {
        assert!(!gcd_obstruction(2, 0).unwrap());
        assert!(gcd_obstruction(2, 1).unwrap());
        assert!(gcd_obstruction(3, 2).unwrap());
        assert!(gcd_obstruction(1, 0).is_err());
        for g in 2..=3 {
            for d in 0..=5 {
                assert_eq!(cycle_obstruction(g, d).unwrap(), gcd_obstruction(g, d).unwrap(), "g={g} d={d}");
            }
        }
    }

    #[test]
    fn genus_two_search() {
        let cat = enumerate_stable_graphs(2, 0).unwrap();
        let found = universal_search_in(&cat, 0, 4).unwrap();
        assert!(!found.results.is_empty());
        assert_eq!(found.obstructed, Some(false));
        let th = cat.object_index(&theta()).unwrap();
        for u in &found.results {
            // the swap-invariant vine family has λ = -1 at d = 0
            assert_eq!(u.per_object[th], vine_assignment(3, 0, -1));
        }
        let none = universal_search_in(&cat, 1, 4).unwrap();
        assert!(none.results.is_empty());
        assert_eq!(none.obstructed, Some(true));
    }

    #[test]
    fn genus_one_search_matches_polarizations() {
        let cat = enumerate_stable_graphs(1, 1).unwrap();
        let found = universal_search_in(&cat, 0, 2).unwrap();
        assert!(!found.results.is_empty());
        for u in &found.results {
            for (o, a) in cat.objects.iter().zip(&u.per_object) {
                assert!(is_stability_assignment(a));
                if o.vertex_count() == 1 {
                    let phi = Polarization::from_integers(&[0]);
                    assert_eq!(*a, assignment_from_polarization(o, &phi).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_family_is_strongly_compatible() {
        let cat = enumerate_stable_graphs(2, 0).unwrap();
        let phis = canonical_family(&cat, 0).unwrap();
        let r = weak_vs_strong_compatibility(&phis, &cat).unwrap();
        assert!(r.strong && r.weak);

        let single = enumerate_stable_graphs(0, 3).unwrap();
        let r = weak_vs_strong_compatibility(&[Polarization::from_integers(&[0])], &single).unwrap();
        assert!(r.strong && r.weak);
    }
}
