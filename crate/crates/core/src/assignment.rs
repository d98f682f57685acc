//! Stability assignments: finite sets of (connected spanning subgraph,
//! multidegree) pairs, their two defining conditions, closures, lifts to
//! subdivisions and compatibility along contractions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::EdgeSet;
use crate::chip::{Jacobian, Multidegree};
use crate::error::{Error, Result};
use crate::graph::{sort_lex, Graph, GraphMorphism, SubdividedGraph};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilityAssignment {
    pub graph: Graph,
    pub degree: i64,
    pub entries: BTreeMap<EdgeSet, BTreeSet<Multidegree>>,
}

impl StabilityAssignment {
    pub fn new(graph: Graph, degree: i64) -> Self {
        Self {
            graph,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// Total required on the subgraph `kept`: `d - n(G)`.
    pub fn expected_total(&self, kept: EdgeSet) -> i64 {
        self.degree - (self.graph.edge_count() - kept.len()) as i64
    }

    /// Adds an entry; returns whether it was new.
    pub fn insert(&mut self, kept: EdgeSet, d: Multidegree) -> Result<bool> {
        if !kept.is_subset(self.graph.all_edges()) {
            return Err(Error::UnknownEdge(alloc::format!("{kept:?}")));
        }
        if d.len() != self.graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.vertex_count(),
                got: d.len(),
            });
        }
        let expected = self.expected_total(kept);
        if d.total() != expected {
            return Err(Error::WrongDegree {
                expected,
                got: d.total(),
            });
        }
        if !self.graph.is_connected_with(kept) {
            return Err(Error::Disconnected);
        }
        Ok(self.entries.entry(kept).or_default().insert(d))
    }

    pub fn contains(&self, kept: EdgeSet, d: &Multidegree) -> bool {
        self.entries.get(&kept).is_some_and(|f| f.contains(d))
    }

    /// `σ(G)`; empty when `G` carries no entries.
    pub fn fiber(&self, kept: EdgeSet) -> impl Iterator<Item = &Multidegree> {
        self.entries.get(&kept).into_iter().flatten()
    }

    pub fn fiber_len(&self, kept: EdgeSet) -> usize {
        self.entries.get(&kept).map_or(0, BTreeSet::len)
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries in lexicographic order of kept-edge lists, then multidegree.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeSet, &Multidegree)> {
        let mut keys: Vec<EdgeSet> = self.entries.keys().copied().collect();
        sort_lex(&mut keys);
        keys.into_iter()
            .flat_map(move |k| self.entries[&k].iter().map(move |d| (k, d)))
    }
}

/// One failed requirement found by a verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Adding a chip at `vertex` across the missing `edge` leaves `σ`.
    MissingSuccessor {
        kept: EdgeSet,
        degree: Multidegree,
        edge: usize,
        vertex: usize,
    },
    /// `|σ(G)|` differs from the complexity (or falls below it).
    WrongCount { kept: EdgeSet, found: usize, expected: u64 },
    /// Two distinct elements of `σ(G)` in the same twister orbit.
    Equivalent {
        kept: EdgeSet,
        first: Multidegree,
        second: Multidegree,
    },
    /// Image of an entry missing from the target assignment.
    Incompatible {
        kept: EdgeSet,
        degree: Multidegree,
        image: EdgeSet,
        image_degree: Multidegree,
    },
    /// The two equivalence routes disagree.
    RouteDisagreement,
    Precondition(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.violations.extend(other.violations);
        self
    }
}

/// Connected spanning subgraphs of a graph with their complexities and
/// Jacobians, computed once and shared by the verifiers and the search.
#[derive(Clone, Debug)]
pub struct SubgraphTable {
    pub connected: Vec<EdgeSet>,
    data: BTreeMap<EdgeSet, (u64, Jacobian)>,
}

impl SubgraphTable {
    pub fn new(g: &Graph) -> Self {
        let connected: Vec<EdgeSet> = g.spanning_subgraphs(true).into_iter().map(|s| s.kept).collect();
        let data = connected
            .iter()
            .map(|&k| {
                let c = g.spanning(k).complexity();
                (k, (c, Jacobian::new(g, k).expect("connected")))
            })
            .collect();
        Self { connected, data }
    }

    pub fn complexity(&self, kept: EdgeSet) -> u64 {
        self.data[&kept].0
    }

    pub fn jacobian(&self, kept: EdgeSet) -> &Jacobian {
        &self.data[&kept].1
    }

    pub fn is_connected(&self, kept: EdgeSet) -> bool {
        self.data.contains_key(&kept)
    }
}

/// Condition (1): chip additions across missing edges stay inside `σ`.
pub fn verify_condition_one(a: &StabilityAssignment) -> VerificationReport {
    let mut report = VerificationReport::default();
    let g = &a.graph;
    for (kept, d) in a.iter() {
        for e in kept.complement(g.edge_count()).iter() {
            let [x, y] = g.edges()[e].ends;
            let bigger = kept.with(e);
            let targets: &[usize] = if x == y { &[x] } else { &[x, y] };
            for &v in targets {
                if !a.contains(bigger, &d.with_added(v, 1)) {
                    report.push(Violation::MissingSuccessor {
                        kept,
                        degree: d.clone(),
                        edge: e,
                        vertex: v,
                    });
                }
            }
        }
    }
    report
}

/// Condition (2): each `σ(G)` is a minimal complete set of orbit representatives.
pub fn verify_condition_two(a: &StabilityAssignment) -> VerificationReport {
    verify_condition_two_with(a, &SubgraphTable::new(&a.graph))
}

pub fn verify_condition_two_with(a: &StabilityAssignment, table: &SubgraphTable) -> VerificationReport {
    let mut report = VerificationReport::default();
    for &kept in &table.connected {
        let c = table.complexity(kept);
        let found = a.fiber_len(kept);
        if found as u64 != c {
            report.push(Violation::WrongCount {
                kept,
                found,
                expected: c,
            });
        }
        let jac = table.jacobian(kept);
        let mut seen: BTreeMap<Vec<i64>, &Multidegree> = BTreeMap::new();
        for d in a.fiber(kept) {
            if let Some(prev) = seen.insert(jac.class_key(d), d) {
                report.push(Violation::Equivalent {
                    kept,
                    first: prev.clone(),
                    second: d.clone(),
                });
            }
        }
    }
    report
}

pub fn is_stability_assignment(a: &StabilityAssignment) -> bool {
    verify_condition_one(a).passed() && verify_condition_two(a).passed()
}

/// Least superset of `seed` closed under the chip-adding rule.
pub fn chip_adding_closure(seed: &StabilityAssignment) -> StabilityAssignment {
    let g = &seed.graph;
    let mut out = seed.clone();
    let mut work: Vec<(EdgeSet, Multidegree)> = seed.iter().map(|(k, d)| (k, d.clone())).collect();
    while let Some((kept, d)) = work.pop() {
        for e in kept.complement(g.edge_count()).iter() {
            let [x, y] = g.edges()[e].ends;
            let targets: &[usize] = if x == y { &[x] } else { &[x, y] };
            for &v in targets {
                let next = d.with_added(v, 1);
                let bigger = kept.with(e);
                if out.insert(bigger, next.clone()).expect("closure preserves totals") {
                    work.push((bigger, next));
                }
            }
        }
    }
    out
}

/// The unique assignment with the given values on spanning trees, if any.
pub fn extend_from_trees(
    g: &Graph,
    d: i64,
    tree_values: &BTreeMap<EdgeSet, Multidegree>,
) -> Result<Option<StabilityAssignment>> {
    let trees = g.whole().spanning_trees();
    if trees.len() != tree_values.len() || trees.iter().any(|t| !tree_values.contains_key(t)) {
        return Err(Error::Precondition("tree values must be given on exactly the spanning trees".into()));
    }
    let mut seed = StabilityAssignment::new(g.clone(), d);
    for (&t, value) in tree_values {
        seed.insert(t, value.clone())?;
    }
    let closed = chip_adding_closure(&seed);
    Ok(is_stability_assignment(&closed).then_some(closed))
}

/// Lower bounds `|σ(G)| >= c(G)` and propagation of equality from `Γ`.
pub fn barmak_check(a: &StabilityAssignment) -> VerificationReport {
    let mut report = VerificationReport::default();
    if !verify_condition_one(a).passed() {
        report.push(Violation::Precondition("condition (1) fails".into()));
        return report;
    }
    let trees = a.graph.whole().spanning_trees();
    if trees.iter().any(|&t| a.fiber_len(t) == 0) {
        report.push(Violation::Precondition("some spanning tree has empty fiber".into()));
        return report;
    }
    let all = a.graph.all_edges();
    let tight = a.fiber_len(all) as u64 == a.graph.whole().complexity();
    for sub in a.graph.spanning_subgraphs(true) {
        let c = sub.complexity();
        let found = a.fiber_len(sub.kept);
        if (found as u64) < c || (tight && found as u64 != c) {
            report.push(Violation::WrongCount {
                kept: sub.kept,
                found,
                expected: c,
            });
        }
    }
    report
}

/// Sums of one chip per missing edge of `kept`, over all orientations.
pub fn perturbations(g: &Graph, kept: EdgeSet) -> BTreeSet<Multidegree> {
    let mut sums = BTreeSet::from([Multidegree::zeros(g.vertex_count())]);
    for e in kept.complement(g.edge_count()).iter() {
        let [x, y] = g.edges()[e].ends;
        sums = sums
            .iter()
            .flat_map(|d| [d.with_added(x, 1), d.with_added(y, 1)])
            .collect();
    }
    sums
}

/// All lifts of the entries of `a` to the subdivision, in sorted order.
///
/// An entry contributes one lift per choice of an interior vertex on the
/// chain of each missing edge; a missing edge with `m(e) = 0` leaves the
/// entry without lifts.
pub fn lift_assignment(a: &StabilityAssignment, sub: &SubdividedGraph) -> Vec<Multidegree> {
    let n = sub.result.vertex_count();
    let base_pos: Vec<usize> = (0..a.graph.vertex_count()).map(|v| sub.base_vertex(v)).collect();
    let mut out = Vec::new();
    for (kept, d) in a.iter() {
        let mut lifted = Multidegree::zeros(n);
        for (v, &p) in base_pos.iter().enumerate() {
            lifted.0[p] = d[v];
        }
        let mut partial = vec![lifted];
        for e in kept.complement(a.graph.edge_count()).iter() {
            let interior = sub.exceptional(e);
            partial = partial
                .iter()
                .flat_map(|x| interior.iter().map(move |&p| x.with_added(p, 1)))
                .collect();
        }
        out.extend(partial);
    }
    out.sort();
    out
}

/// Lifts form a minimal complete set of representatives on the subdivision.
pub fn verify_lift_theorem(a: &StabilityAssignment, sub: &SubdividedGraph) -> VerificationReport {
    let mut report = VerificationReport::default();
    let lifts = lift_assignment(a, sub);
    let all = sub.result.all_edges();
    let c = sub.result.spanning(all).complexity();
    if lifts.len() as u64 != c {
        report.push(Violation::WrongCount {
            kept: all,
            found: lifts.len(),
            expected: c,
        });
    }
    let jac = Jacobian::new(&sub.result, all).expect("subdivision of a connected graph");
    let mut by_key: BTreeMap<Vec<i64>, &Multidegree> = BTreeMap::new();
    let mut by_reduced: BTreeSet<Multidegree> = BTreeSet::new();
    for d in &lifts {
        let fresh_key = match by_key.insert(jac.class_key(d), d) {
            Some(prev) => {
                report.push(Violation::Equivalent {
                    kept: all,
                    first: prev.clone(),
                    second: d.clone(),
                });
                false
            }
            None => true,
        };
        let fresh_reduced = by_reduced.insert(jac.reduce(d));
        if fresh_key != fresh_reduced {
            report.push(Violation::RouteDisagreement);
        }
    }
    report
}

/// Image of the entry `(kept, d)` under `f`.
pub fn push_forward(
    source: &Graph,
    f: &GraphMorphism,
    target_vertices: usize,
    kept: EdgeSet,
    d: &Multidegree,
) -> (EdgeSet, Multidegree) {
    let mut out = Multidegree::zeros(target_vertices);
    for (v, &w) in f.vertex_map.iter().enumerate() {
        out.0[w] += d[v];
    }
    let missing = kept.complement(source.edge_count());
    for e in missing.intersection(f.contracted).iter() {
        out.0[f.vertex_map[source.edges()[e].ends[0]]] += 1;
    }
    (f.image_of(kept), out)
}

/// Every entry of `src` pushes forward along `f` into `tgt`.
pub fn pushforward_compatible(
    src: &StabilityAssignment,
    tgt: &StabilityAssignment,
    f: &GraphMorphism,
) -> Result<VerificationReport> {
    if src.degree != tgt.degree {
        return Err(Error::WrongDegree {
            expected: src.degree,
            got: tgt.degree,
        });
    }
    let mut report = VerificationReport::default();
    let n = tgt.graph.vertex_count();
    for (kept, d) in src.iter() {
        let (image, image_degree) = push_forward(&src.graph, f, n, kept, d);
        if !tgt.contains(image, &image_degree) {
            report.push(Violation::Incompatible {
                kept,
                degree: d.clone(),
                image,
                image_degree,
            });
        }
    }
    Ok(report)
}

/// The assignment on two vertices joined by `t` edges with parameter `λ`:
/// each tree carries `(λ, d+1-λ-t)` and the rest is the chip-adding closure.
pub fn vine_assignment(t: usize, d: i64, lambda: i64) -> StabilityAssignment {
    let g = crate::graph::families::banana(t);
    let mut seed = StabilityAssignment::new(g.clone(), d);
    for e in 0..t {
        seed.insert(EdgeSet::singleton(e), Multidegree(vec![lambda, d + 1 - lambda - t as i64]))
            .expect("tree value of the right total");
    }
    chip_adding_closure(&seed)
}

/// The unique assignment on a one-vertex graph: `σ(G) = {d - n(G)}`.
pub fn single_vertex_assignment(g: &Graph, d: i64) -> StabilityAssignment {
    assert_eq!(g.vertex_count(), 1);
    let mut a = StabilityAssignment::new(g.clone(), d);
    for sub in g.spanning_subgraphs(true) {
        let total = a.expected_total(sub.kept);
        a.insert(sub.kept, Multidegree(vec![total])).expect("forced value");
    }
    a
}

/// Candidate multidegrees for a spanning tree: every coordinate in
/// `[-window, window]` with the given total. A single vertex has its value
/// forced regardless of the window.
pub fn window_values(n: usize, total: i64, window: i64) -> Vec<Multidegree> {
    if n == 1 {
        return vec![Multidegree(vec![total])];
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fill_window(&mut cur, 0, total, window, &mut out);
    out
}

fn fill_window(cur: &mut Vec<i64>, i: usize, remaining: i64, w: i64, out: &mut Vec<Multidegree>) {
    let n = cur.len();
    if i == n - 1 {
        if (-w..=w).contains(&remaining) {
            cur[i] = remaining;
            out.push(Multidegree(cur.clone()));
        }
        return;
    }
    let left = (n - 1 - i) as i64;
    for x in -w..=w {
        let rest = remaining - x;
        if rest < -w * left || rest > w * left {
            continue;
        }
        cur[i] = x;
        fill_window(cur, i + 1, rest, w, out);
    }
}

/// Partial assignment kept during the search: per subgraph, class key to
/// representative.
#[derive(Clone, Default)]
struct SearchState {
    fibers: BTreeMap<EdgeSet, BTreeMap<Vec<i64>, Multidegree>>,
}

impl SearchState {
    /// Adds `(kept, d)` with its closure; false on a collision or overflow.
    fn add(&mut self, g: &Graph, table: &SubgraphTable, kept: EdgeSet, d: Multidegree) -> bool {
        let mut work = vec![(kept, d)];
        while let Some((k, d)) = work.pop() {
            let key = table.jacobian(k).class_key(&d);
            let fiber = self.fibers.entry(k).or_default();
            match fiber.get(&key) {
                Some(existing) if *existing == d => continue,
                Some(_) => return false,
                None => {}
            }
            fiber.insert(key, d.clone());
            if fiber.len() as u64 > table.complexity(k) {
                return false;
            }
            for e in k.complement(g.edge_count()).iter() {
                let [x, y] = g.edges()[e].ends;
                work.push((k.with(e), d.with_added(x, 1)));
                if x != y {
                    work.push((k.with(e), d.with_added(y, 1)));
                }
            }
        }
        true
    }

    fn complete(&self, table: &SubgraphTable) -> bool {
        table
            .connected
            .iter()
            .all(|k| self.fibers.get(k).map_or(0, BTreeMap::len) as u64 == table.complexity(*k))
    }

    fn into_assignment(self, g: &Graph, d: i64) -> StabilityAssignment {
        let mut a = StabilityAssignment::new(g.clone(), d);
        for (k, fiber) in self.fibers {
            for x in fiber.into_values() {
                a.insert(k, x).expect("search keeps totals");
            }
        }
        a
    }
}

/// All stability assignments of degree `d` whose spanning-tree values have
/// every coordinate in `[-window, window]`.
pub fn enumerate_assignments(g: &Graph, d: i64, window: i64) -> Result<Vec<StabilityAssignment>> {
    if window < 0 {
        return Err(Error::OutOfRange("window must be non-negative".into()));
    }
    if !g.is_connected() {
        return Ok(Vec::new());
    }
    let table = SubgraphTable::new(g);
    let trees = g.whole().spanning_trees();
    let n = g.vertex_count();
    let candidates: Vec<Vec<Multidegree>> = trees
        .iter()
        .map(|&t| window_values(n, d - (g.edge_count() - t.len()) as i64, window))
        .collect();
    let mut found = BTreeSet::new();
    search_trees(g, &table, &trees, &candidates, 0, SearchState::default(), &mut |state| {
        let a = state.into_assignment(g, d);
        debug_assert!(is_stability_assignment(&a));
        found.insert(a);
    });
    Ok(found.into_iter().collect())
}

fn search_trees(
    g: &Graph,
    table: &SubgraphTable,
    trees: &[EdgeSet],
    candidates: &[Vec<Multidegree>],
    i: usize,
    state: SearchState,
    emit: &mut dyn FnMut(SearchState),
) {
    if i == trees.len() {
        if state.complete(table) {
            emit(state);
        }
        return;
    }
    let t = trees[i];
    // a tree already reached by the closure has its value forced
    if let Some(fiber) = state.fibers.get(&t) {
        if !fiber.is_empty() {
            search_trees(g, table, trees, candidates, i + 1, state, emit);
            return;
        }
    }
    for value in &candidates[i] {
        let mut next = state.clone();
        if next.add(g, table, t, value.clone()) {
            search_trees(g, table, trees, candidates, i + 1, next, emit);
        }
    }
}
