//! Chip-firing on spanning subgraphs: twisters, the Jacobian group,
//! equivalence of multidegrees and base-reduced representatives.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::bitset::{all_subsets, EdgeSet, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph, SpanningSubgraph};
use crate::linalg;

/// Integer values on the vertices of a graph, indexed like its vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zeros(n);
        d.0[v] = 1;
        d
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn with_added(&self, v: usize, k: i64) -> Self {
        let mut d = self.clone();
        d.0[v] += k;
        d
    }

    pub fn sum_over(&self, vs: VertexSet) -> i64 {
        vs.iter().map(|v| self.0[v]).sum()
    }
}

impl From<Vec<i64>> for Multidegree {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for Multidegree {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Multidegree {
    type Output = Multidegree;
    fn sub(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// The twister `tw_{G,v}`: what the other vertices gain when `v` fires.
///
/// Off-diagonal entries count edges of `G` between `v` and `w`, the entry at
/// `v` is minus the number of non-loop edges at `v`.
pub fn twister_vector(sub: &SpanningSubgraph<'_>, v: usize) -> Result<Multidegree> {
    let g = sub.graph;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(alloc::format!("#{v}")));
    }
    let lap = laplacian(g, sub.kept);
    Ok(Multidegree(lap[v].iter().map(|x| -x).collect()))
}

/// Loop-free edge multiplicities of the spanning subgraph on `kept`.
fn adjacency(g: &Graph, kept: EdgeSet) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0i64; n]; n];
    for e in kept.iter() {
        let [x, y] = g.edges()[e].ends;
        if x != y {
            a[x][y] += 1;
            a[y][x] += 1;
        }
    }
    a
}

/// The Jacobian `J^0(G)` of a connected spanning subgraph, with enough Smith
/// data to read off the class of any multidegree.
#[derive(Clone, Debug)]
pub struct Jacobian {
    pub base: usize,
    /// Smith diagonal of the reduced Laplacian; the product is `c(G)`.
    pub invariant_factors: Vec<BigInt>,
    /// Rows of the left Smith transform reduced modulo factors above 1.
    rows: Vec<(Vec<i64>, i64)>,
    adj: Vec<Vec<i64>>,
    order: u64,
}

impl Jacobian {
    /// Builds the group of the spanning subgraph on `kept`, based at vertex 0.
    pub fn new(g: &Graph, kept: EdgeSet) -> Result<Self> {
        if !g.is_connected_with(kept) {
            return Err(Error::Disconnected);
        }
        let n = g.vertex_count();
        let base = 0;
        let lap = laplacian(g, kept);
        let reduced: Vec<Vec<i64>> = (0..n)
            .filter(|&i| i != base)
            .map(|i| (0..n).filter(|&j| j != base).map(|j| lap[i][j]).collect())
            .collect();
        let smith = linalg::smith_normal_form(&reduced);
        let mut rows = Vec::new();
        let mut order = 1u64;
        for (i, s) in smith.diagonal.iter().enumerate() {
            let s64 = s.to_i64().expect("invariant factor fits in i64");
            order *= s64 as u64;
            if s64 > 1 {
                let row = smith.left[i]
                    .iter()
                    .map(|x| x.mod_floor(s).to_i64().expect("reduced entry"))
                    .collect();
                rows.push((row, s64));
            }
        }
        Ok(Self {
            base,
            invariant_factors: smith.diagonal,
            rows,
            adj: adjacency(g, kept),
            order,
        })
    }

    pub fn from_subgraph(sub: &SpanningSubgraph<'_>) -> Result<Self> {
        Self::new(sub.graph, sub.kept)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Nontrivial invariant factors, e.g. `[3]` for a cyclic group of order 3.
    pub fn nontrivial_factors(&self) -> Vec<i64> {
        self.rows.iter().map(|(_, s)| *s).collect()
    }

    /// Coordinates of the class of `d` in `⊕ Z/s_i`. Two multidegrees of
    /// equal total are equivalent iff their keys agree.
    pub fn class_key(&self, d: &Multidegree) -> Vec<i64> {
        let x: Vec<i64> = (0..d.len()).filter(|&j| j != self.base).map(|j| d[j]).collect();
        self.rows
            .iter()
            .map(|(row, s)| {
                let acc: i128 = row.iter().zip(&x).map(|(&u, &v)| u as i128 * v as i128).sum();
                acc.rem_euclid(*s as i128) as i64
            })
            .collect()
    }

    /// Equivalence under the twister group.
    pub fn equivalent(&self, d1: &Multidegree, d2: &Multidegree) -> bool {
        if d1.len() != d2.len() || d1.total() != d2.total() {
            return false;
        }
        let by_key = self.class_key(d1) == self.class_key(d2);
        debug_assert_eq!(by_key, self.reduce(d1) == self.reduce(d2), "Smith and Dhar routes disagree");
        by_key
    }

    /// The unique `base`-reduced divisor equivalent to `d`.
    pub fn reduce(&self, d: &Multidegree) -> Multidegree {
        reduce_with(&self.adj, d, self.base)
    }

    pub fn reduce_at(&self, d: &Multidegree, base: usize) -> Multidegree {
        reduce_with(&self.adj, d, base)
    }
}

fn fire(adj: &[Vec<i64>], d: &mut [i64], v: usize, times: i64) {
    for (w, &m) in adj[v].iter().enumerate() {
        if w != v && m != 0 {
            d[w] += m * times;
            d[v] -= m * times;
        }
    }
}

fn reduce_with(adj: &[Vec<i64>], d: &Multidegree, base: usize) -> Multidegree {
    let n = adj.len();
    let mut x = d.0.clone();

    // breadth-first tree from the base; push chips outward so that every
    // non-base vertex is non-negative
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([base]);
    depth[base] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in 0..n {
            if adj[v][w] > 0 && depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    for &v in order.iter().rev() {
        if v == base || x[v] >= 0 {
            continue;
        }
        let p = parent[v];
        let m = adj[p][v];
        let times = (-x[v] + m - 1) / m;
        fire(adj, &mut x, p, times);
    }

    // Dhar burning: fire the unburnt set as long as it exists
    loop {
        let mut burnt = vec![false; n];
        burnt[base] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if burnt[v] {
                    continue;
                }
                let heat: i64 = (0..n).filter(|&w| burnt[w]).map(|w| adj[v][w]).sum();
                if heat > x[v] {
                    burnt[v] = true;
                    changed = true;
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            return Multidegree(x);
        }
        let mut times = i64::MAX;
        for v in (0..n).filter(|&v| !burnt[v]) {
            let out: i64 = (0..n).filter(|&w| burnt[w]).map(|w| adj[v][w]).sum();
            if out > 0 {
                times = times.min(x[v] / out);
            }
        }
        debug_assert!((1..i64::MAX).contains(&times));
        for v in (0..n).filter(|&v| !burnt[v]) {
            fire(adj, &mut x, v, times);
        }
    }
}

/// Equivalence of two multidegrees on a connected spanning subgraph.
pub fn equivalent(sub: &SpanningSubgraph<'_>, d1: &Multidegree, d2: &Multidegree) -> Result<bool> {
    Ok(Jacobian::from_subgraph(sub)?.equivalent(d1, d2))
}

/// Base-reduced representative of `d` on a connected spanning subgraph.
pub fn reduce(sub: &SpanningSubgraph<'_>, d: &Multidegree, base: usize) -> Result<Multidegree> {
    Ok(Jacobian::from_subgraph(sub)?.reduce_at(d, base))
}

/// Sufficient test for inequivalence on the whole graph `g`: every cut
/// `W | W^c` with both sides connected carries fewer crossing edges than the
/// absolute difference of the two multidegrees on `W`.
pub fn separation_certificate(g: &Graph, d1: &Multidegree, d2: &Multidegree) -> bool {
    let n = g.vertex_count();
    let all = g.all_vertices();
    let diff = d1 - d2;
    for bits in all_subsets(n) {
        let w = VertexSet::from_bits(bits);
        if w.is_empty() || w == all {
            continue;
        }
        if !g.induced_connected(w) || !g.induced_connected(w.complement(n)) {
            continue;
        }
        let (_, _, crossing) = g.cut_partition_unchecked(w);
        if diff.sum_over(w).abs() >= crossing.len() as i64 {
            return false;
        }
    }
    true
}

/// Bulk helper: whether the multidegrees are pairwise inequivalent.
pub fn pairwise_inequivalent<'a, I>(jac: &Jacobian, ds: I) -> bool
where
    I: IntoIterator<Item = &'a Multidegree>,
{
    let mut seen = alloc::collections::BTreeSet::new();
    for d in ds {
        if !seen.insert((d.total(), jac.class_key(d))) {
            return false;
        }
    }
    true
}
