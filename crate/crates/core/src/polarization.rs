//! Numerical polarizations: rational vertex weights, the cut inequality,
//! nondegeneracy, induced assignments, the canonical and break-divisor
//! polarizations.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::StabilityAssignment;
use crate::bitset::{all_subsets, EdgeSet, VertexSet};
use crate::chip::Multidegree;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Rational = Ratio<i64>;

/// Rational weights on the vertices of a graph, indexed like its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polarization {
    pub values: Vec<Rational>,
}

impl Polarization {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub fn total(&self) -> Rational {
        self.values.iter().copied().sum()
    }

    /// The total as an integer degree.
    pub fn degree(&self) -> Result<i64> {
        let t = self.total();
        if t.is_integer() {
            Ok(t.to_integer())
        } else {
            Err(Error::NonIntegralTotal)
        }
    }

    fn common_denominator(&self) -> i64 {
        self.values.iter().fold(1, |l, x| l.lcm(x.denom()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable,
    StrictlySemistable { witness: VertexSet },
    Unstable { witness: VertexSet },
}

impl StabilityVerdict {
    pub fn is_semistable(&self) -> bool {
        !matches!(self, StabilityVerdict::Unstable { .. })
    }
}

/// Integer form of the cut inequality, scaled by twice the common
/// denominator of `phi`.
struct Scaled {
    l: i128,
    a: Vec<i128>,
}

impl Scaled {
    fn new(phi: &Polarization) -> Self {
        let l = phi.common_denominator();
        let a = phi
            .values
            .iter()
            .map(|x| (*x.numer() as i128) * (l / x.denom()) as i128)
            .collect();
        Self { l: l as i128, a }
    }

    /// Left side inside the absolute value and the right side, both times `2L`.
    fn sides(&self, g: &Graph, kept: EdgeSet, d: &Multidegree, vs: VertexSet) -> (i128, i128) {
        let (inside, _, crossing) = g.cut_partition_unchecked(vs);
        let missing = kept.complement(g.edge_count());
        let sum: i128 = vs.iter().map(|v| 2 * self.l * d[v] as i128 - 2 * self.a[v]).sum();
        let lhs = sum
            + 2 * self.l * missing.intersection(inside).len() as i128
            + self.l * missing.intersection(crossing).len() as i128;
        let rhs = self.l * kept.intersection(crossing).len() as i128;
        (lhs, rhs)
    }
}

fn check_shapes(g: &Graph, phi: &Polarization) -> Result<i64> {
    if phi.values.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: phi.values.len(),
        });
    }
    phi.degree()
}

fn verdict(scaled: &Scaled, g: &Graph, kept: EdgeSet, d: &Multidegree) -> StabilityVerdict {
    let n = g.vertex_count();
    let all = g.all_vertices();
    let mut tight = None;
    for bits in all_subsets(n) {
        let vs = VertexSet::from_bits(bits);
        if vs.is_empty() || vs == all {
            continue;
        }
        let (lhs, rhs) = scaled.sides(g, kept, d, vs);
        if lhs.abs() > rhs {
            return StabilityVerdict::Unstable { witness: vs };
        }
        if lhs.abs() == rhs && tight.is_none() {
            tight = Some(vs);
        }
    }
    match tight {
        Some(witness) => StabilityVerdict::StrictlySemistable { witness },
        None => StabilityVerdict::Stable,
    }
}

/// Stability of `d` on the spanning subgraph `kept` with respect to `phi`.
pub fn classify(g: &Graph, phi: &Polarization, kept: EdgeSet, d: &Multidegree) -> Result<StabilityVerdict> {
    let total = check_shapes(g, phi)?;
    if d.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: d.len(),
        });
    }
    let expected = total - (g.edge_count() - kept.len()) as i64;
    if d.total() != expected {
        return Err(Error::WrongDegree {
            expected,
            got: d.total(),
        });
    }
    Ok(verdict(&Scaled::new(phi), g, kept, d))
}

/// Integer box `[ceil(phi) - val - 1, floor(phi) + val + 1]` around `phi`;
/// every semistable multidegree lies inside.
pub fn enumeration_box(g: &Graph, phi: &Polarization, margin: i64) -> Vec<(i64, i64)> {
    (0..g.vertex_count())
        .map(|v| {
            let val = g.valence(v) as i64;
            let x = phi.values[v];
            (x.ceil().to_integer() - val - margin, x.floor().to_integer() + val + margin)
        })
        .collect()
}

/// Multidegrees inside `bounds` with the given total.
pub fn box_points(bounds: &[(i64, i64)], total: i64) -> Vec<Multidegree> {
    let mut out = Vec::new();
    if bounds.is_empty() {
        return out;
    }
    let mut suffix_min = vec![0i64; bounds.len() + 1];
    let mut suffix_max = vec![0i64; bounds.len() + 1];
    for i in (0..bounds.len()).rev() {
        suffix_min[i] = suffix_min[i + 1] + bounds[i].0;
        suffix_max[i] = suffix_max[i + 1] + bounds[i].1;
    }
    let mut cur = vec![0i64; bounds.len()];
    fill_box(bounds, &suffix_min, &suffix_max, 0, total, &mut cur, &mut out);
    out
}

fn fill_box(
    bounds: &[(i64, i64)],
    smin: &[i64],
    smax: &[i64],
    i: usize,
    remaining: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<Multidegree>,
) {
    if i == bounds.len() {
        if remaining == 0 {
            out.push(Multidegree(cur.clone()));
        }
        return;
    }
    let (lo, hi) = bounds[i];
    for x in lo..=hi {
        let rest = remaining - x;
        if rest < smin[i + 1] || rest > smax[i + 1] {
            continue;
        }
        cur[i] = x;
        fill_box(bounds, smin, smax, i + 1, rest, cur, out);
    }
}

fn semistable_in_box(g: &Graph, phi: &Polarization, kept: EdgeSet, margin: i64) -> Result<Vec<(Multidegree, StabilityVerdict)>> {
    let total = check_shapes(g, phi)? - (g.edge_count() - kept.len()) as i64;
    let scaled = Scaled::new(phi);
    Ok(box_points(&enumeration_box(g, phi, margin), total)
        .into_iter()
        .filter_map(|d| {
            let v = verdict(&scaled, g, kept, &d);
            v.is_semistable().then_some((d, v))
        })
        .collect())
}

/// All `phi`-semistable multidegrees on the spanning subgraph `kept`.
pub fn semistable_set(g: &Graph, phi: &Polarization, kept: EdgeSet) -> Result<BTreeSet<Multidegree>> {
    semistable_set_with_margin(g, phi, kept, 1)
}

pub fn semistable_set_with_margin(g: &Graph, phi: &Polarization, kept: EdgeSet, margin: i64) -> Result<BTreeSet<Multidegree>> {
    Ok(semistable_in_box(g, phi, kept, margin)?.into_iter().map(|(d, _)| d).collect())
}

/// A strictly semistable point: subgraph, multidegree and tight subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyWitness {
    pub kept: EdgeSet,
    pub degree: Multidegree,
    pub subset: VertexSet,
}

/// A strictly semistable point over all spanning subgraphs, connected or
/// not. Larger subgraphs are searched first.
pub fn degeneracy_witness(g: &Graph, phi: &Polarization) -> Result<Option<DegeneracyWitness>> {
    check_shapes(g, phi)?;
    let mut subs = g.spanning_subgraphs(false);
    subs.sort_by_key(|s| core::cmp::Reverse(s.kept.len()));
    for sub in subs {
        for (d, v) in semistable_in_box(g, phi, sub.kept, 1)? {
            if let StabilityVerdict::StrictlySemistable { witness } = v {
                return Ok(Some(DegeneracyWitness {
                    kept: sub.kept,
                    degree: d,
                    subset: witness,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_nondegenerate(g: &Graph, phi: &Polarization) -> Result<bool> {
    Ok(degeneracy_witness(g, phi)?.is_none())
}

/// `σ_φ`: semistable multidegrees on every connected spanning subgraph.
pub fn assignment_from_polarization(g: &Graph, phi: &Polarization) -> Result<StabilityAssignment> {
    if !is_nondegenerate(g, phi)? {
        return Err(Error::Degenerate);
    }
    induced_assignment(g, phi)
}

/// Like [`assignment_from_polarization`] without the nondegeneracy check.
pub fn induced_assignment(g: &Graph, phi: &Polarization) -> Result<StabilityAssignment> {
    let d = check_shapes(g, phi)?;
    let mut a = StabilityAssignment::new(g.clone(), d);
    for sub in g.spanning_subgraphs(true) {
        for x in semistable_set(g, phi, sub.kept)? {
            a.insert(sub.kept, x)?;
        }
    }
    Ok(a)
}

/// `d/(2g-2) · (2g(v) - 2 + val(v))`.
pub fn canonical_polarization(g: &Graph, d: i64) -> Result<Polarization> {
    let genus = g.graph_genus()? as i64;
    let denom = 2 * genus - 2;
    if denom == 0 {
        return Err(Error::GenusOne);
    }
    Ok(Polarization::new(
        (0..g.vertex_count())
            .map(|v| {
                let w = 2 * g.genus_of(v) as i64 - 2 + g.valence(v) as i64;
                Rational::new(d * w, denom)
            })
            .collect(),
    ))
}

/// `(g+|V|)/(2(g+|V|)-2) · (2g(v) + val(v)) - 1`, of total `g`.
///
/// A single vertex of genus 0 makes the factor `0/0`; there the only
/// polarization of total `g` is `(0)`.
pub fn ibd_polarization(g: &Graph) -> Result<Polarization> {
    let genus = g.graph_genus()? as i64;
    let k = genus + g.vertex_count() as i64;
    if 2 * k - 2 == 0 {
        return Ok(Polarization::from_integers(&[genus]));
    }
    Ok(Polarization::new(
        (0..g.vertex_count())
            .map(|v| {
                let w = 2 * g.genus_of(v) as i64 + g.valence(v) as i64;
                Rational::new(k * w, 2 * k - 2) - 1
            })
            .collect(),
    ))
}

/// Break divisors of the connected spanning subgraph `kept`: genus labels
/// plus one chip per edge outside a spanning tree, at either end.
pub fn break_divisors(g: &Graph, kept: EdgeSet) -> Result<BTreeSet<Multidegree>> {
    if !g.is_connected_with(kept) {
        return Err(Error::Disconnected);
    }
    let base = Multidegree((0..g.vertex_count()).map(|v| g.genus_of(v) as i64).collect());
    let mut out = BTreeSet::new();
    for tree in g.spanning(kept).spanning_trees() {
        let mut sums = BTreeSet::from([base.clone()]);
        for e in kept.difference(tree).iter() {
            let [x, y] = g.edges()[e].ends;
            sums = sums
                .iter()
                .flat_map(|d| [d.with_added(x, 1), d.with_added(y, 1)])
                .collect();
        }
        out.extend(sums);
    }
    Ok(out)
}

/// `σ_IBD`: break divisors on every connected spanning subgraph, degree `g(Γ)`.
pub fn ibd_assignment(g: &Graph) -> Result<StabilityAssignment> {
    let genus = g.graph_genus()? as i64;
    let mut a = StabilityAssignment::new(g.clone(), genus);
    for sub in g.spanning_subgraphs(true) {
        for d in break_divisors(g, sub.kept)? {
            a.insert(sub.kept, d)?;
        }
    }
    Ok(a)
}

const PRIMES: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// A seeded random nondegenerate polarization of total `d`.
///
/// Values have denominator `2·|E|·p` for a prime `p` drawn from the seed; the
/// last coordinate absorbs the total. Gives up after `budget` draws.
pub fn random_nondegenerate(g: &Graph, d: i64, seed: u64, budget: u32) -> Result<Polarization> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("empty graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let denom = 2 * g.edge_count().max(1) as i64 * p;
        let spread = denom * (d.abs() + 2);
        let mut values: Vec<Rational> = (0..n - 1)
            .map(|_| Rational::new(rng.gen_range(-spread..=spread), denom))
            .collect();
        let rest: Rational = values.iter().copied().sum();
        values.push(Rational::from_integer(d) - rest);
        let phi = Polarization::new(values);
        if is_nondegenerate(g, &phi)? {
            return Ok(phi);
        }
    }
    Err(Error::BudgetExhausted(budget))
}
