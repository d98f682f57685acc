//! The desk-scale acceptance suite, shared by the `acceptance` test target
//! and `jacstab corpus verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use jacstab_core::assignment::{
    barmak_check, chip_adding_closure, enumerate_assignments, is_stability_assignment, lift_assignment,
    verify_condition_one, verify_condition_two_with, verify_lift_theorem, vine_assignment, SubgraphTable,
};
use jacstab_core::chip::pairwise_inequivalent;
use jacstab_core::polarization::{
    assignment_from_polarization, break_divisors, canonical_polarization, ibd_assignment, ibd_polarization,
    is_nondegenerate, random_nondegenerate,
};
use jacstab_core::universal::{enumerate_stable_graphs, gcd_obstruction, universal_search_in};
use jacstab_core::{EdgeSet, Graph, Jacobian, Multidegree, StabilityAssignment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::Corpus;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
    pub elapsed: Duration,
    pub bound: Option<Duration>,
}

impl Outcome {
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.pass && self.within_bound()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} {}: {verdict} in {:.2}s",
            self.id,
            self.name,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(b) = self.bound {
            write!(f, " (bound {}s)", b.as_secs())?;
        }
        write!(f, "; {}", self.summary)
    }
}

type Check = fn(&Corpus) -> (bool, String);

pub const CRITERIA: [(u8, &str, Option<u64>, Check); 8] = [
    (1, "kirchhoff", Some(60), kirchhoff),
    (2, "polarization-soundness", Some(120), polarization_soundness),
    (3, "vine-classification", None, vine_classification),
    (4, "break-divisors", None, break_divisor_check),
    (5, "lift", Some(300), lift_check),
    (6, "genus-two-universal", Some(600), genus_two_universal),
    (7, "gcd-criterion", None, gcd_criterion),
    (8, "closure-bounds", None, closure_bounds),
];

pub fn run(id: u8, corpus: &Corpus) -> Outcome {
    let (id, name, bound, check) = CRITERIA[usize::from(id) - 1];
    let start = Instant::now();
    let (pass, summary) = check(corpus);
    Outcome {
        id,
        name,
        pass,
        summary,
        elapsed: start.elapsed(),
        bound: bound.map(Duration::from_secs),
    }
}

pub fn run_all(corpus: &Corpus) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0, corpus)).collect()
}

/// Every connected multigraph (loops allowed) with `1..=max_v` vertices and
/// at most `max_e` edges, one per edge multiset.
pub fn small_multigraphs(max_v: usize, max_e: usize) -> Vec<Graph> {
    fn grow(kinds: &[(usize, usize)], from: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for k in from..kinds.len() {
            cur.push(k);
            grow(kinds, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut graphs = Vec::new();
    for n in 1..=max_v {
        let kinds: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let mut multisets = Vec::new();
        grow(&kinds, 0, max_e, &mut Vec::new(), &mut multisets);
        for ms in multisets {
            let mut b = Graph::builder();
            for v in 0..n {
                b = b.vertex(format!("v{v}"), 0);
            }
            for (i, &k) in ms.iter().enumerate() {
                let (x, y) = kinds[k];
                b = b.edge(format!("e{i}"), format!("v{x}"), format!("v{y}"));
            }
            let g = b.build().expect("valid multigraph");
            if g.is_connected() {
                graphs.push(g);
            }
        }
    }
    graphs
}

fn kirchhoff(_: &Corpus) -> (bool, String) {
    let graphs = small_multigraphs(4, 6);
    let bad: Vec<usize> = graphs
        .par_iter()
        .enumerate()
        .filter(|(_, g)| {
            let whole = g.whole();
            let snf = Jacobian::new(g, g.all_edges()).expect("connected").order();
            let det = whole.complexity();
            let brute = whole.complexity_by_enumeration();
            !(snf == det && det == brute)
        })
        .map(|(i, _)| i)
        .collect();
    (bad.is_empty(), format!("{} graphs, {} disagreements", graphs.len(), bad.len()))
}

fn satisfies_both(a: &StabilityAssignment, table: &SubgraphTable) -> bool {
    verify_condition_one(a).passed() && verify_condition_two_with(a, table).passed()
}

const SEEDS_PER_GRAPH: u64 = 6;

fn polarization_soundness(corpus: &Corpus) -> (bool, String) {
    let jobs: Vec<(usize, u64)> = (0..corpus.graphs.len())
        .flat_map(|i| (0..SEEDS_PER_GRAPH).map(move |s| (i, s)))
        .collect();
    let tables: Vec<SubgraphTable> = corpus.graphs.par_iter().map(|(_, g)| SubgraphTable::new(g)).collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(i, s)| {
            let (name, g) = &corpus.graphs[i];
            let d = s as i64 - 2;
            let seed = 1000 * i as u64 + s;
            let phi = match random_nondegenerate(g, d, seed, 500) {
                Ok(phi) => phi,
                Err(e) => return Some(format!("{name} seed {seed}: {e}")),
            };
            match assignment_from_polarization(g, &phi) {
                Ok(a) if satisfies_both(&a, &tables[i]) => None,
                Ok(_) => Some(format!("{name} seed {seed}: conditions fail")),
                Err(e) => Some(format!("{name} seed {seed}: {e}")),
            }
        })
        .collect();
    let summary = format!("{} polarizations, {} failures {:?}", jobs.len(), failures.len(), failures);
    (jobs.len() >= 100 && failures.is_empty(), summary)
}

fn vine_family_ok(a: &StabilityAssignment, t: usize) -> bool {
    let all = a.graph.all_edges();
    let firsts: Vec<i64> = a.fiber(all).map(|d| d[0]).collect();
    let consecutive = firsts.len() == t && firsts.windows(2).all(|w| w[1] == w[0] + 1);
    let trees: BTreeSet<&Multidegree> = (0..t).flat_map(|e| a.fiber(EdgeSet::singleton(e))).collect();
    consecutive && trees.len() == 1
}

fn vine_classification(_: &Corpus) -> (bool, String) {
    const W: i64 = 10;
    let mut ok = true;
    let mut notes = Vec::new();
    for t in 1..=5usize {
        for d in 0..=1i64 {
            let g = jacstab_core::graph::families::banana(t);
            let found: BTreeSet<StabilityAssignment> = enumerate_assignments(&g, d, W)
                .expect("window is non-negative")
                .into_iter()
                .collect();
            let expected: BTreeSet<StabilityAssignment> = (-W..=W)
                .filter(|&l| (-W..=W).contains(&(d + 1 - l - t as i64)))
                .map(|l| vine_assignment(t, d, l))
                .collect();
            let shapes = found.iter().all(|a| vine_family_ok(a, t));
            if found != expected || !shapes {
                ok = false;
            }
            notes.push(format!("t={t} d={d}: {}", found.len()));
        }
    }
    (ok, notes.join(", "))
}

fn break_divisor_check(corpus: &Corpus) -> (bool, String) {
    let mut failures = Vec::new();
    for (name, g) in &corpus.graphs {
        let counts_ok = g
            .spanning_subgraphs(true)
            .iter()
            .all(|s| break_divisors(g, s.kept).map(|b| b.len() as u64) == Ok(s.complexity()));
        if !counts_ok {
            failures.push(format!("{name}: counts"));
        }
        let ibd = ibd_assignment(g).expect("connected");
        if !is_stability_assignment(&ibd) {
            failures.push(format!("{name}: conditions"));
        }
        let from_phi = ibd_polarization(g).and_then(|phi| assignment_from_polarization(g, &phi));
        if from_phi.as_ref() != Ok(&ibd) {
            failures.push(format!("{name}: differs from polarization"));
        }
    }
    let summary = format!("{} graphs, failures {:?}", corpus.graphs.len(), failures);
    (failures.is_empty(), summary)
}

/// Complexity of the subdivision from the spanning subgraphs of the base.
pub fn blow_up_complexity(g: &Graph, m: &[u32]) -> u64 {
    g.spanning_subgraphs(true)
        .iter()
        .map(|s| s.missing().iter().map(|e| u64::from(m[e])).product::<u64>() * s.complexity())
        .sum()
}

fn ternary(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..3).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn lift_check(corpus: &Corpus) -> (bool, String) {
    let mut jobs = Vec::new();
    for (i, (name, g)) in corpus.graphs.iter().enumerate() {
        let d = (i % 3) as i64 - 1;
        let phi = random_nondegenerate(g, d, 7000 + i as u64, 500).expect("nondegenerate polarization");
        let sources = [
            ibd_assignment(g).expect("connected"),
            assignment_from_polarization(g, &phi).expect("nondegenerate"),
        ];
        for a in sources {
            for m in ternary(g.edge_count()) {
                jobs.push((name.as_str(), a.clone(), m));
            }
        }
    }
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, a, m)| {
            let sub = a.graph.subdivide(m).expect("one value per edge");
            let lifts = lift_assignment(a, &sub);
            let whole = sub.result.whole();
            let c = whole.complexity();
            let jac = Jacobian::new(&sub.result, sub.result.all_edges()).expect("connected");
            let reduced: BTreeSet<Multidegree> = lifts.iter().map(|x| jac.reduce(x)).collect();
            let ok = lifts.len() as u64 == c
                && c == blow_up_complexity(&a.graph, m)
                && pairwise_inequivalent(&jac, &lifts)
                && reduced.len() == lifts.len()
                && verify_lift_theorem(a, &sub).passed();
            (!ok).then(|| format!("{name} m={m:?}"))
        })
        .collect();
    let summary = format!("{} lifts, failures {:?}", jobs.len(), failures);
    (failures.is_empty(), summary)
}

fn genus_two_universal(_: &Corpus) -> (bool, String) {
    const W: i64 = 6;
    let cat = enumerate_stable_graphs(2, 0).expect("genus 2");
    let smooth_like = cat.without_separating_edges();
    let mut ok = cat.objects.len() == 7;
    let mut notes = Vec::new();
    for d in 0..=3i64 {
        let search = universal_search_in(&cat, d, W).expect("search runs");
        let unobstructed = !gcd_obstruction(2, d).expect("genus 2");
        let mut agrees = true;
        if unobstructed {
            for r in &search.results {
                for &i in &smooth_like {
                    let o = &cat.objects[i];
                    let canonical = canonical_polarization(o, d).and_then(|phi| assignment_from_polarization(o, &phi));
                    agrees &= canonical.as_ref() == Ok(&r.per_object[i]);
                }
            }
        }
        ok &= (!search.results.is_empty()) == unobstructed && agrees;
        notes.push(format!("d={d}: {} results", search.results.len()));
    }
    (ok, notes.join(", "))
}

fn gcd_criterion(corpus: &Corpus) -> (bool, String) {
    let mut ok = true;
    let mut checked = 0;
    for name in ["gsym2", "gsym3", "theta", "dumbbell"] {
        let g = corpus.graph(name).expect("corpus graph");
        let genus = i64::from(g.graph_genus().expect("connected"));
        for d in 0..=5i64 {
            let phi = canonical_polarization(g, d).expect("genus at least 2");
            let nondegenerate = is_nondegenerate(g, &phi).expect("shapes match");
            let coprime = num_integer::gcd(d - genus + 1, 2 * genus - 2) == 1;
            ok &= nondegenerate == coprime;
            checked += 1;
        }
    }
    (ok, format!("{checked} cases"))
}

/// A seed with between one and three values on every spanning tree.
fn random_tree_seed(g: &Graph, d: i64, rng: &mut ChaCha8Rng) -> StabilityAssignment {
    let n = g.vertex_count();
    let mut seed = StabilityAssignment::new(g.clone(), d);
    for t in g.whole().spanning_trees() {
        let total = seed.expected_total(t);
        for _ in 0..rng.gen_range(1..=3) {
            let mut v: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
            v.push(total - v.iter().sum::<i64>());
            seed.insert(t, Multidegree(v)).expect("right total");
        }
    }
    seed
}

/// The restriction of a stability assignment to its spanning trees.
fn tree_part(a: &StabilityAssignment) -> StabilityAssignment {
    let mut seed = StabilityAssignment::new(a.graph.clone(), a.degree);
    for t in a.graph.whole().spanning_trees() {
        for d in a.fiber(t) {
            seed.insert(t, d.clone()).expect("entry of a");
        }
    }
    seed
}

fn closure_bounds(corpus: &Corpus) -> (bool, String) {
    const RUNS: u64 = 50;
    let jobs: Vec<(usize, u64)> = (0..corpus.graphs.len())
        .flat_map(|i| (0..RUNS).map(move |s| (i, s)))
        .collect();
    let results: Vec<(bool, bool)> = jobs
        .par_iter()
        .map(|&(i, s)| {
            let g = &corpus.graphs[i].1;
            let mut rng = ChaCha8Rng::seed_from_u64(90_000 + 100 * i as u64 + s);
            let d = rng.gen_range(-2..=2);
            let seed = if s % 5 == 0 {
                let phi = random_nondegenerate(g, d, rng.gen(), 500).expect("nondegenerate polarization");
                tree_part(&assignment_from_polarization(g, &phi).expect("nondegenerate"))
            } else {
                random_tree_seed(g, d, &mut rng)
            };
            let closed = chip_adding_closure(&seed);
            let tight = closed.fiber_len(g.all_edges()) as u64 == g.whole().complexity();
            (barmak_check(&closed).passed(), tight)
        })
        .collect();
    let failures = results.iter().filter(|r| !r.0).count();
    let tight = results.iter().filter(|r| r.1).count();
    let summary = format!("{} closures, {tight} tight at the whole graph, {failures} failures", results.len());
    (failures == 0, summary)
}
