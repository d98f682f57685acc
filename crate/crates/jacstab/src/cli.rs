//! Command-line driver. [`run`] maps an argument vector to captured output
//! and an exit code: 0 pass, 1 verified failure, 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use jacstab_core::assignment::{
    enumerate_assignments, lift_assignment, verify_condition_one, verify_condition_two, verify_lift_theorem,
    VerificationReport,
};
use jacstab_core::polarization::{
    assignment_from_polarization, break_divisors, degeneracy_witness, ibd_assignment, ibd_polarization,
};
use jacstab_core::universal::universal_search;
use jacstab_core::{EdgeSet, Graph, Jacobian, Multidegree, StabilityAssignment, Violation};
use serde_json::{json, Value};

use crate::acceptance;
use crate::corpus::{self, Corpus};
use crate::io::{self, AssignmentDocument, DocError, UniversalDocument};
use crate::report::{digest, Finding, Report};

#[derive(Debug, Parser)]
#[command(name = "jacstab", version, about = "Stability assignments on dual graphs")]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record the wall-clock runtime in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spanning-tree counts by determinant and by enumeration.
    Complexity {
        #[arg(long)]
        graph: PathBuf,
        /// Every connected spanning subgraph instead of the whole graph.
        #[arg(long)]
        all: bool,
    },
    /// Invariant factors and order of the Jacobian of a spanning subgraph.
    Jacobian {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated kept edge ids; defaults to all edges.
        #[arg(long)]
        edges: Option<String>,
    },
    /// The assignment of a nondegenerate polarization.
    Stable {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Verify both conditions on an assignment document.
    Check {
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Break divisors in degree g and their assignment.
    BreakDivisors {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Lift an assignment to a subdivision.
    Lift {
        #[arg(long)]
        assignment: PathBuf,
        /// One count for every edge, or `id=count,...` (missing ids are 0).
        #[arg(long)]
        m: String,
    },
    /// All assignments whose tree values lie in `[-W, W]`.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long)]
        window: i64,
    },
    /// Universal assignments over the stable graphs of type (g, n).
    Universal {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        markings: u32,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long)]
        window: i64,
    },
    /// Fixture corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Check the fixtures and run the acceptance suite.
    Verify {
        /// Corpus directory; defaults to the one shipped with the crate.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Run a single acceptance criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn usage_error(message: impl std::fmt::Display) -> Output {
    Output {
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
        code: 2,
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Output {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    if let Err(e) = configure_threads() {
        return usage_error(e);
    }
    let start = Instant::now();
    let mut report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    if cli.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = io::to_json(&report);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return usage_error(format!("{}: {e}", path.display()));
        }
    }
    Output {
        stdout: text,
        stderr: String::new(),
        code: report.exit_code(),
    }
}

/// Caps the global thread pool at `JACSTAB_THREADS` when set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("JACSTAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("JACSTAB_THREADS must be an integer >= 1, got `{raw}`"))?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Inputs {
    parts: Vec<Vec<u8>>,
}

impl Inputs {
    fn new(command: &str) -> Self {
        Self {
            parts: vec![command.as_bytes().to_vec()],
        }
    }

    fn file(&mut self, path: &Path) -> Result<String, DocError> {
        let text = io::read_file(path)?;
        self.parts.push(text.as_bytes().to_vec());
        Ok(text)
    }

    fn value(&mut self, v: impl ToString) {
        self.parts.push(v.to_string().into_bytes());
    }

    fn digest(&self) -> String {
        digest(self.parts.iter().map(Vec::as_slice))
    }
}

fn in_file(path: &Path) -> impl Fn(DocError) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn load_graph(inputs: &mut Inputs, path: &Path) -> Result<Graph, String> {
    let text = inputs.file(path).map_err(|e| e.message)?;
    io::parse_graph(&text).map_err(in_file(path))
}

fn ids(g: &Graph, kept: EdgeSet) -> Vec<String> {
    kept.iter().map(|e| g.edges()[e].id.clone()).collect()
}

fn degree_json(g: &Graph, d: &Multidegree) -> Value {
    g.vertices()
        .iter()
        .zip(d.values())
        .map(|(v, &x)| (v.id.clone(), json!(x)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn vertex_ids(g: &Graph, vs: jacstab_core::VertexSet) -> Vec<String> {
    vs.iter().map(|v| g.vertices()[v].id.clone()).collect()
}

/// Findings for the violations in `report`.
pub fn violation_findings(g: &Graph, report: &VerificationReport) -> Vec<Finding> {
    report.violations.iter().map(|v| violation_finding(g, v)).collect()
}

fn violation_finding(g: &Graph, v: &Violation) -> Finding {
    match v {
        Violation::MissingSuccessor {
            kept,
            degree,
            edge,
            vertex,
        } => Finding::failure(
            "condition-1",
            format!(
                "adding a chip at {} across {} leaves the assignment",
                g.vertices()[*vertex].id,
                g.edges()[*edge].id
            ),
            json!({"kept": ids(g, *kept), "multidegree": degree_json(g, degree)}),
        ),
        Violation::WrongCount { kept, found, expected } => {
            let kind = if (*found as u64) > *expected {
                "minimality"
            } else {
                "completeness"
            };
            Finding::failure(
                kind,
                format!("{found} entries where the complexity is {expected}"),
                json!({"kept": ids(g, *kept), "found": found, "expected": expected}),
            )
        }
        Violation::Equivalent { kept, first, second } => Finding::failure(
            "minimality",
            "two entries are equivalent under chip firing",
            json!({
                "kept": ids(g, *kept),
                "first": degree_json(g, first),
                "second": degree_json(g, second),
            }),
        ),
        Violation::Incompatible {
            kept,
            degree,
            image,
            image_degree,
        } => Finding::failure(
            "compatibility",
            "image of an entry is missing from the target",
            json!({
                "kept": ids(g, *kept),
                "multidegree": degree_json(g, degree),
                "image_kept": image.iter().collect::<Vec<_>>(),
                "image_multidegree": image_degree.values(),
            }),
        ),
        Violation::RouteDisagreement => Finding::failure(
            "route-disagreement",
            "class invariants and reduced divisors disagree",
            Value::Null,
        ),
        Violation::Precondition(m) => Finding::failure("precondition", m.clone(), Value::Null),
    }
}

fn verify(a: &StabilityAssignment) -> Vec<Finding> {
    let mut out = violation_findings(&a.graph, &verify_condition_one(a));
    out.extend(violation_findings(&a.graph, &verify_condition_two(a)));
    out
}

fn assignment_json(a: &StabilityAssignment) -> Value {
    serde_json::to_value(AssignmentDocument::from_assignment(a)).expect("documents serialize")
}

fn parse_m(g: &Graph, text: &str) -> Result<Vec<u32>, String> {
    if let Ok(k) = text.trim().parse::<u32>() {
        return Ok(vec![k; g.edge_count()]);
    }
    let mut m = vec![0; g.edge_count()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (id, k) = part
            .split_once('=')
            .ok_or_else(|| format!("--m: expected `id=count`, got `{part}`"))?;
        let e = g.edge_index(id.trim()).ok_or_else(|| format!("--m: unknown edge `{id}`"))?;
        m[e] = k.trim().parse().map_err(|_| format!("--m: bad count `{k}`"))?;
    }
    Ok(m)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Complexity { .. } => "complexity",
        Command::Jacobian { .. } => "jacobian",
        Command::Stable { .. } => "stable",
        Command::Check { .. } => "check",
        Command::BreakDivisors { .. } => "break-divisors",
        Command::Lift { .. } => "lift",
        Command::Enumerate { .. } => "enumerate",
        Command::Universal { .. } => "universal",
        Command::Corpus { .. } => "corpus verify",
    }
}

fn execute(command: &Command) -> Result<Report, String> {
    let name = command_name(command);
    let mut inputs = Inputs::new(name);
    let details = match command {
        Command::Complexity { graph, all } => {
            let g = load_graph(&mut inputs, graph)?;
            inputs.value(all);
            let subs = if *all {
                g.spanning_subgraphs(true)
            } else {
                vec![g.whole()]
            };
            subs.iter()
                .map(|s| {
                    let (det, count) = (s.complexity(), s.complexity_by_enumeration());
                    let data = json!({"kept": ids(&g, s.kept), "matrix_tree": det, "enumerated": count});
                    if det == count {
                        Finding::info("complexity", format!("{det} spanning trees"), data)
                    } else {
                        Finding::failure("complexity", "the two counts differ", data)
                    }
                })
                .collect()
        }
        Command::Jacobian { graph, edges } => {
            let g = load_graph(&mut inputs, graph)?;
            let kept = match edges {
                Some(list) => {
                    inputs.value(list);
                    g.edge_set(list.split(',').map(str::trim).filter(|s| !s.is_empty()))
                        .map_err(|e| format!("--edges: {e}"))?
                }
                None => g.all_edges(),
            };
            let jac = Jacobian::new(&g, kept).map_err(|e| format!("--edges: {e}"))?;
            let c = g.spanning(kept).complexity();
            let data = json!({
                "kept": ids(&g, kept),
                "invariant_factors": jac.nontrivial_factors(),
                "order": jac.order(),
                "complexity": c,
            });
            if jac.order() == c {
                vec![Finding::info("jacobian", format!("order {c}"), data)]
            } else {
                vec![Finding::failure("jacobian", "order differs from the complexity", data)]
            }
        }
        Command::Stable { phi, graph } => {
            let g = load_graph(&mut inputs, graph)?;
            let text = inputs.file(phi).map_err(|e| e.message)?;
            let phi_v = io::parse_polarization(&text, &g).map_err(in_file(phi))?;
            phi_v.degree().map_err(|e| format!("{}: {e}", phi.display()))?;
            match degeneracy_witness(&g, &phi_v).map_err(|e| e.to_string())? {
                Some(w) => vec![Finding::failure(
                    "degenerate",
                    "the polarization has a strictly semistable point",
                    json!({
                        "kept": ids(&g, w.kept),
                        "multidegree": degree_json(&g, &w.degree),
                        "subset": vertex_ids(&g, w.subset),
                    }),
                )],
                None => {
                    let a = assignment_from_polarization(&g, &phi_v).map_err(|e| e.to_string())?;
                    let mut out = vec![Finding::info(
                        "assignment",
                        format!("{} entries", a.len()),
                        assignment_json(&a),
                    )];
                    out.extend(verify(&a));
                    out
                }
            }
        }
        Command::Check { assignment } => {
            let text = inputs.file(assignment).map_err(|e| e.message)?;
            let parsed = io::parse_assignment(&text).map_err(in_file(assignment))?;
            let a = &parsed.assignment;
            let mut out = vec![Finding::info(
                "summary",
                format!("{} entries on {} subgraphs", a.len(), a.entries.len()),
                Value::Null,
            )];
            for (kept, d) in &parsed.repeated {
                out.push(Finding::failure(
                    "minimality",
                    "entry listed more than once",
                    json!({"kept": ids(&a.graph, *kept), "multidegree": degree_json(&a.graph, d)}),
                ));
            }
            out.extend(verify(a));
            out
        }
        Command::BreakDivisors { graph } => {
            let g = load_graph(&mut inputs, graph)?;
            let a = ibd_assignment(&g).map_err(|e| e.to_string())?;
            let mut out = Vec::new();
            for s in g.spanning_subgraphs(true) {
                let count = break_divisors(&g, s.kept).map_err(|e| e.to_string())?.len() as u64;
                if count != s.complexity() {
                    out.push(Finding::failure(
                        "break-divisors",
                        format!("{count} break divisors where the complexity is {}", s.complexity()),
                        json!({"kept": ids(&g, s.kept)}),
                    ));
                }
            }
            out.push(Finding::info("assignment", format!("{} entries", a.len()), assignment_json(&a)));
            out.extend(verify(&a));
            let from_phi = ibd_polarization(&g).and_then(|phi| assignment_from_polarization(&g, &phi));
            if from_phi.as_ref() != Ok(&a) {
                out.push(Finding::failure(
                    "polarization",
                    "break divisors differ from the assignment of the matching polarization",
                    Value::Null,
                ));
            }
            out
        }
        Command::Lift { assignment, m } => {
            let text = inputs.file(assignment).map_err(|e| e.message)?;
            inputs.value(m);
            let a = io::parse_assignment(&text).map_err(in_file(assignment))?.assignment;
            let counts = parse_m(&a.graph, m)?;
            let sub = a.graph.subdivide(&counts).map_err(|e| e.to_string())?;
            let lifts = lift_assignment(&a, &sub);
            let c = sub.result.whole().complexity();
            let mut out = vec![Finding::info(
                "lift",
                format!("{} lifts, complexity {c}", lifts.len()),
                json!({
                    "vertices": sub.result.vertex_count(),
                    "edges": sub.result.edge_count(),
                    "lifts": lifts.iter().map(|d| degree_json(&sub.result, d)).collect::<Vec<_>>(),
                }),
            )];
            out.extend(violation_findings(&sub.result, &verify_lift_theorem(&a, &sub)));
            out
        }
        Command::Enumerate { graph, degree, window } => {
            let g = load_graph(&mut inputs, graph)?;
            inputs.value(degree);
            inputs.value(window);
            let found = enumerate_assignments(&g, *degree, *window).map_err(|e| e.to_string())?;
            vec![Finding::info(
                "results",
                format!("{} assignments", found.len()),
                json!({"results": found.iter().map(|a| AssignmentDocument::from_assignment(a).entries).collect::<Vec<_>>()}),
            )]
        }
        Command::Universal {
            genus,
            markings,
            degree,
            window,
        } => {
            for v in [genus.to_string(), markings.to_string(), degree.to_string(), window.to_string()] {
                inputs.value(v);
            }
            let search = universal_search(*genus, *markings, *degree, *window).map_err(|e| e.to_string())?;
            let results: Vec<UniversalDocument> = search
                .results
                .iter()
                .map(|r| UniversalDocument::new(r.degree, &r.per_object))
                .collect();
            let mut out = vec![Finding::info(
                "results",
                format!("{} universal assignments", results.len()),
                json!({"results": results}),
            )];
            if search.obstructed == Some(true) {
                let k = num_integer::gcd(*degree - i64::from(*genus) + 1, 2 * i64::from(*genus) - 2);
                let note = format!("gcd(d - g + 1, 2g - 2) = {k}, so no universal assignment exists in degree {degree}");
                if search.results.is_empty() {
                    out.push(Finding::info("obstruction", note, Value::Null));
                } else {
                    out.push(Finding::failure("obstruction", note, Value::Null));
                }
            }
            out
        }
        Command::Corpus {
            action: CorpusAction::Verify { corpus, criterion },
        } => {
            let root = corpus.clone().unwrap_or_else(corpus::default_dir);
            let c = Corpus::load(&root).map_err(|e| format!("{}: {e}", root.display()))?;
            let ids: Vec<u8> = match criterion {
                Some(id) if (1..=8).contains(id) => vec![*id],
                Some(id) => return Err(format!("--criterion: no criterion {id}")),
                None => (1..=8).collect(),
            };
            inputs.value(format!("{ids:?}"));
            for (rel, text) in &c.sources {
                inputs.value(rel);
                inputs.value(text);
            }
            let mut out = fixture_findings(&c);
            for id in ids {
                let o = acceptance::run(id, &c);
                let message = if o.within_bound() {
                    o.summary.clone()
                } else {
                    format!("{}; exceeded time bound", o.summary)
                };
                let data = json!({"criterion": o.id, "name": o.name});
                out.push(if o.passed() {
                    Finding::info("criterion", message, data)
                } else {
                    Finding::failure("criterion", message, data)
                });
            }
            out
        }
    };
    Ok(Report::new(name, inputs.digest(), details))
}

/// Fixture flags in the manifest agree with the verifiers.
fn fixture_findings(c: &Corpus) -> Vec<Finding> {
    let mut out = Vec::new();
    for (entry, parsed) in &c.assignments {
        let a = &parsed.assignment;
        let valid = parsed.repeated.is_empty()
            && verify_condition_one(a).passed()
            && verify_condition_two(a).passed();
        let data = json!({"fixture": entry.name});
        out.push(if valid == entry.valid {
            Finding::info("fixture", format!("{}: valid = {valid}", entry.name), data)
        } else {
            Finding::failure("fixture", format!("{}: expected valid = {}", entry.name, entry.valid), data)
        });
    }
    for (entry, phi) in &c.polarizations {
        let g = c.graph(&entry.graph).expect("checked on load");
        let nondegenerate = matches!(degeneracy_witness(g, phi), Ok(None));
        let data = json!({"fixture": entry.name});
        out.push(if nondegenerate == entry.nondegenerate {
            Finding::info("fixture", format!("{}: nondegenerate = {nondegenerate}", entry.name), data)
        } else {
            Finding::failure(
                "fixture",
                format!("{}: expected nondegenerate = {}", entry.name, entry.nondegenerate),
                data,
            )
        });
    }
    out
}
