//! Command-line front end: argument parsing, graph sources, report
//! envelopes and exit-code policy.
//!
//! Exit codes: 0 for success, 1 for a mathematically negative outcome
//! (an undetermined class, a failed necessary-condition check, scan
//! exceptions), 2 for usage or IO errors. Reports are deterministic for a
//! fixed (config, seed): wall-clock timings are only attached when
//! explicitly requested.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use fgraph_core::arrangement::Arrangement;
use fgraph_core::graph::{self, Multigraph};
use fgraph_core::hyper::{self, Method};
use fgraph_core::motive::Basis;
use fgraph_core::{conf, corpus, csm, lambda, DEFAULT_BUDGET};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "fgraph", version, about = "Exact invariants of Feynman-style multigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Evaluation budget for counting sweeps (points per sweep).
    /// Defaults to FGRAPH_BUDGET or 100000000.
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Seed for the seeded random draws (hyperplane sections).
    #[arg(long, global = true, default_value_t = 17)]
    pub seed: u64,

    /// Worker threads for corpus scans (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Attach wall-clock timings to the report (off by default so that
    /// reports are byte-identical across runs).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Graph file: JSON {"vertices":n,"edges":[[t,h],...]} or text
    /// "V E" header plus one "tail head" line per edge.
    #[arg(long)]
    pub graph: Option<String>,

    /// Named family: banana, cycle, lemon, path, complete, wheel.
    #[arg(long)]
    pub family: Option<String>,

    /// Family parameter (edge count, sections, or vertex count).
    #[arg(long, short = 'n', alias = "m")]
    pub n: Option<usize>,
}

impl GraphSource {
    pub fn resolve(&self) -> anyhow::Result<Multigraph> {
        match (&self.graph, &self.family) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read graph file {path}"))?;
                Ok(Multigraph::parse(&text)?)
            }
            (None, Some(family)) => {
                let n = self.n.ok_or_else(|| anyhow!("--family needs a parameter (-n)"))?;
                match family.as_str() {
                    "banana" => Ok(graph::banana(n)),
                    "cycle" => Ok(graph::cycle(n)),
                    "lemon" => Ok(graph::lemon(n)),
                    "path" => Ok(graph::path(n)),
                    "complete" => Ok(graph::complete(n)),
                    "wheel" | "wheel-with-spokes" => Ok(graph::wheel(n)),
                    other => Err(anyhow!("unknown family {other:?}")),
                }
            }
            _ => Err(anyhow!("exactly one of --graph or --family is required")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kirchhoff polynomial of a graph.
    Psi(GraphSource),
    /// Grothendieck classes of the graph hypersurface and complements.
    Class {
        #[command(flatten)]
        source: GraphSource,
        /// auto | delcon | closed | counting
        #[arg(long, default_value = "auto")]
        method: String,
        /// Primes for the counting method (comma separated).
        #[arg(long)]
        primes: Option<String>,
    },
    /// Euler-characteristic theorems, verified by point counting.
    Chi(GraphSource),
    /// Necessary conditions for an F1-structure on X, Y, Xhat, Yhat.
    CheckF1(GraphSource),
    /// chi(Y) over all connected multigraphs up to --max-edges.
    Scan {
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
    },
    /// Hyperplane-arrangement invariants and the Mobius condition.
    Arrangement {
        #[command(flatten)]
        source: GraphSource,
        /// Arrangement JSON {"ambient_dim":m,"normals":[["1","0"],...]}.
        #[arg(long)]
        normals: Option<String>,
    },
    /// Stratification class of the circuit-matrix complete intersection.
    Lambda {
        #[command(flatten)]
        source: GraphSource,
        /// Primes for the brute-force pair-count oracle.
        #[arg(long, value_delimiter = ',')]
        oracle_primes: Vec<u64>,
    },
    /// Class of the wonderful compactification of the configuration space.
    Conf {
        #[command(flatten)]
        source: GraphSource,
        /// Ambient projective dimension D (X = P^D).
        #[arg(long)]
        dim: usize,
        /// Cross-check against the stepwise blowup oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// CSM polynomial invariants and the embedded positivity check.
    Csm {
        #[command(flatten)]
        source: GraphSource,
        /// Also tabulate the q-deformed class at these primes.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// Enumerate connected multigraphs up to --max-edges.
    Corpus {
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
    },
}

pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
}

fn budget_of(cli: &Cli) -> u64 {
    cli.budget
        .or_else(|| std::env::var("FGRAPH_BUDGET").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_BUDGET)
}

pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let budget = budget_of(cli);
    let seed = cli.seed;
    match &cli.command {
        Command::Psi(source) => {
            let g = source.resolve()?;
            let psi = hyper::kirchhoff_polynomial(&g);
            Ok(Outcome {
                exit_code: 0,
                report: json!({
                    "graph": g,
                    "psi": psi.display(),
                    "degree": psi.homogeneous_degree(),
                    "betti1": g.betti1(),
                    "edges": g.edge_count(),
                }),
            })
        }
        Command::Class { source, method, primes } => {
            let g = source.resolve()?;
            let method = match method.as_str() {
                "auto" => Method::Auto,
                "delcon" => Method::DelCon,
                "closed" | "closed-form" => Method::ClosedForm,
                "counting" => Method::Counting,
                other => return Err(anyhow!("unknown method {other:?}")),
            };
            let report = if let (Method::Counting, Some(list)) = (method, primes) {
                let primes: Vec<u64> = list
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .context("bad --primes list")?;
                let cls = hyper::counting_affine_class(&g, budget, Some(&primes))?;
                let mut rep = hyper::class_report(&g, budget, Method::DelCon)?;
                rep.method = Method::Counting;
                rep.affine_class = cls;
                rep
            } else {
                hyper::class_report(&g, budget, method)?
            };
            let undetermined = report.projective_class.class().is_none();
            Ok(Outcome {
                exit_code: if undetermined { 1 } else { 0 },
                report: serde_json::to_value(&report)?,
            })
        }
        Command::Chi(source) => {
            let g = source.resolve()?;
            let rep = hyper::chi_theorems_check(&g, budget)?;
            let failed = rep.verified == Some(false);
            Ok(Outcome {
                exit_code: if failed { 1 } else { 0 },
                report: serde_json::to_value(&rep)?,
            })
        }
        Command::CheckF1(source) => {
            let g = source.resolve()?;
            let rep = hyper::f1_necessary_check(&g, budget)?;
            let code =
                if rep.hypersurface_passes && rep.undetermined.is_empty() { 0 } else { 1 };
            Ok(Outcome { exit_code: code, report: serde_json::to_value(&rep)? })
        }
        Command::Scan { max_edges } => {
            let scan = hyper::aluffi_scan(*max_edges, budget)?;
            let negative = scan.exceptions.iter().any(|e| !e.is_forest)
                || !scan.undetermined.is_empty();
            Ok(Outcome {
                exit_code: if negative { 1 } else { 0 },
                report: serde_json::to_value(&scan)?,
            })
        }
        Command::Arrangement { source, normals } => {
            let arr = match (normals, &source.graph, &source.family) {
                (Some(path), None, None) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("cannot read {path}"))?;
                    Arrangement::from_json(&text)?
                }
                (None, _, _) => Arrangement::from_graph(&source.resolve()?)?,
                _ => return Err(anyhow!("use either --normals or a graph source")),
            };
            let poset = fgraph_core::arrangement::intersection_poset(&arr);
            let chi = fgraph_core::arrangement::characteristic_from_poset(&poset);
            let complement = fgraph_core::arrangement::complement_class(&arr)?;
            let union = fgraph_core::arrangement::union_class(&arr)?;
            let mobius = fgraph_core::arrangement::mobius_condition_check(&arr)?;
            let flats: Vec<Value> = poset
                .flats
                .iter()
                .map(|f| {
                    json!({
                        "dim": f.dim,
                        "mobius": f.mobius.to_string(),
                        "hyperplanes": f.hyperplanes,
                    })
                })
                .collect();
            let passes = mobius.passes;
            Ok(Outcome {
                exit_code: if passes { 0 } else { 1 },
                report: json!({
                    "ambient_dim": arr.ambient_dim(),
                    "hyperplanes": arr.hyperplane_count(),
                    "multiplicities": arr.multiplicities(),
                    "flats": flats,
                    "characteristic_polynomial": chi.display(),
                    "complement_class": complement,
                    "union_class": union,
                    "union_class_T": union.to_basis(Basis::T).display(),
                    "mobius_condition": mobius,
                }),
            })
        }
        Command::Lambda { source, oracle_primes } => {
            let g = source.resolve()?;
            let rep = lambda::lambda_class(&g)?;
            let mut oracle = Vec::new();
            for &q in oracle_primes {
                let count = lambda::lambda_oracle_count(&g, q, budget)?;
                let predicted = rep.lambda_class.count_at(&q.into());
                oracle.push(json!({
                    "q": q,
                    "count": count,
                    "class_value": predicted.to_string(),
                    "agree": predicted == count.into(),
                }));
            }
            let ok = rep.t_nonnegative
                && oracle.iter().all(|o| o["agree"].as_bool() == Some(true));
            let lambda_t = rep.lambda_class.to_basis(Basis::T).display();
            let chi = rep.chi.to_string();
            Ok(Outcome {
                exit_code: if ok { 0 } else { 1 },
                report: json!({
                    "lambda": rep,
                    "lambda_class_T": lambda_t,
                    "chi": chi,
                    "oracle": oracle,
                }),
            })
        }
        Command::Conf { source, dim, oracle } => {
            let g = source.resolve()?;
            let cls = conf::conf_class(&g, *dim)?;
            let euler = conf::conf_euler(&g, *dim)?;
            let nests = conf::enumerate_nests(&g)?;
            let mut report = json!({
                "dim": dim,
                "class": cls,
                "class_T": cls.to_basis(Basis::T).display(),
                "euler": euler.to_string(),
                "euler_matches_class": cls.euler_characteristic() == euler,
                "nests": nests.len(),
                "t_nonnegative": cls.is_t_nonnegative(),
            });
            let mut ok = cls.euler_characteristic() == euler;
            if *oracle {
                let oracle_class = conf::blowup_oracle(&g, *dim)?;
                let agree = oracle_class == cls;
                report["oracle_agrees"] = json!(agree);
                report["oracle_class_T"] =
                    json!(oracle_class.to_basis(Basis::T).display());
                ok &= agree;
            }
            Ok(Outcome { exit_code: if ok { 0 } else { 1 }, report })
        }
        Command::Csm { source, q } => {
            let g = source.resolve()?;
            let rep = csm::c_gamma(&g, seed, budget)?;
            let rules = csm::feynman_rule_checks(&g, seed, budget)?;
            let embedded = csm::embedded_f1_check(&rep.g_hypersurface);
            let embedded_c = csm::embedded_f1_check(&rep.c_gamma);
            let mut report = json!({
                "edges": rep.edges,
                "chi_profile": rep.chi_profile,
                "g_hypersurface": rep.g_hypersurface.display(),
                "c_gamma": rep.c_gamma.display(),
                "monic_of_degree_n": rep.monic_of_degree_n,
                "feynman_rules": rules,
                "embedded_f1_g": embedded,
                "embedded_f1_c": embedded_c,
            });
            let mut ok = rules.derivative_identity
                && rules.section_identity
                && rep.monic_of_degree_n
                && embedded_c.passes;
            if !q.is_empty() {
                let psi = hyper::kirchhoff_polynomial(&g);
                let qd = csm::q_deformed_class(&[psi], g.edge_count(), seed, budget, q)?;
                let table: Vec<Value> = qd
                    .table
                    .iter()
                    .map(|(q, g)| json!({"q": q, "class": g.display("T")}))
                    .collect();
                report["q_deformed"] = json!({
                    "table": table,
                    "limit_matches": qd.limit_matches,
                });
                ok &= qd.limit_matches;
            }
            Ok(Outcome { exit_code: if ok { 0 } else { 1 }, report })
        }
        Command::Corpus { max_edges } => {
            let (graphs, duplicates) = corpus::generate(*max_edges);
            Ok(Outcome {
                exit_code: 0,
                report: json!({
                    "max_edges": max_edges,
                    "count": graphs.len(),
                    "duplicate_labelings_folded": duplicates,
                    "graphs": graphs,
                }),
            })
        }
    }
}

/// Run the CLI on raw arguments. Prints the report envelope and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own success exit
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // a failure here just means a pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let started = Instant::now();
    match execute(&cli) {
        Ok(outcome) => {
            let mut envelope = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": command_name(&cli.command),
                "seed": cli.seed,
                "budget": budget_of(&cli),
                "result": outcome.report,
            });
            if cli.timings {
                envelope["timings"] =
                    json!({"wall_ms": started.elapsed().as_millis() as u64});
            }
            let text = serde_json::to_string_pretty(&envelope).expect("report serializes");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {path}: {e}");
                        return 2;
                    }
                }
                None => println!("{text}"),
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Psi(_) => "psi",
        Command::Class { .. } => "class",
        Command::Chi(_) => "chi",
        Command::CheckF1(_) => "check-f1",
        Command::Scan { .. } => "scan",
        Command::Arrangement { .. } => "arrangement",
        Command::Lambda { .. } => "lambda",
        Command::Conf { .. } => "conf",
        Command::Csm { .. } => "csm",
        Command::Corpus { .. } => "corpus",
    }
}
