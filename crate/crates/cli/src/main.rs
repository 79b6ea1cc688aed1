//! Command-line surface over the exact polytope library.
//!
//! Every command reads and writes the rational-string JSON formats of the
//! library, prints one JSON document to stdout (or `--out`), and reports
//! timing on stderr so that identical inputs produce byte-identical output.
//!
//! Exit codes: 0 success (the decision bit lives in the payload), 2 input
//! error, 3 budget exceeded, 4 internal invariant violation.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use polywalk_core::cyclic::{
    cyclic_silo_tracked, diameter_reduction, encoding_growth_report, ReductionOptions,
};
use polywalk_core::graph::GraphWire;
use polywalk_core::knapsack::{
    build_gadget, decide_monotone_on_graph, decide_on_graph, gadget_graph, monotone_objective,
    partition_endpoints, PartitionInstance,
};
use polywalk_core::report::{run_scopes, VerifyOptions};
use polywalk_core::rock::{
    build_rock_extension, greedy_path_to_apex, path_between, InteriorBall, RockExtension,
};
use polywalk_core::silo::silo_tracked;
use polywalk_core::truncate::{TrackedPolytope, Validation};
use polywalk_core::{
    build_graph, diameter, distance, shortest_monotone_path, Budget, Error as CoreError,
    FeasibleBasis, HPolytope, PolytopeGraph, RatVector, Rational,
};

#[derive(Parser)]
#[command(
    name = "polywalk",
    version,
    about = "Exact polytope constructions and graph walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed recorded in the manifest and used by randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for basis enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on the number of basis subsets scanned.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    max_bases: u64,
    /// Cap on BFS edge relaxations.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_relaxations: u64,
}

impl CommonOpts {
    fn budget(&self) -> Budget {
        Budget {
            max_bases: self.max_bases,
            max_relaxations: self.max_relaxations,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the partition gadget for a weight vector and decide it.
    GenKnapsack {
        /// Comma-separated positive integer weights with even sum.
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact BFS distance between two vertices of a simple polytope.
    Distance {
        #[arg(long)]
        polytope: PathBuf,
        /// Vertex as exact coordinates "0,0,1/2" or basis labels "lo:1,lo:2".
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Optional threshold; the payload reports distance <= k.
        #[arg(short, long)]
        k: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Shortest strictly improving path to an objective maximizer.
    MonotoneDistance {
        #[arg(long)]
        polytope: PathBuf,
        /// Objective vector, comma-separated rationals.
        #[arg(long)]
        objective: String,
        #[arg(long)]
        start: String,
        #[arg(short, long)]
        k: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// All-pairs BFS diameter with a witness pair.
    Diameter {
        #[arg(long)]
        polytope: PathBuf,
        /// Also write the graph as a GraphViz edge list.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Cut one vertex off at its edge midpoints.
    Truncate {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        vertex: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Replace a vertex by a tower of d ordered cuts.
    Silo {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        vertex: String,
        /// Cutting order as comma-separated basis labels; default is the
        /// sorted basis.
        #[arg(long)]
        order: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Repeat the tower construction r*d times with rotating orders.
    CyclicSilo {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Turn a two-vertex distance question into a diameter question.
    ReduceDiameter {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Tower repetitions; defaults to max(diameter, 6).
        #[arg(long)]
        r: Option<usize>,
        /// Allow r below the safe minimum (the exact formula is then not
        /// guaranteed; a verification failure is logged, not hidden).
        #[arg(long)]
        force: bool,
        /// Also run all-pairs BFS on the result and assert the formula.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Lift a polytope to one extra dimension with an apex over an
    /// interior point.
    RockBuild {
        #[arg(long)]
        polytope: PathBuf,
        /// Interior point, comma-separated rationals.
        #[arg(long)]
        center: String,
        /// Squared ball radius, one rational.
        #[arg(long)]
        radius2: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Greedy apex-routed path between two vertices of a built lift.
    RockPath {
        /// Record produced by rock-build.
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the claim-by-claim verification suites.
    VerifyPaper {
        /// Suites to run: knapsack, silo, rock, growth. Empty means all.
        #[arg(long)]
        scope: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = 5)]
        random_instances: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    input_digest: String,
    seed: u64,
    budget: BudgetWire,
}

#[derive(Serialize)]
struct BudgetWire {
    max_bases: u64,
    max_relaxations: u64,
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    manifest: Manifest,
    result: T,
}

fn digest_parts(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p);
        hasher.update([0u8]);
    }
    format!("sha256:{:x}", hasher.finalize())
}

fn emit<T: Serialize>(
    common: &CommonOpts,
    command: &str,
    digest: String,
    result: T,
) -> anyhow::Result<()> {
    let doc = Document {
        manifest: Manifest {
            command: command.into(),
            input_digest: digest,
            seed: common.seed,
            budget: BudgetWire {
                max_bases: common.max_bases,
                max_relaxations: common.max_relaxations,
            },
        },
        result,
    };
    let json = serde_json::to_string_pretty(&doc)?;
    match &common.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::TimeBudgetExceeded { .. } | CoreError::BudgetExceeded(_) => 3,
        CoreError::Unreachable { .. }
        | CoreError::RecordInconsistent(_)
        | CoreError::GreedyStuck { .. }
        | CoreError::NonUniqueMax
        | CoreError::LayeringFailed { .. }
        | CoreError::Internal(_) => 4,
        _ => 2,
    }
}

struct CmdError {
    code: u8,
    message: String,
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for CmdError {
    fn from(e: anyhow::Error) -> Self {
        CmdError {
            code: 2,
            message: format!("{e:#}"),
        }
    }
}

fn read_polytope(path: &PathBuf) -> Result<(HPolytope, Vec<u8>), CmdError> {
    let bytes = std::fs::read(path).map_err(|e| CmdError {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let p: HPolytope = serde_json::from_slice(&bytes).map_err(|e| CmdError {
        code: 2,
        message: format!("bad polytope JSON: {e}"),
    })?;
    Ok((p, bytes))
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, CmdError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<Rational>().map_err(|e| CmdError {
                code: 2,
                message: e.to_string(),
            })
        })
        .collect()
}

/// A vertex given either by exact coordinates or by its basis labels;
/// resolved by exact match against the enumerated graph.
fn resolve_vertex(graph: &PolytopeGraph, spec: &str) -> Result<usize, CmdError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let as_point: Option<Vec<Rational>> =
        parts.iter().map(|t| t.parse::<Rational>().ok()).collect();
    if let Some(coords) = as_point {
        let point = RatVector::new(coords);
        return graph.find_by_point(&point).ok_or_else(|| CmdError {
            code: 2,
            message: format!("no vertex at {point:?}"),
        });
    }
    let basis = FeasibleBasis::new(parts.iter().map(|s| s.to_string()).collect());
    graph.find_by_basis(&basis).ok_or_else(|| CmdError {
        code: 2,
        message: format!("no vertex with basis {basis}"),
    })
}

#[derive(Serialize)]
struct PathWire {
    length: usize,
    nodes: Vec<usize>,
    bases: Vec<FeasibleBasis>,
    points: Vec<RatVector>,
}

fn path_wire(graph: &PolytopeGraph, nodes: &[usize]) -> PathWire {
    PathWire {
        length: nodes.len().saturating_sub(1),
        nodes: nodes.to_vec(),
        bases: nodes.iter().map(|&i| graph.node(i).basis.clone()).collect(),
        points: nodes.iter().map(|&i| graph.node(i).point.clone()).collect(),
    }
}

fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::GenKnapsack { weights, common } => {
            let parsed: Result<Vec<u64>, _> = weights
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect();
            let parsed = parsed.map_err(|e| CmdError {
                code: 2,
                message: format!("bad weights: {e}"),
            })?;
            let inst = PartitionInstance::new(parsed)?;
            let budget = common.budget();
            let graph = gadget_graph(&inst, &budget)?;
            let decision = decide_on_graph(&inst, &graph)?;
            let monotone = decide_monotone_on_graph(&inst, &graph)?;
            if monotone.tied_edges > 0 {
                eprintln!(
                    "warning: {} flat edges excluded from the monotone search",
                    monotone.tied_edges
                );
            }
            let objective = monotone_objective(&inst);
            let (start, goal) = partition_endpoints(&inst);

            #[derive(Serialize)]
            struct Out {
                polytope: HPolytope,
                threshold: usize,
                start: RatVector,
                goal: RatVector,
                distance: usize,
                decision: bool,
                monotone_length: Option<usize>,
                monotone_decision: bool,
                epsilon: Rational,
                objective: RatVector,
                witness: PathWire,
            }
            let digest = digest_parts(&[b"gen-knapsack", weights.as_bytes()]);
            emit(
                &common,
                "gen-knapsack",
                digest,
                Out {
                    polytope: build_gadget(&inst),
                    threshold: inst.threshold(),
                    start: start.point(&inst),
                    goal: goal.point(&inst),
                    distance: decision.distance,
                    decision: decision.yes,
                    monotone_length: monotone.length,
                    monotone_decision: monotone.yes,
                    epsilon: objective.epsilon,
                    objective: objective.c,
                    witness: path_wire(&graph, &decision.witness.nodes),
                },
            )?;
            Ok(())
        }

        Command::Distance {
            polytope,
            from,
            to,
            k,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let graph = build_graph(&p, &budget)?;
            let s = resolve_vertex(&graph, &from)?;
            let t = resolve_vertex(&graph, &to)?;
            let (dist, path) = distance(&graph, s, t)?;

            #[derive(Serialize)]
            struct Out {
                distance: usize,
                k: Option<usize>,
                within_k: Option<bool>,
                witness: PathWire,
            }
            let digest = digest_parts(&[
                b"distance",
                &bytes,
                from.as_bytes(),
                to.as_bytes(),
                format!("{k:?}").as_bytes(),
            ]);
            emit(
                &common,
                "distance",
                digest,
                Out {
                    distance: dist,
                    k,
                    within_k: k.map(|k| dist <= k),
                    witness: path_wire(&graph, &path.nodes),
                },
            )?;
            Ok(())
        }

        Command::MonotoneDistance {
            polytope,
            objective,
            start,
            k,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let graph = build_graph(&p, &budget)?;
            let c = RatVector::new(parse_rationals(&objective)?);
            if c.dim() != p.dim() {
                return Err(CmdError {
                    code: 2,
                    message: "objective dimension mismatch".into(),
                });
            }
            let s = resolve_vertex(&graph, &start)?;
            let res = shortest_monotone_path(&graph, &c, s);
            if res.tied_edges > 0 {
                eprintln!(
                    "warning: {} flat edges excluded from the monotone search",
                    res.tied_edges
                );
            }

            #[derive(Serialize)]
            struct Out {
                length: Option<usize>,
                k: Option<usize>,
                within_k: Option<bool>,
                tied_edges_excluded: usize,
                maximizers: Vec<usize>,
                witness: Option<PathWire>,
            }
            let digest = digest_parts(&[
                b"monotone-distance",
                &bytes,
                objective.as_bytes(),
                start.as_bytes(),
                format!("{k:?}").as_bytes(),
            ]);
            let length = res.path.as_ref().map(|p| p.length());
            emit(
                &common,
                "monotone-distance",
                digest,
                Out {
                    length,
                    k,
                    within_k: k.map(|k| length.is_some_and(|l| l <= k)),
                    tied_edges_excluded: res.tied_edges,
                    maximizers: res.maximizers,
                    witness: res.path.map(|p| path_wire(&graph, &p.nodes)),
                },
            )?;
            Ok(())
        }

        Command::Diameter {
            polytope,
            dot,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let graph = build_graph(&p, &budget)?;
            let diam = diameter(&graph, &budget)?;
            if let Some(path) = &dot {
                let mut text = String::from("graph polytope {\n");
                for (i, n) in graph.nodes().iter().enumerate() {
                    text.push_str(&format!("  n{i} [label=\"{}\"];\n", n.basis));
                }
                for (u, v) in graph.edges() {
                    text.push_str(&format!("  n{u} -- n{v};\n"));
                }
                text.push_str("}\n");
                std::fs::write(path, text).map_err(|e| CmdError {
                    code: 2,
                    message: e.to_string(),
                })?;
            }

            #[derive(Serialize)]
            struct Out {
                diameter: usize,
                witness: (usize, usize),
                witness_points: (RatVector, RatVector),
                vertices: usize,
                edges: usize,
            }
            let digest = digest_parts(&[b"diameter", &bytes]);
            emit(
                &common,
                "diameter",
                digest,
                Out {
                    diameter: diam.value,
                    witness: diam.witness,
                    witness_points: (
                        graph.node(diam.witness.0).point.clone(),
                        graph.node(diam.witness.1).point.clone(),
                    ),
                    vertices: graph.node_count(),
                    edges: graph.edge_count(),
                },
            )?;
            Ok(())
        }

        Command::Truncate {
            polytope,
            vertex,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let tracked = TrackedPolytope::from_polytope(&p, &budget)?;
            let node = resolve_vertex(tracked.graph(), &vertex)?;
            let label = tracked.fresh_label("cut");
            let out = tracked.cut_vertex(node, label.clone(), Validation::Full)?;

            #[derive(Serialize)]
            struct Out {
                polytope: HPolytope,
                new_label: String,
                cut_basis: FeasibleBasis,
                vertices: usize,
                graph: serde_json::Value,
            }
            let digest = digest_parts(&[b"truncate", &bytes, vertex.as_bytes()]);
            let wire: GraphWire = out.tracked.graph().wire();
            emit(
                &common,
                "truncate",
                digest,
                Out {
                    polytope: out.tracked.polytope().clone(),
                    new_label: label,
                    cut_basis: out.cut_basis,
                    vertices: out.tracked.graph().node_count(),
                    graph: serde_json::to_value(&wire).map_err(anyhow::Error::from)?,
                },
            )?;
            Ok(())
        }

        Command::Silo {
            polytope,
            vertex,
            order,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let tracked = TrackedPolytope::from_polytope(&p, &budget)?;
            let node = resolve_vertex(tracked.graph(), &vertex)?;
            let order_labels: Vec<String> = match &order {
                Some(o) => o.split(',').map(|s| s.trim().to_string()).collect(),
                None => tracked.graph().node(node).basis.labels().to_vec(),
            };
            let out = silo_tracked(&tracked, node, &order_labels, "y", Validation::Full)?;

            #[derive(Serialize)]
            struct Out {
                polytope: HPolytope,
                ordered_basis: Vec<String>,
                y_labels: Vec<String>,
                peak: FeasibleBasis,
                vertices: usize,
            }
            let digest = digest_parts(&[
                b"silo",
                &bytes,
                vertex.as_bytes(),
                order_labels.join(",").as_bytes(),
            ]);
            emit(
                &common,
                "silo",
                digest,
                Out {
                    polytope: out.tracked.polytope().clone(),
                    ordered_basis: out.record.ordered_basis.clone(),
                    y_labels: out.record.y_labels.clone(),
                    peak: out.record.peak.clone(),
                    vertices: out.tracked.graph().node_count(),
                },
            )?;
            Ok(())
        }

        Command::CyclicSilo {
            polytope,
            vertex,
            r,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let tracked = TrackedPolytope::from_polytope(&p, &budget)?;
            let node = resolve_vertex(tracked.graph(), &vertex)?;
            let (built, record) = cyclic_silo_tracked(&tracked, node, r, "y")?;
            let growth = encoding_growth_report(&record);

            #[derive(Serialize)]
            struct Out {
                polytope: HPolytope,
                r: usize,
                final_peak: FeasibleBasis,
                peaks: Vec<FeasibleBasis>,
                ground_layer: Vec<FeasibleBasis>,
                orders: Vec<Vec<String>>,
                vertices: usize,
                growth: serde_json::Value,
            }
            let digest =
                digest_parts(&[b"cyclic-silo", &bytes, vertex.as_bytes(), &r.to_le_bytes()]);
            emit(
                &common,
                "cyclic-silo",
                digest,
                Out {
                    polytope: built.polytope().clone(),
                    r,
                    final_peak: record.final_peak().clone(),
                    peaks: record.peaks.clone(),
                    ground_layer: record.ground_layer().to_vec(),
                    orders: record.orders.clone(),
                    vertices: built.graph().node_count(),
                    growth: serde_json::to_value(&growth).map_err(anyhow::Error::from)?,
                },
            )?;
            Ok(())
        }

        Command::ReduceDiameter {
            polytope,
            u,
            v,
            r,
            force,
            verify,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let pre = build_graph(&p, &budget)?;
            let un = resolve_vertex(&pre, &u)?;
            let vn = resolve_vertex(&pre, &v)?;
            let out = diameter_reduction(
                &p,
                &pre.node(un).point.clone(),
                &pre.node(vn).point.clone(),
                ReductionOptions { r, force },
                &budget,
            )?;

            let mut verified = None;
            if verify {
                let diam = diameter(out.tracked.graph(), &budget)?;
                let expected = out.base_distance + out.k_offset;
                if diam.value != expected && !force {
                    return Err(CmdError {
                        code: 4,
                        message: format!(
                            "diameter {} disagrees with predicted {expected}",
                            diam.value
                        ),
                    });
                }
                if diam.value != expected {
                    eprintln!(
                        "warning: forced r gives diameter {} instead of {expected}",
                        diam.value
                    );
                }
                verified = Some(diam.value == expected);
            }

            #[derive(Serialize)]
            struct Out {
                polytope: HPolytope,
                r: usize,
                k_offset: usize,
                base_distance: usize,
                base_diameter: usize,
                predicted_diameter: usize,
                peak_u: FeasibleBasis,
                peak_v: FeasibleBasis,
                verified: Option<bool>,
                vertices: usize,
            }
            let digest = digest_parts(&[
                b"reduce-diameter",
                &bytes,
                u.as_bytes(),
                v.as_bytes(),
                format!("{r:?}:{force}:{verify}").as_bytes(),
            ]);
            emit(
                &common,
                "reduce-diameter",
                digest,
                Out {
                    polytope: out.tracked.polytope().clone(),
                    r: out.r,
                    k_offset: out.k_offset,
                    base_distance: out.base_distance,
                    base_diameter: out.base_diameter,
                    predicted_diameter: out.base_distance + out.k_offset,
                    peak_u: out.peak_u,
                    peak_v: out.peak_v,
                    verified,
                    vertices: out.tracked.graph().node_count(),
                },
            )?;
            Ok(())
        }

        Command::RockBuild {
            polytope,
            center,
            radius2,
            common,
        } => {
            let (p, bytes) = read_polytope(&polytope)?;
            let budget = common.budget();
            let center_v = RatVector::new(parse_rationals(&center)?);
            let r2: Rational = radius2.trim().parse().map_err(|e: CoreError| CmdError {
                code: 2,
                message: e.to_string(),
            })?;
            let ball = InteriorBall::new(center_v, r2)?;
            let rock = build_rock_extension(&p, &ball, &budget)?;
            let digest =
                digest_parts(&[b"rock-build", &bytes, center.as_bytes(), radius2.as_bytes()]);
            emit(&common, "rock-build", digest, rock_record(&rock))?;
            Ok(())
        }

        Command::RockPath {
            record,
            from,
            to,
            common,
        } => {
            let bytes = std::fs::read(&record).map_err(|e| CmdError {
                code: 2,
                message: format!("cannot read {}: {e}", record.display()),
            })?;
            #[derive(serde::Deserialize)]
            struct RecordIn {
                polytope: HPolytope,
                center: RatVector,
                radius2: Rational,
            }
            let rec: RecordIn = serde_json::from_slice(&bytes).map_err(|e| CmdError {
                code: 2,
                message: format!("bad rock record: {e}"),
            })?;
            let budget = common.budget();
            // Rebuild and re-validate from the recorded inputs; the layer
            // structure is not trusted from the file.
            let ball = InteriorBall::new(rec.center, rec.radius2)?;
            let base = project_base(&rec.polytope)?;
            let rock = build_rock_extension(&base, &ball, &budget)?;
            if rock.polytope() != &rec.polytope {
                return Err(CmdError {
                    code: 2,
                    message: "record polytope does not match the rebuilt lift".into(),
                });
            }
            let n = rock.graph().node_count();
            if from >= n || to >= n {
                return Err(CmdError {
                    code: 2,
                    message: format!("vertex index out of range (have {n})"),
                });
            }
            let walk = path_between(&rock, from, to)?;
            let up = greedy_path_to_apex(&rock, from)?;

            #[derive(Serialize)]
            struct Out {
                bound: usize,
                apex: usize,
                to_apex_length: usize,
                path: PathWire,
            }
            let digest =
                digest_parts(&[b"rock-path", &bytes, &from.to_le_bytes(), &to.to_le_bytes()]);
            emit(
                &common,
                "rock-path",
                digest,
                Out {
                    bound: 2 * rock.step_bound(),
                    apex: rock.apex(),
                    to_apex_length: up.path.length(),
                    path: path_wire(rock.graph(), &walk.path.nodes),
                },
            )?;
            Ok(())
        }

        Command::VerifyPaper {
            scope,
            max_d,
            random_instances,
            common,
        } => {
            let opts = VerifyOptions {
                max_d,
                seed: common.seed,
                random_instances,
                budget: common.budget(),
            };
            let results = run_scopes(&scope, &opts);
            let mut failed = 0;
            println!(
                "{:<8} {:<38} {:<26} {:<30} {:<40} verdict",
                "suite", "claim", "instance", "expected", "got"
            );
            for r in &results {
                if !r.pass {
                    failed += 1;
                }
                println!(
                    "{:<8} {:<38} {:<26} {:<30} {:<40} {}",
                    r.suite,
                    r.claim,
                    r.instance,
                    r.expected,
                    r.got,
                    if r.pass { "ok" } else { "FAIL" }
                );
            }
            println!("{} claims, {} failed", results.len(), failed);
            if let Some(path) = &common.out {
                let json = serde_json::to_string_pretty(&results).map_err(anyhow::Error::from)?;
                std::fs::write(path, json + "\n").map_err(|e| CmdError {
                    code: 2,
                    message: e.to_string(),
                })?;
            }
            if failed > 0 {
                return Err(CmdError {
                    code: 4,
                    message: format!("{failed} claims failed"),
                });
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct RockRecordOut {
    polytope: HPolytope,
    center: RatVector,
    radius2: Rational,
    apex_node: usize,
    apex_point: RatVector,
    lift_coefficients: RatVector,
    step_bound: usize,
    layers: std::collections::BTreeMap<usize, usize>,
    vertices: usize,
}

fn rock_record(rock: &RockExtension) -> RockRecordOut {
    let d = rock.polytope().dim() - 1;
    let center = RatVector::new(rock.apex_point().entries()[..d].to_vec());
    RockRecordOut {
        polytope: rock.polytope().clone(),
        center,
        radius2: rock.ball_radius2().clone(),
        apex_node: rock.apex(),
        apex_point: rock.apex_point().clone(),
        lift_coefficients: rock.lift_coefficients().clone(),
        step_bound: rock.step_bound(),
        layers: rock.layer_map(),
        vertices: rock.graph().node_count(),
    }
}

/// Recovers the base polytope from a lift: drops the floor row and the
/// height column.
fn project_base(q: &HPolytope) -> Result<HPolytope, CmdError> {
    let d = q.dim() - 1;
    let rows = q.rows() - 1;
    let mut mat = Vec::with_capacity(rows);
    let mut rhs = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for i in 0..rows {
        let full = q.matrix().row(i);
        mat.push(RatVector::new(full.entries()[..d].to_vec()));
        rhs.push(q.rhs()[i].clone());
        labels.push(q.labels()[i].clone());
    }
    HPolytope::new(
        polywalk_core::RatMatrix::new(mat),
        RatVector::new(rhs),
        labels,
    )
    .map_err(|e| CmdError {
        code: 2,
        message: e.to_string(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Worker-count flag applies to the global enumeration pool.
    let common = match &cli.command {
        Command::GenKnapsack { common, .. }
        | Command::Distance { common, .. }
        | Command::MonotoneDistance { common, .. }
        | Command::Diameter { common, .. }
        | Command::Truncate { common, .. }
        | Command::Silo { common, .. }
        | Command::CyclicSilo { common, .. }
        | Command::ReduceDiameter { common, .. }
        | Command::RockBuild { common, .. }
        | Command::RockPath { common, .. }
        | Command::VerifyPaper { common, .. } => common,
    };
    if let Some(jobs) = common.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let start = Instant::now();
    let result = run(cli);
    let elapsed = start.elapsed();
    let _ = writeln!(std::io::stderr(), "timing_ms: {}", elapsed.as_millis());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
