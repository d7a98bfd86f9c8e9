//! Command-line front end: argument parsing, command dispatch, and report
//! assembly. All analysis lives in the library modules; this layer only
//! plumbs files and JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formats::{load_system, EdgeDoc, GraphDocument};
use crate::graph::edge_key;
use crate::groups::{self, GroupVerdict};
use crate::linalg::RankResult;
use crate::nonfragility::{self, Classification, FragilityReport};
use crate::preservation;
use crate::report;
use crate::steering;
use crate::system::MasSystem;

#[derive(Parser, Debug)]
#[command(name = "netctrl", version, about = "Controllability and robustness analysis of leader-follower networks under agent loss")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized synthesis and fixture search (env NETCTRL_SEED overrides).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Turn guard-band disagreements between paired criteria into errors.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Numerical rank tolerance (default: size * machine epsilon * largest singular value).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Basic structure and controllability of the system.
    Analyze { graph: PathBuf },
    /// Fragility classification under follower removal.
    Nonfragility {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Partial controllability of node groups.
    Groups {
        graph: PathBuf,
        /// Check this comma-separated group.
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
        /// Grow one maximal controllable group.
        #[arg(long)]
        maximal: bool,
        /// Seed members for --maximal.
        #[arg(long, value_delimiter = ',', requires = "maximal")]
        include: Option<Vec<String>>,
        /// Enumerate every maximal controllable group.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = CriterionArg::Rows)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Grammian horizon end.
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
    },
    /// Preservation of an important set's partial controllability under removals.
    Preserve {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        important: Vec<String>,
        /// Removal scenario to check.
        #[arg(long, value_delimiter = ',')]
        removed: Option<Vec<String>>,
        /// Report the smallest structurally breaking removal set.
        #[arg(long)]
        min_break: bool,
        /// Re-weight so the numeric check passes for all scenarios.
        #[arg(long)]
        synthesize: bool,
        /// JSON file: list of removal scenarios (lists of labels) for --synthesize.
        #[arg(long)]
        scenarios: Option<PathBuf>,
        /// Write the re-weighted graph document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan and simulate a minimum-input steering of a group to targets.
    Steer {
        graph: PathBuf,
        /// Comma-separated label=value targets; keys define the group.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        /// JSON file mapping labels to initial states (missing labels are 0).
        #[arg(long)]
        x0: Option<PathBuf>,
        #[arg(long, default_value_t = steering::DEFAULT_STEPS)]
        steps: usize,
        /// Write the simulated trajectory as CSV (time, x_1..x_n).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct weights realizing a graphic criterion.
    Synthesize {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Important set for --mode preserve.
        #[arg(long, value_delimiter = ',')]
        important: Option<Vec<String>>,
        /// JSON scenario list for --mode preserve.
        #[arg(long)]
        scenarios: Option<PathBuf>,
        /// Write the re-weighted graph document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum MethodArg {
    Brute,
    Graphic,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum CriterionArg {
    Rows,
    Grammian,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum ModeArg {
    Snf,
    Preserve,
}

pub fn run(cli: &Cli) -> Result<String> {
    let started = std::time::Instant::now();
    let seed = resolve_seed(cli.seed);
    let (name, body) = match &cli.command {
        Command::Analyze { graph } => ("analyze", cmd_analyze(graph, cli.tol)?),
        Command::Nonfragility { graph, method } => (
            "nonfragility",
            cmd_nonfragility(graph, *method, cli.strict, cli.tol)?,
        ),
        Command::Groups {
            graph,
            check,
            maximal,
            include,
            all,
            criterion,
            t0,
            t1,
        } => (
            "groups",
            cmd_groups(
                graph, check, *maximal, include, *all, *criterion, *t0, *t1, cli.strict,
                cli.tol,
            )?,
        ),
        Command::Preserve {
            graph,
            important,
            removed,
            min_break,
            synthesize,
            scenarios,
            out,
        } => (
            "preserve",
            cmd_preserve(
                graph, important, removed, *min_break, *synthesize, scenarios, out, seed,
                cli.tol,
            )?,
        ),
        Command::Steer {
            graph,
            targets,
            t0,
            t1,
            x0,
            steps,
            out,
        } => (
            "steer",
            cmd_steer(graph, targets, *t0, *t1, x0, *steps, out, cli.tol)?,
        ),
        Command::Synthesize {
            graph,
            mode,
            important,
            scenarios,
            out,
        } => (
            "synthesize",
            cmd_synthesize(graph, *mode, important, scenarios, out, seed, cli.tol)?,
        ),
    };
    Ok(report::render(name, body, started.elapsed()))
}

fn resolve_seed(flag: u64) -> u64 {
    std::env::var("NETCTRL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(flag)
}

fn rank_json(r: &RankResult) -> Value {
    json!({
        "rank": r.rank,
        "singular_values": r.singular_values,
        "tolerance": r.tolerance_used,
    })
}

fn group_verdict_json(v: &GroupVerdict) -> Value {
    let mut out = json!({
        "group": v.group,
        "partially_controllable": v.partially_controllable,
    });
    if let Some(r) = &v.row_rank {
        out["row_rank"] = rank_json(r);
    }
    if let Some(s) = v.grammian_min_singular {
        out["grammian_min_singular"] = json!(s);
    }
    if let Some((t0, t1)) = v.horizon {
        out["horizon"] = json!([t0, t1]);
    }
    out
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::Snf => json!("snf"),
        Classification::KWnf(k) => json!(format!("{k}-wnf")),
        Classification::Fragile => json!("fragile"),
    }
}

fn fragility_json(r: &FragilityReport) -> Value {
    let mut out = json!({
        "classification": classification_json(&r.classification),
        "k": r.k,
        "breaking_set": r.breaking_set,
    });
    match r.method {
        nonfragility::Method::BruteForce => out["per_p"] = json!(r.per_p),
        nonfragility::Method::Graphic => {
            out["achievable_k"] = match r.graphic_k {
                Some(k) => json!(k),
                None => Value::Null, // unbounded: no follower cutset exists
            };
            if let Some(l1) = r.length_one {
                out["length_one"] = json!(l1);
            }
        }
    }
    out
}

fn weights_to_document(sys: &MasSystem, weights: &BTreeMap<(String, String), f64>) -> GraphDocument {
    GraphDocument {
        nodes: sys.graph().labels().to_vec(),
        leader: sys.leader().to_string(),
        edges: sys
            .graph()
            .edge_list()
            .into_iter()
            .map(|(u, v, w)| {
                let w = *weights.get(&edge_key(&u, &v)).unwrap_or(&w);
                EdgeDoc { u, v, w }
            })
            .collect(),
    }
}

fn write_document(path: &Path, doc: &GraphDocument) -> Result<()> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn cmd_analyze(path: &Path, tol: Option<f64>) -> Result<Value> {
    let sys = load_system(path)?;
    let g = sys.graph();
    let rank = sys.controllability_rank(tol);
    let partition = if g.is_connected() {
        let dp = g.distance_partition(sys.leader())?;
        json!({"layers": dp.layers, "length": dp.length})
    } else {
        Value::Null
    };
    Ok(json!({
        "leader": sys.leader(),
        "n": sys.node_count(),
        "edge_count": g.edge_count(),
        "connected": g.is_connected(),
        "components": g.component_count(),
        "distance_partition": partition,
        "rank": rank.rank,
        "controllable": rank.rank == sys.node_count(),
        "tolerance": rank.tolerance_used,
    }))
}

fn cmd_nonfragility(
    path: &Path,
    method: MethodArg,
    strict: bool,
    tol: Option<f64>,
) -> Result<Value> {
    let sys = load_system(path)?;
    let mut out = json!({ "leader": sys.leader(), "n": sys.node_count() });
    let brute = match method {
        MethodArg::Brute | MethodArg::Both => {
            Some(nonfragility::classify_brute_force(&sys, tol)?)
        }
        MethodArg::Graphic => None,
    };
    let graphic = match method {
        MethodArg::Graphic | MethodArg::Both => {
            Some(nonfragility::classify_graphic(sys.graph(), sys.leader())?)
        }
        MethodArg::Brute => None,
    };
    if let Some(b) = &brute {
        out["brute"] = fragility_json(b);
    }
    if let Some(g) = &graphic {
        out["graphic"] = fragility_json(g);
    }
    if let (Some(b), Some(g)) = (&brute, &graphic) {
        // fixed weights can never beat the best weights
        let achievable = g.graphic_k.unwrap_or(sys.node_count().saturating_sub(1));
        let consistent = b.k <= achievable;
        out["consistent"] = json!(consistent);
        if strict && !consistent {
            return Err(Error::StrictDisagreement(format!(
                "brute-force k={} exceeds achievable k={achievable}",
                b.k
            )));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_groups(
    path: &Path,
    check: &Option<Vec<String>>,
    maximal: bool,
    include: &Option<Vec<String>>,
    all: bool,
    criterion: CriterionArg,
    t0: f64,
    t1: f64,
    strict: bool,
    tol: Option<f64>,
) -> Result<Value> {
    let sys = load_system(path)?;
    let selected = [check.is_some(), maximal, all]
        .iter()
        .filter(|&&b| b)
        .count();
    if selected != 1 {
        return Err(Error::Parse(
            "exactly one of --check, --maximal, --all is required".to_string(),
        ));
    }
    let rank = sys.controllability_rank(tol);
    let mut out = json!({
        "leader": sys.leader(),
        "n": sys.node_count(),
        "rank": rank.rank,
    });
    if let Some(group) = check {
        let rows = match criterion {
            CriterionArg::Rows | CriterionArg::Both => {
                Some(groups::check_group_rows(&sys, group, tol)?)
            }
            CriterionArg::Grammian => None,
        };
        let gram = match criterion {
            CriterionArg::Grammian | CriterionArg::Both => {
                Some(groups::check_group_grammian(&sys, group, t0, t1, tol)?)
            }
            CriterionArg::Rows => None,
        };
        if let Some(v) = &rows {
            out["rows"] = group_verdict_json(v);
        }
        if let Some(v) = &gram {
            out["grammian"] = group_verdict_json(v);
        }
        if let (Some(r), Some(g)) = (&rows, &gram) {
            let agree = r.partially_controllable == g.partially_controllable;
            out["agreement"] = json!(agree);
            if strict && !agree {
                return Err(Error::StrictDisagreement(
                    "row-rank and Grammian verdicts differ".to_string(),
                ));
            }
        }
    } else if maximal {
        let seed_group: Vec<String> = include.clone().unwrap_or_default();
        let group = groups::maximal_group(&sys, &seed_group, tol)?;
        out["maximal_group"] = json!(group);
        out["size"] = json!(group.len());
    } else {
        let all_groups = groups::all_maximal_groups(&sys, tol, None)?;
        out["count"] = json!(all_groups.len());
        out["maximal_groups"] = json!(all_groups);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_preserve(
    path: &Path,
    important: &[String],
    removed: &Option<Vec<String>>,
    min_break: bool,
    synthesize: bool,
    scenarios: &Option<PathBuf>,
    out_path: &Option<PathBuf>,
    seed: u64,
    tol: Option<f64>,
) -> Result<Value> {
    let sys = load_system(path)?;
    let mut out = json!({
        "leader": sys.leader(),
        "important": important,
    });
    if let Some(removed) = removed {
        let structural = preservation::check_preservation_structural(&sys, important, removed)?;
        let numeric = preservation::check_preservation_numeric(&sys, important, removed, tol)?;
        out["removed"] = json!(removed);
        out["structurally_preserved"] = json!(structural.structurally_preserved);
        out["violated_targets"] = json!(structural.violated_targets);
        out["numeric"] = group_verdict_json(&numeric);
    }
    if min_break || removed.is_none() && !synthesize {
        let brk = preservation::min_breaking_set(&sys, important)?;
        out["min_break"] = json!({
            "exists": brk.exists,
            "size": brk.size,
            "witness": brk.witness,
        });
    }
    if synthesize {
        let scenario_list = load_scenarios(scenarios, removed)?;
        let weights =
            preservation::synthesize_preserving_weights(&sys, important, &scenario_list, seed, tol)?;
        let doc = weights_to_document(&sys, &weights);
        out["seed"] = json!(seed);
        out["scenarios"] = json!(scenario_list);
        out["weights"] = json!(doc.edges);
        if let Some(p) = out_path {
            write_document(p, &doc)?;
            out["written"] = json!(p.display().to_string());
        }
    }
    Ok(out)
}

fn load_scenarios(
    scenarios: &Option<PathBuf>,
    removed: &Option<Vec<String>>,
) -> Result<Vec<Vec<String>>> {
    match scenarios {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
        }
        None => Ok(match removed {
            Some(r) => vec![r.clone()],
            None => Vec::new(),
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_steer(
    path: &Path,
    target_args: &[String],
    t0: f64,
    t1: f64,
    x0_path: &Option<PathBuf>,
    steps: usize,
    out_path: &Option<PathBuf>,
    tol: Option<f64>,
) -> Result<Value> {
    let sys = load_system(path)?;
    let mut targets = BTreeMap::new();
    for arg in target_args {
        let (label, value) = arg
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("target {arg:?} is not label=value")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("target {arg:?} has a non-numeric value")))?;
        targets.insert(label.to_string(), value);
    }
    let group: Vec<String> = targets.keys().cloned().collect();
    let x0 = match x0_path {
        Some(p) => Some(load_x0(p, &sys)?),
        None => None,
    };
    let plan = steering::plan_steering(&sys, &group, x0.as_ref(), &targets, t0, t1, tol)?;
    let sim = steering::simulate(&sys, &plan, steps)?;
    let max_error = sim
        .target_error
        .iter()
        .map(|(_, e)| *e)
        .fold(0.0_f64, f64::max);
    if let Some(p) = out_path {
        write_trajectory_csv(p, &sys, &sim)?;
    }
    Ok(json!({
        "leader": sys.leader(),
        "node_order": sys.graph().labels(),
        "group": sim.group,
        "t0": t0,
        "t1": t1,
        "steps": steps,
        "targets": targets,
        "z": sim.z.as_slice(),
        "final_state_closed_form": sim.final_state_closed_form.as_slice(),
        "final_state_simulated": sim.trajectory.last().map(|(_, x)| x.as_slice().to_vec()),
        "target_error": sim.target_error.iter().cloned().collect::<BTreeMap<_, _>>(),
        "max_target_error": max_error,
        "trajectory_written": out_path.as_ref().map(|p| p.display().to_string()),
    }))
}

fn load_x0(path: &Path, sys: &MasSystem) -> Result<DVector<f64>> {
    let text = std::fs::read_to_string(path)?;
    let map: BTreeMap<String, f64> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut x0 = DVector::zeros(sys.node_count());
    for (label, value) in map {
        x0[sys.graph().index_of(&label)?] = value;
    }
    Ok(x0)
}

fn write_trajectory_csv(path: &Path, sys: &MasSystem, plan: &steering::SteeringPlan) -> Result<()> {
    use std::fmt::Write as _;
    let mut csv = String::from("time");
    for label in sys.graph().labels() {
        write!(csv, ",x_{label}").expect("string write");
    }
    csv.push('\n');
    for (t, x) in &plan.trajectory {
        write!(csv, "{t}").expect("string write");
        for v in x.iter() {
            write!(csv, ",{v}").expect("string write");
        }
        csv.push('\n');
    }
    std::fs::write(path, csv)?;
    Ok(())
}

fn cmd_synthesize(
    path: &Path,
    mode: ModeArg,
    important: &Option<Vec<String>>,
    scenarios: &Option<PathBuf>,
    out_path: &Option<PathBuf>,
    seed: u64,
    tol: Option<f64>,
) -> Result<Value> {
    let sys = load_system(path)?;
    let mut out = json!({ "leader": sys.leader() });
    let (weights, extra) = match mode {
        ModeArg::Snf => {
            let (weights, bound) =
                nonfragility::synthesize_snf_weights(sys.graph(), sys.leader(), tol)?;
            (weights, json!({"mode": "snf", "follower_weight": bound}))
        }
        ModeArg::Preserve => {
            let important = important.clone().ok_or_else(|| {
                Error::Parse("--mode preserve requires --important".to_string())
            })?;
            let scenario_list = load_scenarios(scenarios, &None)?;
            let weights = preservation::synthesize_preserving_weights(
                &sys,
                &important,
                &scenario_list,
                seed,
                tol,
            )?;
            (
                weights,
                json!({
                    "mode": "preserve",
                    "important": important,
                    "scenarios": scenario_list,
                    "seed": seed,
                }),
            )
        }
    };
    if let Value::Object(src) = extra {
        for (k, v) in src {
            out[k] = v;
        }
    }
    let doc = weights_to_document(&sys, &weights);
    out["weights"] = json!(doc.edges);
    if let Some(p) = out_path {
        write_document(p, &doc)?;
        out["written"] = json!(p.display().to_string());
    }
    Ok(out)
}
