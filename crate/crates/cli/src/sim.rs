use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use homogen::graph::LDigraph;
use homogen::homogeneity::{measure_homogeneity, OrderedGraph};
use homogen::localsim::{
    agreement_fraction, approx_ratio, brute_force_optimum, builtin_names, builtin_with_radius, po_from_oi, run as run_alg,
    verify_detailed, LocalAlgorithm, Model, Output as NodeOutput, Problem, RatioOutcome, RunInputs, Solution, SolutionKind,
    TreeOrder,
};
use serde_json::{json, Value};

use crate::io::{ratio_json, read_graph, read_ids, read_json, read_ranks, write_output, Output};
use crate::Status;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Po,
    Oi,
    Id,
}

#[derive(clap::Args)]
pub struct AlgArgs {
    /// Built-in algorithm name (see `sim list`).
    #[arg(long)]
    alg: String,
    /// Expected model of `--alg`, checked before any transfer.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    radius: Option<usize>,
    /// Run an OI algorithm as the PO algorithm it induces through the
    /// dominant ordered ball type of this graph ...
    #[arg(long, requires = "transfer_order")]
    transfer_h: Option<PathBuf>,
    /// ... under this order.
    #[arg(long, requires = "transfer_h")]
    transfer_order: Option<PathBuf>,
    #[arg(long)]
    graph: PathBuf,
    /// Vertex order (OI).
    #[arg(long)]
    order: Option<PathBuf>,
    /// Vertex identifiers (ID), `vertex id` lines.
    #[arg(long)]
    ids: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum SimCmd {
    /// List built-in algorithms and problems.
    List,
    /// Run an algorithm and write its solution as JSON.
    Run {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fraction of vertices on which two solutions agree.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Run a problem's local verifier on a solution.
    Verify {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Exhaustive optimum (at most 20 vertices or edges).
    Optimum {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Approximation ratio of an algorithm on one instance.
    Ratio {
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        alg: AlgArgs,
    },
}

fn problem(name: &str) -> Result<Problem> {
    Problem::by_name(name).with_context(|| format!("unknown problem {name:?}; known: {}", Problem::NAMES.join(", ")))
}

fn algorithm(a: &AlgArgs) -> Result<LocalAlgorithm> {
    if !builtin_names().contains(&a.alg.as_str()) {
        bail!("unknown algorithm {:?}; known: {}", a.alg, builtin_names().join(", "));
    }
    let mut alg = match a.radius {
        Some(r) => builtin_with_radius(&a.alg, r)?,
        None => homogen::localsim::builtin(&a.alg).expect("name checked"),
    };
    if let Some(m) = a.model {
        let want = match m {
            ModelArg::Po => Model::Po,
            ModelArg::Oi => Model::Oi,
            ModelArg::Id => Model::Id,
        };
        if alg.model() != want {
            bail!("{} is a {} algorithm, not {}", alg.name, alg.model(), want);
        }
    }
    if let (Some(h), Some(o)) = (&a.transfer_h, &a.transfer_order) {
        let hg = read_graph(h)?;
        let ranks = read_ranks(&hg, o)?;
        let og = OrderedGraph::new(hg, ranks)?;
        let star = measure_homogeneity(&og, alg.radius).dominant().cloned().context("empty reference graph")?;
        alg = po_from_oi(&alg, &TreeOrder::from_type(&star)?)?;
    }
    Ok(alg)
}

fn execute(a: &AlgArgs, g: &LDigraph, alg: &LocalAlgorithm) -> Result<Solution> {
    let ranks = a.order.as_ref().map(|p| read_ranks(g, p)).transpose()?;
    let ids = a.ids.as_ref().map(|p| read_ids(g, p)).transpose()?;
    let inputs = RunInputs { ranks: ranks.as_deref(), ids: ids.as_deref(), local: None };
    Ok(run_alg(alg, g, inputs)?)
}

fn solution_json(alg: &LocalAlgorithm, g: &LDigraph, s: &Solution) -> Value {
    let mut v = s.to_json(g);
    v["command"] = json!("sim run");
    v["algorithm"] = json!(alg.name);
    v["model"] = json!(alg.model().to_string());
    v["radius"] = json!(alg.radius);
    v["vertex_ids"] = json!(g.ids());
    v["per_node"] = serde_json::to_value(&s.outputs).expect("outputs serialize");
    v
}

fn read_solution(path: &Path, g: Option<&LDigraph>) -> Result<(SolutionKind, Vec<NodeOutput>)> {
    let v = read_json(path)?;
    let kind: SolutionKind = serde_json::from_value(v["kind"].clone()).context("missing or bad `kind`")?;
    let outputs: Vec<NodeOutput> = serde_json::from_value(v["per_node"].clone()).context("missing or bad `per_node`")?;
    if let Some(g) = g {
        if let Some(ids) = v.get("vertex_ids") {
            let ids: Vec<u64> = serde_json::from_value(ids.clone()).context("bad `vertex_ids`")?;
            if ids != g.ids() {
                bail!("{} was computed on a graph with other vertex ids", path.display());
            }
        }
    }
    Ok((kind, outputs))
}

pub fn run(cmd: SimCmd, out: &Output) -> Result<Status> {
    match cmd {
        SimCmd::List => {
            let algs: Vec<_> = builtin_names()
                .iter()
                .map(|n| {
                    let a = homogen::localsim::builtin(n).expect("registered");
                    json!({ "name": n, "model": a.model().to_string(), "radius": a.radius, "kind": a.kind })
                })
                .collect();
            let text = format!("algorithms: {}\nproblems: {}", builtin_names().join(", "), Problem::NAMES.join(", "));
            out.emit(&json!({ "command": "sim list", "algorithms": algs, "problems": Problem::NAMES }), &text);
        }
        SimCmd::Run { alg: a, output } => {
            let g = read_graph(&a.graph)?;
            let alg = algorithm(&a)?;
            let s = execute(&a, &g, &alg)?;
            let v = solution_json(&alg, &g, &s);
            let text = serde_json::to_string_pretty(&v)? + "\n";
            match &output {
                Some(p) => {
                    write_output(Some(p), &text)?;
                    out.emit(&v, &format!("{}: {} selected", alg.name, s.len()));
                }
                None => print!("{text}"),
            }
        }
        SimCmd::Compare { a, b } => {
            let (ka, oa) = read_solution(&a, None)?;
            let (kb, ob) = read_solution(&b, None)?;
            if ka != kb {
                bail!("solutions have different kinds");
            }
            let to = |kind, outputs| Solution { kind, members: Vec::new(), outputs };
            let f = agreement_fraction(&to(ka, oa), &to(kb, ob))?;
            out.emit(&json!({ "command": "sim compare", "agreement": ratio_json(&f) }), &format!("agreement {f}"));
        }
        SimCmd::Verify { problem: p, graph, solution } => {
            let p = problem(&p)?;
            let g = read_graph(&graph)?;
            let (kind, outputs) = read_solution(&solution, Some(&g))?;
            let s = Solution::from_outputs(&g, kind, outputs)?;
            let accepts = verify_detailed(&p, &g, &s)?;
            let rejecting: Vec<u64> = accepts.iter().enumerate().filter(|(_, &ok)| !ok).map(|(v, _)| g.id(v)).collect();
            let ok = rejecting.is_empty();
            let text = if ok { "feasible".to_string() } else { format!("infeasible: rejected at {rejecting:?}") };
            out.emit(
                &json!({ "command": "sim verify", "problem": p.name, "ok": ok, "size": s.len(), "rejecting": rejecting }),
                &text,
            );
            if !ok {
                return Ok(Status::CheckFailed);
            }
        }
        SimCmd::Optimum { problem: p, graph } => {
            let p = problem(&p)?;
            let g = read_graph(&graph)?;
            let opt = brute_force_optimum(&p, &g)?;
            let text = opt.map_or("no feasible solution".to_string(), |x| x.to_string());
            out.emit(&json!({ "command": "sim optimum", "problem": p.name, "objective": p.objective, "optimum": opt }), &text);
        }
        SimCmd::Ratio { problem: p, alg: a } => {
            let p = problem(&p)?;
            let g = read_graph(&a.graph)?;
            let alg = algorithm(&a)?;
            let ranks = a.order.as_ref().map(|x| read_ranks(&g, x)).transpose()?;
            let ids = a.ids.as_ref().map(|x| read_ids(&g, x)).transpose()?;
            let inputs = RunInputs { ranks: ranks.as_deref(), ids: ids.as_deref(), local: None };
            let r = approx_ratio(&alg, &p, &g, inputs)?;
            let (value, text) = match r {
                RatioOutcome::Ratio(x) => (ratio_json(&x), x.to_string()),
                RatioOutcome::Infeasible => (json!("infeasible"), "infeasible".into()),
                RatioOutcome::Unbounded => (json!("unbounded"), "unbounded".into()),
            };
            out.emit(&json!({ "command": "sim ratio", "problem": p.name, "algorithm": alg.name, "ratio": value }), &text);
        }
    }
    Ok(Status::Ok)
}
