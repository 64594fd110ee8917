use std::path::PathBuf;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use homogen::graph::{write_edges, write_ranks, DEFAULT_VERTEX_BUDGET};
use homogen::homogeneity::{
    build_homogeneous_cayley, implicit_ball, measure_homogeneity_with, BuildMode, Homogeneous, LabelMode, OrderedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::io::{parse_rational, read_graph, read_ranks, write_output, Output};
use crate::Status;

#[derive(Subcommand)]
pub enum OrderCmd {
    /// Histogram of ordered `r`-ball types.
    Measure {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        r: usize,
        /// Ignore labels and orientations.
        #[arg(long)]
        unlabelled: bool,
    },
    /// Ordered Cayley graph with `2k` generators, girth above `2r + 1` and
    /// a `1 - epsilon` share of the reference type.
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Materialize)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: u128,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        order_out: Option<PathBuf>,
        /// Implicit mode: number of random inner balls to compare with the
        /// reference type.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Materialize,
    Implicit,
}

pub fn run(cmd: OrderCmd, out: &Output) -> Result<Status> {
    match cmd {
        OrderCmd::Measure { graph, order, r, unlabelled } => {
            let g = read_graph(&graph)?;
            let ranks = read_ranks(&g, &order)?;
            let og = OrderedGraph::new(g, ranks)?;
            let mode = if unlabelled { LabelMode::Unlabelled } else { LabelMode::Labelled };
            let rep = measure_homogeneity_with(&og, r, mode);
            let classes: Vec<_> = rep.classes.iter().map(|c| json!({ "count": c.count, "type_hash": c.type_hash })).collect();
            let text = format!("alpha = {} over {} vertices, {} types", rep.alpha, rep.vertices, rep.classes.len());
            out.emit(
                &json!({
                    "command": "order measure",
                    "r": r,
                    "vertices": rep.vertices,
                    "alpha_num": rep.alpha.numer(),
                    "alpha_den": rep.alpha.denom(),
                    "classes": classes,
                }),
                &text,
            );
        }
        OrderCmd::Build { k, r, epsilon, mode, budget, output, order_out, samples, seed } => {
            let eps = parse_rational(&epsilon)?;
            let mode = match mode {
                ModeArg::Materialize => BuildMode::Materialize,
                ModeArg::Implicit => BuildMode::Implicit,
            };
            match build_homogeneous_cayley(k, r, &eps, mode, budget)? {
                Homogeneous::Materialized(m) => {
                    let g = &m.ordered.graph;
                    if let Some(p) = &order_out {
                        write_output(Some(p), &write_ranks(g, m.ordered.rank()))?;
                    }
                    if !out.json || output.is_some() {
                        write_output(output.as_ref(), &write_edges(g))?;
                    }
                    let count = m.tau_star_count();
                    out.emit(
                        &json!({
                            "command": "order build",
                            "mode": "materialize",
                            "k": k,
                            "r": r,
                            "n": m.n(),
                            "group": m.spec.to_string(),
                            "vertices": g.vertex_count(),
                            "components": m.component_count,
                            "girth": m.girth,
                            "tau_star": m.tau_star.type_hash(),
                            "tau_star_count": count,
                            "alpha_num": m.report.alpha.numer(),
                            "alpha_den": m.report.alpha.denom(),
                        }),
                        "",
                    );
                }
                Homogeneous::Implicit(h) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (lo, hi) = (r as i64, h.n() as i64 - 1 - r as i64);
                    let mut hits = 0;
                    for _ in 0..samples {
                        let coords: Vec<i64> = (0..h.d()).map(|_| rng.gen_range(lo..=hi)).collect();
                        let u = h.element(&coords)?;
                        if &implicit_ball(&h, &u, r)?.ball_type == h.tau_star() {
                            hits += 1;
                        }
                    }
                    let text = format!(
                        "implicit {} (n = {}, d = {}); {hits}/{samples} sampled inner balls match the reference type",
                        h.spec(),
                        h.n(),
                        h.d()
                    );
                    out.emit(
                        &json!({
                            "command": "order build",
                            "mode": "implicit",
                            "k": k,
                            "r": r,
                            "n": h.n(),
                            "d": h.d(),
                            "group": h.spec().to_string(),
                            "tau_star": h.tau_star().type_hash(),
                            "tau_star_vertices": h.tau_star().vertex_count,
                            "samples": samples,
                            "seed": seed,
                            "sample_hits": hits,
                        }),
                        &text,
                    );
                }
            }
        }
    }
    Ok(Status::Ok)
}
