use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use homogen::graph::{verify_covering, write_edges, write_ranks, LDigraph};
use homogen::homogeneity::OrderedGraph;
use homogen::lifts::{connect_seam, homogeneous_lift, Covering, DisjointLift};
use serde_json::json;

use crate::io::{read_graph, read_ranks, write_output, Output};
use crate::Status;

#[derive(Subcommand)]
pub enum LiftCmd {
    /// Equi-label product of an ordered graph `H` with a base `G`.
    Build {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        h_order: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// `lifted_vertex base_vertex h_vertex` lines.
        #[arg(long)]
        emit_map: Option<PathBuf>,
        /// Completed order of the lift.
        #[arg(long)]
        order_out: Option<PathBuf>,
        /// Break ties inside H-fibres with this seed instead of base ids.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Disjoint copies of a base, reconnected along the edge `u -> v`.
    Seam {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        copies: usize,
        /// Vertex ids of the seam edge.
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        label: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// `lifted_vertex base_vertex` lines.
        #[arg(long)]
        emit_map: Option<PathBuf>,
    },
}

fn summary(cover: &LDigraph, base: &LDigraph, to_base: &[usize]) -> serde_json::Value {
    let rep = verify_covering(cover, base, to_base);
    json!({
        "vertices": cover.vertex_count(),
        "edges": cover.edge_count(),
        "components": cover.component_labels().1,
        "girth": cover.girth(),
        "covering": rep.ok,
        "fibre_size": rep.fibre_size,
    })
}

pub fn run(cmd: LiftCmd, out: &Output) -> Result<Status> {
    match cmd {
        LiftCmd::Build { h, h_order, g, output, emit_map, order_out, seed } => {
            let hg = read_graph(&h)?;
            let ranks = read_ranks(&hg, &h_order)?;
            let ho = OrderedGraph::new(hg, ranks)?;
            let base = read_graph(&g)?;
            let mut lift = homogeneous_lift(&ho, &base)?;
            if let Some(s) = seed {
                lift = lift.with_seeded_completion(s);
            }
            if let Some(p) = &emit_map {
                write_output(Some(p), &lift.map_lines(&ho.graph))?;
            }
            if let Some(p) = &order_out {
                write_output(Some(p), &write_ranks(lift.lifted(), lift.ordered.rank()))?;
            }
            if !out.json || output.is_some() {
                write_output(output.as_ref(), &write_edges(lift.lifted()))?;
            }
            let mut s = summary(lift.lifted(), &base, &lift.to_base);
            s["command"] = json!("lift build");
            out.emit(&s, "");
        }
        LiftCmd::Seam { g, copies, u, v, label, output, emit_map } => {
            let base = read_graph(&g)?;
            let (ui, vi) = (base.index_of(u)?, base.index_of(v)?);
            let dl = DisjointLift::new(&base, copies);
            let Covering { graph, to_base } = connect_seam(&dl, &base, ui, vi, &label).context("connecting the seam")?;
            if let Some(p) = &emit_map {
                let mut text = String::new();
                for (x, &b) in to_base.iter().enumerate() {
                    let _ = writeln!(text, "{} {}", graph.id(x), base.id(b));
                }
                write_output(Some(p), &text)?;
            }
            if !out.json || output.is_some() {
                write_output(output.as_ref(), &write_edges(&graph))?;
            }
            let mut s = summary(&graph, &base, &to_base);
            s["command"] = json!("lift seam");
            out.emit(&s, "");
        }
    }
    Ok(Status::Ok)
}
