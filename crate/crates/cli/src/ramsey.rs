use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use homogen::homogeneity::{measure_homogeneity, OrderedGraph};
use homogen::localsim::{builtin_with_radius, complete_tree, TreeOrder};
use homogen::ramsey::{find_monochromatic, is_monochromatic, Colorer};
use serde_json::json;

use crate::io::{parse_list, parse_pool, read_graph, read_ranks, Output};
use crate::Status;

#[derive(clap::Args)]
pub struct TreeArgs {
    /// ID algorithm whose outputs define the colour.
    #[arg(long)]
    alg: String,
    #[arg(long, default_value_t = 1)]
    radius: usize,
    #[arg(long, default_value = "a")]
    alphabet: String,
    /// Degree bound of the subtrees; defaults to `2 |alphabet|`.
    #[arg(long)]
    delta: Option<usize>,
    /// Take `<*` from the dominant ordered ball type of this graph ...
    #[arg(long, requires = "reference_order")]
    reference: Option<PathBuf>,
    /// ... under this order. Without a reference `<*` is breadth-first order.
    #[arg(long, requires = "reference")]
    reference_order: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum RamseyCmd {
    /// Colour of one `t`-set of identifiers.
    Color {
        #[command(flatten)]
        tree: TreeArgs,
        /// Comma-separated identifiers, exactly `t = |T*|` of them.
        #[arg(long)]
        ids: String,
    },
    /// First `m`-subset of the pool whose `t`-subsets all share one colour.
    Search {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        m: usize,
        /// `lo..hi` (inclusive) or a comma-separated list.
        #[arg(long)]
        pool: String,
        /// Maximum number of colour evaluations.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

fn colorer(a: &TreeArgs) -> Result<Colorer> {
    let alg = builtin_with_radius(&a.alg, a.radius)?;
    let alphabet: Vec<String> = parse_list(&a.alphabet)?;
    if alphabet.is_empty() {
        bail!("empty alphabet");
    }
    let delta = a.delta.unwrap_or(2 * alphabet.len());
    let c = match (&a.reference, &a.reference_order) {
        (Some(h), Some(o)) => {
            let hg = read_graph(h)?;
            let ranks = read_ranks(&hg, o)?;
            let og = OrderedGraph::new(hg, ranks)?;
            let star = measure_homogeneity(&og, a.radius).dominant().cloned().context("empty reference graph")?;
            Colorer::from_order(&TreeOrder::from_type(&star)?, &alphabet, delta, alg)?
        }
        _ => {
            let tree = complete_tree(&alphabet, a.radius).shape;
            let ranks = (0..tree.len()).collect();
            Colorer::new(tree, ranks, delta, alg)?
        }
    };
    Ok(c)
}

pub fn run(cmd: RamseyCmd, out: &Output) -> Result<Status> {
    match cmd {
        RamseyCmd::Color { tree, ids } => {
            let c = colorer(&tree)?;
            let ids: Vec<u64> = parse_list(&ids)?;
            let table = c.color(&ids)?;
            let hash = table.hash();
            out.emit(
                &json!({
                    "command": "ramsey color",
                    "algorithm": tree.alg,
                    "t": c.t(),
                    "keys": c.keys.len(),
                    "ids": ids,
                    "color": hash,
                    "table": table.0,
                }),
                &format!("t = {}, {} subtrees, colour {hash}", c.t(), c.keys.len()),
            );
        }
        RamseyCmd::Search { tree, m, pool, budget } => {
            let c = colorer(&tree)?;
            let pool = parse_pool(&pool)?;
            let t = c.t();
            let found = find_monochromatic(&pool, t, m, |a| c.color(a), budget)?;
            let mut color = None;
            if let Some(j) = &found {
                if !is_monochromatic(j, t, |a| c.color(a))? {
                    bail!("search returned {j:?}, which is not monochromatic");
                }
                color = Some(c.color(&j[..t])?.hash());
            }
            let text = match &found {
                Some(j) => format!("monochromatic: {j:?}"),
                None => "no monochromatic subset".to_string(),
            };
            out.emit(
                &json!({
                    "command": "ramsey search",
                    "algorithm": tree.alg,
                    "t": t,
                    "m": m,
                    "pool": pool.len(),
                    "keys": c.keys.len(),
                    "witness": found,
                    "color": color,
                }),
                &text,
            );
        }
    }
    Ok(Status::Ok)
}
