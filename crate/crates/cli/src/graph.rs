use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use homogen::generators::GeneratorSet;
use homogen::graph::{cayley, to_dot, verify_covering, write_edges, write_ranks, CyclicProduct, LDigraph, DEFAULT_VERTEX_BUDGET};
use homogen::group::{GroupElement, GroupSpec};
use homogen::localsim::ranks_from_cmp;
use serde_json::json;

use crate::io::{parse_list, read_graph, read_input, read_ranks, write_output, Output};
use crate::Status;

#[derive(Subcommand)]
pub enum GraphCmd {
    /// Cayley graph of `Z_n1 x ... x Z_nk` (`--moduli`, `--gen name=c1,..,ck`)
    /// or of `H_i(n)` for a generator file (`--gens`, `--modulus`).
    Cayley {
        #[arg(long, value_delimiter = ',')]
        moduli: Vec<u64>,
        #[arg(long = "gen")]
        generators: Vec<String>,
        #[arg(long)]
        gens: Option<PathBuf>,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: u128,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the lexicographic (or U-restricted) order.
        #[arg(long)]
        order_out: Option<PathBuf>,
    },
    /// Girth of the underlying multigraph, or `infinite`.
    Girth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a covering map given as `cover_vertex base_vertex` lines.
    VerifyCover {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Graphviz output (at most 200 vertices).
    Dot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Connected components as lists of vertex ids.
    Components {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn cyclic(moduli: Vec<u64>, generators: &[String], budget: u128) -> Result<(LDigraph, Vec<usize>)> {
    let z = CyclicProduct::new(moduli)?;
    let mut gens = Vec::new();
    for g in generators {
        let (name, coords) = g.split_once('=').with_context(|| format!("expected name=c1,c2,.. in {g:?}"))?;
        let coords: Vec<i64> = parse_list(coords)?;
        gens.push((name.to_string(), z.element(&coords)?));
    }
    let c = cayley(&z, &gens, budget)?;
    let n = c.graph.vertex_count();
    Ok((c.graph, (0..n).collect()))
}

fn h_group(path: &std::path::Path, modulus: u64, budget: u128) -> Result<(LDigraph, Vec<usize>)> {
    let set: GeneratorSet = read_input(path)?.parse()?;
    let first = set.elements.first().context("empty generator set")?;
    let spec = GroupSpec::h(first.height(), modulus)?;
    let gens = set
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| Ok((format!("L{}", i + 1), GroupElement::from_labels(spec, e.labels().to_vec())?)))
        .collect::<Result<Vec<_>>>()?;
    let c = cayley(&spec, &gens, budget)?;
    let ranks = ranks_from_cmp(c.elements.len(), |a, b| c.elements[a].compare(&c.elements[b]).expect("same group"));
    Ok((c.graph, ranks))
}

pub fn run(cmd: GraphCmd, out: &Output) -> Result<Status> {
    match cmd {
        GraphCmd::Cayley { moduli, generators, gens, modulus, budget, output, order_out } => {
            let (g, ranks) = match (gens, modulus) {
                (Some(path), Some(n)) => h_group(&path, n, budget)?,
                (Some(_), None) => bail!("--gens needs --modulus"),
                (None, _) if moduli.is_empty() => bail!("give --moduli and --gen, or --gens and --modulus"),
                (None, _) => cyclic(moduli, &generators, budget)?,
            };
            if let Some(p) = &order_out {
                write_output(Some(p), &write_ranks(&g, &ranks))?;
            }
            if out.json {
                if let Some(p) = &output {
                    write_output(Some(p), &write_edges(&g))?;
                }
                out.emit(
                    &json!({
                        "command": "graph cayley",
                        "vertices": g.vertex_count(),
                        "edges": g.edge_count(),
                        "alphabet": g.alphabet(),
                        "girth": g.girth(),
                    }),
                    "",
                );
            } else {
                write_output(output.as_ref(), &write_edges(&g))?;
            }
        }
        GraphCmd::Girth { graph } => {
            let g = read_graph(&graph)?;
            let girth = g.girth();
            let text = girth.map_or("infinite".to_string(), |x| x.to_string());
            out.emit(&json!({ "command": "graph girth", "girth": girth }), &text);
        }
        GraphCmd::VerifyCover { cover, base, map } => {
            let c = read_graph(&cover)?;
            let b = read_graph(&base)?;
            let mut to_base = vec![None; c.vertex_count()];
            for (i, line) in read_input(&map)?.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut it = line.split_whitespace();
                let (Some(x), Some(y)) = (it.next(), it.next()) else {
                    bail!("{}:{}: expected `cover_vertex base_vertex`", map.display(), i + 1);
                };
                let x = c.index_of(x.parse().with_context(|| format!("line {}", i + 1))?)?;
                let y = b.index_of(y.parse().with_context(|| format!("line {}", i + 1))?)?;
                to_base[x] = Some(y);
            }
            let to_base: Vec<usize> = to_base
                .into_iter()
                .enumerate()
                .map(|(v, y)| y.with_context(|| format!("vertex {} is not mapped", c.id(v))))
                .collect::<Result<_>>()?;
            let rep = verify_covering(&c, &b, &to_base);
            let failures: Vec<_> = rep
                .failures
                .iter()
                .map(|f| json!({ "vertex": f.vertex, "reason": format!("{:?}", f.reason) }))
                .collect();
            let text = if rep.ok {
                format!("ok: covering with fibre size {}", rep.fibre_size.map_or("-".into(), |f| f.to_string()))
            } else {
                format!("not a covering: {} failures", rep.failures.len())
            };
            out.emit(
                &json!({ "command": "graph verify-cover", "ok": rep.ok, "fibre_size": rep.fibre_size, "failures": failures }),
                &text,
            );
            if !rep.ok {
                return Ok(Status::CheckFailed);
            }
        }
        GraphCmd::Dot { graph, order, output } => {
            let g = read_graph(&graph)?;
            let ranks = order.map(|p| read_ranks(&g, &p)).transpose()?;
            write_output(output.as_ref(), &to_dot(&g, ranks.as_deref())?)?;
        }
        GraphCmd::Components { graph } => {
            let g = read_graph(&graph)?;
            let (labels, count) = g.component_labels();
            let mut comps = vec![Vec::new(); count];
            for (v, &c) in labels.iter().enumerate() {
                comps[c].push(g.id(v));
            }
            let text = comps
                .iter()
                .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            out.emit(&json!({ "command": "graph components", "count": count, "components": comps }), &text);
        }
    }
    Ok(Status::Ok)
}
