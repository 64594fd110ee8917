use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use homogen::graph::{parse_edges, parse_ranks, LDigraph};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};

pub struct Output {
    pub json: bool,
}

impl Output {
    /// Prints `value` as JSON, or `text` otherwise.
    pub fn emit(&self, value: &Value, text: &str) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
        } else if !text.is_empty() {
            println!("{text}");
        }
    }
}

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes to a file, or stdout when no path is given.
pub fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_graph(path: &Path) -> Result<LDigraph> {
    parse_edges(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_ranks(g: &LDigraph, path: &Path) -> Result<Vec<usize>> {
    let ranks = parse_ranks(g, &read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let mut seen = vec![false; ranks.len()];
    for &r in &ranks {
        if r >= ranks.len() || std::mem::replace(&mut seen[r], true) {
            bail!("{}: ranks must be a permutation of 0..{}", path.display(), ranks.len());
        }
    }
    Ok(ranks)
}

/// `vertex id` lines, same layout as an order file.
pub fn read_ids(g: &LDigraph, path: &Path) -> Result<Vec<u64>> {
    let ids = parse_ranks(g, &read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(ids.into_iter().map(|x| x as u64).collect())
}

pub fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let q: BigInt = q.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            if q == BigInt::from(0) {
                bail!("zero denominator in {s:?}");
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().with_context(|| format!("bad rational {s:?}"))?)),
    }
}

/// `lo..hi` (inclusive) or a comma-separated list.
pub fn parse_pool(s: &str) -> Result<Vec<u64>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().with_context(|| format!("bad pool {s:?}"))?;
        let hi: u64 = hi.trim().trim_start_matches('=').parse().with_context(|| format!("bad pool {s:?}"))?;
        if lo > hi {
            bail!("empty pool {s:?}");
        }
        return Ok((lo..=hi).collect());
    }
    parse_list(s)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|_| anyhow::anyhow!("bad list element {x:?}")))
        .collect()
}

pub fn ratio_json(r: &Ratio<u64>) -> Value {
    json!({ "num": r.numer(), "den": r.denom() })
}
