use std::path::PathBuf;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use homogen::generators::{
    build_level, certify_girth, certify_girth_bfs, certify_stratified, compute_schedule, GeneratorParams, GeneratorSet,
    DEFAULT_WORD_BUDGET,
};
use serde_json::json;

use crate::io::{read_input, write_output, Output};
use crate::Status;

#[derive(Subcommand)]
pub enum GensCmd {
    /// Build the generator set of a level (default: the top level `g`).
    Build {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        level: Option<u32>,
        /// Keep only the first `k` generators.
        #[arg(long)]
        take: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print `f`, `h` and `n` of the construction.
    Schedule {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
    },
    /// Check that no reduced word of length at most `girth` vanishes.
    Certify {
        #[arg(long)]
        girth: u32,
        /// Generator file, `-` for stdin.
        #[arg(long, default_value = "-")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Words)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_WORD_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Words,
    Bfs,
    Stratified,
}

pub fn run(cmd: GensCmd, out: &Output) -> Result<Status> {
    match cmd {
        GensCmd::Build { g, m, level, take, output } => {
            let params = GeneratorParams::new(g, m)?;
            let mut set = build_level(params, level.unwrap_or(g))?;
            if let Some(k) = take {
                set = set.truncated(k);
            }
            let text = set.to_string();
            if out.json {
                if let Some(p) = &output {
                    write_output(Some(p), &text)?;
                }
                let elements: Vec<String> = set.elements.iter().map(|e| e.to_string()).collect();
                out.emit(
                    &json!({ "command": "gens build", "g": g, "m": m, "level": set.level, "count": set.len(), "elements": elements }),
                    "",
                );
            } else {
                write_output(output.as_ref(), &text)?;
            }
        }
        GensCmd::Schedule { g, m } => {
            let s = compute_schedule(GeneratorParams::new(g, m)?);
            let text = format!("f = {:?}\nh = {:?}\nn = {:?}", s.f, s.h, s.n);
            out.emit(&json!({ "command": "gens schedule", "g": g, "m": m, "f": s.f, "h": s.h, "n": s.n }), &text);
        }
        GensCmd::Certify { girth, input, strategy, budget } => {
            let set: GeneratorSet = read_input(&input)?.parse()?;
            let cert = match strategy {
                StrategyArg::Words => certify_girth(&set, girth, budget)?,
                StrategyArg::Bfs => certify_girth_bfs(&set, girth, budget)?,
                StrategyArg::Stratified => certify_stratified(&set, girth, budget)?,
            };
            let text = match &cert.witness {
                None => format!("ok: girth > {girth} ({} checked)", cert.checked),
                Some(w) => format!("failed: {w} is the identity"),
            };
            let witness = cert.witness.as_ref().map(|w| w.to_string());
            out.emit(
                &json!({
                    "command": "gens certify",
                    "ok": cert.ok,
                    "girth_bound": girth,
                    "strategy": cert.strategy,
                    "checked": cert.checked,
                    "witness": witness,
                    "g": set.params.g,
                    "m": set.params.m,
                    "level": set.level,
                    "count": set.len(),
                }),
                &text,
            );
            if !cert.ok {
                return Ok(Status::CheckFailed);
            }
        }
    }
    Ok(Status::Ok)
}
