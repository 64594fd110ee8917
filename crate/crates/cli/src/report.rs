use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Result};
use serde_json::{json, Value};

use crate::io::{read_json, write_output, Output};
use crate::Status;

#[derive(clap::Args)]
pub struct ReportArgs {
    /// JSON artifact written by another command (repeatable).
    #[arg(long = "input", required = false)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn section(command: &str) -> &'static str {
    match command {
        "gens schedule" => "schedule",
        "gens certify" => "certificates",
        "order measure" | "order build" => "homogeneity",
        "sim compare" => "agreement",
        "sim ratio" | "sim optimum" => "ratios",
        _ => "other",
    }
}

pub fn run(args: ReportArgs, out: &Output) -> Result<Status> {
    if args.inputs.is_empty() {
        bail!("empty report: give at least one --input");
    }
    let mut sections: BTreeMap<&str, Vec<Value>> = BTreeMap::new();
    for p in &args.inputs {
        let v = read_json(p)?;
        let Some(command) = v.get("command").and_then(Value::as_str) else {
            bail!("{}: artifact has no `command` field", p.display());
        };
        sections.entry(section(command)).or_default().push(v);
    }
    for items in sections.values_mut() {
        items.sort_by_cached_key(|v| v.to_string());
        items.dedup();
    }
    let report = json!({ "command": "report", "artifacts": args.inputs.len(), "sections": sections });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &args.output {
        Some(p) => {
            write_output(Some(p), &text)?;
            let summary: Vec<String> = sections.iter().map(|(k, v)| format!("{k}: {}", v.len())).collect();
            out.emit(&report, &summary.join("\n"));
        }
        None => print!("{text}"),
    }
    Ok(Status::Ok)
}
