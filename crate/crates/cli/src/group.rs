use anyhow::Result;
use clap::Subcommand;
use homogen::group::{GroupElement, GroupSpec};
use serde_json::json;

use crate::io::Output;
use crate::Status;

/// Elements are written `U:3:[1,0,2,0,0,0,-1]` (labels breadth-first);
/// group tags are `U`, `W` and `H<n>`.
#[derive(Subcommand)]
pub enum GroupCmd {
    /// Product `a b`.
    Mul { a: String, b: String },
    Inverse { a: String },
    /// Compare in the order on U (finite elements via their representatives).
    Compare { a: String, b: String },
    /// Reduce labels into another group of the same height, e.g. `--to W:3`.
    Reduce {
        a: String,
        #[arg(long)]
        to: String,
    },
    /// Whether an element of U is in the positive cone.
    Positive { a: String },
}

fn parse(s: &str) -> Result<GroupElement> {
    Ok(s.parse()?)
}

pub fn run(cmd: GroupCmd, out: &Output) -> Result<Status> {
    match cmd {
        GroupCmd::Mul { a, b } => {
            let p = parse(&a)?.mul(&parse(&b)?)?;
            out.emit(&json!({ "command": "group mul", "result": p.to_string() }), &p.to_string());
        }
        GroupCmd::Inverse { a } => {
            let p = parse(&a)?.inverse();
            out.emit(&json!({ "command": "group inverse", "result": p.to_string() }), &p.to_string());
        }
        GroupCmd::Compare { a, b } => {
            let o = parse(&a)?.compare(&parse(&b)?)?;
            let s = match o {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            out.emit(&json!({ "command": "group compare", "result": s }), s);
        }
        GroupCmd::Reduce { a, to } => {
            let spec: GroupSpec = to.parse()?;
            let p = parse(&a)?.reduce_modulus(spec)?;
            out.emit(&json!({ "command": "group reduce", "result": p.to_string() }), &p.to_string());
        }
        GroupCmd::Positive { a } => {
            let p = parse(&a)?.is_positive()?;
            out.emit(&json!({ "command": "group positive", "result": p }), &p.to_string());
        }
    }
    Ok(Status::Ok)
}
