//! `homogen`: build homogeneously ordered Cayley graphs and lifts, and run
//! local algorithms on them.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 when a check
//! (girth certificate, covering, verifier) fails.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod gens;
mod graph;
mod group;
mod io;
mod lift;
mod order;
mod ramsey;
mod report;
mod sim;

#[derive(Parser)]
#[command(name = "homogen", version, about = "Homogeneous orders, lifts and local algorithm simulation")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic in the groups U, H and W.
    #[command(subcommand)]
    Group(group::GroupCmd),
    /// High-girth generator sets.
    #[command(subcommand)]
    Gens(gens::GensCmd),
    /// L-digraph construction and queries.
    #[command(subcommand)]
    Graph(graph::GraphCmd),
    /// Homogeneity of ordered graphs.
    #[command(subcommand)]
    Order(order::OrderCmd),
    /// Lifts of L-digraphs.
    #[command(subcommand)]
    Lift(lift::LiftCmd),
    /// Local algorithms and verifiers.
    #[command(subcommand)]
    Sim(sim::SimCmd),
    /// Identifier colourings and monochromatic subsets.
    #[command(subcommand)]
    Ramsey(ramsey::RamseyCmd),
    /// Merge JSON artifacts of earlier runs into one report.
    Report(report::ReportArgs),
}

/// Result of a command that ran to completion.
pub enum Status {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = io::Output { json: cli.json };
    let result = match cli.command {
        Command::Group(c) => group::run(c, &out),
        Command::Gens(c) => gens::run(c, &out),
        Command::Graph(c) => graph::run(c, &out),
        Command::Order(c) => order::run(c, &out),
        Command::Lift(c) => lift::run(c, &out),
        Command::Sim(c) => sim::run(c, &out),
        Command::Ramsey(c) => ramsey::run(c, &out),
        Command::Report(a) => report::run(a, &out),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
