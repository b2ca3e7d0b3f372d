//! Driver binary.
//!
//! Every run writes a JSON report (and any CSV traces) into the output
//! directory and prints the report to stdout.  Exit codes: 0 for a
//! positive or completed answer, 1 for a definite mathematical no,
//! 2 for input problems, 3 when a question stayed undecided.  The
//! flags that influence numeric routines are echoed in the report
//! header, and identical inputs with identical flags give identical
//! bytes.

mod commands;
mod instance;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use commands::{Flags, Outcome};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "hodge-degen", about = "Exact computations on degenerating Hodge structures")]
struct Cli {
    /// stopping tolerance for iterative splittings
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// seed for randomized probes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// doubling cap for iterative splittings
    #[arg(long = "max-iter", global = true, default_value_t = 60)]
    max_iter: usize,
    /// output directory, overridden by HODGE_DEGEN_OUT
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the mixed Hodge structure axioms
    MhsCheck { instance: PathBuf },
    /// Compute and verify the canonical bigrading
    Bigrading { instance: PathBuf },
    /// Compute the splitting operator and the split form
    Delta { instance: PathBuf },
    /// Relative weight filtrations of the cone generators
    Monodromy { instance: PathBuf },
    /// Decide whether the cone and filtration generate a nilpotent orbit
    Nilporbit { instance: PathBuf },
    /// Associated descent data along the generator chain
    Sl2 { instance: PathBuf },
    /// Fan of a root set given in meta.roots
    Fan { instance: PathBuf },
    /// Dual monoid and pairing table of a cone
    Monoid { instance: PathBuf },
    /// Ratio classes and valuative labels of the declared paths
    Ratio { instance: PathBuf },
    /// Full boundary classification of the declared paths
    Classify { instance: PathBuf },
    /// CSV traces of chart coordinates along the declared paths
    Trace { instance: PathBuf },
    /// Run a named worked example (ex1, ex2, ex3, ex6)
    Example { name: String },
}

fn out_dir(cli: &Cli) -> PathBuf {
    if let Ok(dir) = std::env::var("HODGE_DEGEN_OUT") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    cli.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn base_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.display().to_string())
}

fn run(cli: &Cli) -> Result<i32> {
    let flags = Flags {
        tol: cli.tol,
        seed: cli.seed,
        max_iter: cli.max_iter,
    };
    let (name, input, outcome): (&str, String, Outcome) = match &cli.cmd {
        Cmd::MhsCheck { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("mhs-check", base_name(instance), commands::mhs_check(&inst)?)
        }
        Cmd::Bigrading { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("bigrading", base_name(instance), commands::bigrading(&inst)?)
        }
        Cmd::Delta { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("delta", base_name(instance), commands::delta(&inst)?)
        }
        Cmd::Monodromy { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("monodromy", base_name(instance), commands::monodromy(&inst)?)
        }
        Cmd::Nilporbit { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("nilporbit", base_name(instance), commands::nilporbit(&inst, &flags)?)
        }
        Cmd::Sl2 { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("sl2", base_name(instance), commands::sl2(&inst, &flags)?)
        }
        Cmd::Fan { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("fan", base_name(instance), commands::fan(&inst)?)
        }
        Cmd::Monoid { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("monoid", base_name(instance), commands::monoid(&inst)?)
        }
        Cmd::Ratio { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("ratio", base_name(instance), commands::ratio(&inst)?)
        }
        Cmd::Classify { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("classify", base_name(instance), commands::classify(&inst, &flags)?)
        }
        Cmd::Trace { instance } => {
            let inst = instance::parse_instance(instance)?;
            ("trace", base_name(instance), commands::trace(&inst)?)
        }
        Cmd::Example { name } => ("example", name.clone(), commands::example(name, &flags)?),
    };

    let report = json!({
        "header": {
            "command": name,
            "input": input,
            "tol": format!("{:e}", cli.tol),
            "seed": cli.seed,
            "max_iter": cli.max_iter,
        },
        "result": outcome.report,
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";

    let dir = out_dir(cli);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let report_path = dir.join(format!("{}-report.json", name));
    std::fs::write(&report_path, &text)
        .with_context(|| format!("cannot write {}", report_path.display()))?;
    for (file, contents) in &outcome.artifacts {
        let p = dir.join(file);
        std::fs::write(&p, contents).with_context(|| format!("cannot write {}", p.display()))?;
    }
    print!("{}", text);
    Ok(outcome.exit)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {:#}", e);
            2
        }
    };
    std::process::exit(code);
}
