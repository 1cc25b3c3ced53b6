use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use owc_core::collection::Bounds;
use owc_core::interleave::initial_owc;
use owc_core::pasting::enumerate_trees;
use owc_core::verify::{run_suite_with, SUITES};

#[derive(Parser)]
#[command(name = "owc", version, about = "Bounded operads-with-contraction: enumeration, construction and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every pasting diagram of one dimension up to a size, one JSON per line.
    Trees {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the bounded initial operad-with-contraction and print its cell counts.
    BuildInitial {
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exits nonzero if any fails.
    Verify {
        #[command(flatten)]
        bounds: BoundArgs,
        /// Suite name, or `all`. Repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Globular set or collection JSON to run the suites on.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = Bounds::default().max_dim)]
    dim: usize,
    #[arg(long, default_value_t = Bounds::default().max_arity_size)]
    max_arity_size: usize,
    #[arg(long, default_value_t = Bounds::default().max_term_size)]
    max_term_size: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Result<Bounds> {
        let b = Bounds::new(self.dim, self.max_arity_size, self.max_term_size);
        b.validate()?;
        Ok(b)
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_trees(dim: usize, max_size: usize, out: Option<&Path>) -> Result<()> {
    let trees = enumerate_trees(dim, max_size);
    let mut w = sink(out)?;
    for t in &trees {
        writeln!(w, "{}", serde_json::to_string(&t.to_json())?)?;
    }
    w.flush()?;
    if out.is_some() {
        println!("{} diagrams", trees.len());
    } else {
        eprintln!("{} diagrams", trees.len());
    }
    Ok(())
}

fn cmd_build_initial(bounds: Bounds, out: Option<&Path>) -> Result<()> {
    let state = initial_owc(bounds)?;
    for d in 0..=bounds.max_dim {
        println!("dim {d}: {}", state.count(d));
    }
    let overflow: usize = state.log.iter().map(|l| l.overflow).sum();
    println!("overflow: {overflow}");
    if let Some(p) = out {
        let mut w = sink(Some(p))?;
        serde_json::to_writer(&mut w, &state.to_json())?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_verify(bounds: Bounds, suites: &[String], input: Option<&Path>, out: Option<&Path>) -> Result<bool> {
    let input = match input {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            Some(serde_json::from_str::<serde_json::Value>(&text).with_context(|| format!("{} is not JSON", p.display()))?)
        }
        None => None,
    };
    let names: Vec<&str> = suites
        .iter()
        .flat_map(|s| if s == "all" { SUITES.to_vec() } else { vec![s.as_str()] })
        .collect();
    if names.is_empty() {
        return Ok(true);
    }
    let mut reports = Vec::new();
    for name in names {
        let r = run_suite_with(name, &bounds, input.as_ref())?;
        eprintln!("{name}: {} ({} violations, {} ms)", if r.pass { "pass" } else { "FAIL" }, r.violations.len(), r.ms);
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.pass);
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &reports)?;
    writeln!(w)?;
    w.flush()?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Trees { dim, max_size, out } => cmd_trees(dim, max_size, out.as_deref()).map(|_| true),
        Command::BuildInitial { bounds, out } => cmd_build_initial(bounds.bounds()?, out.as_deref()).map(|_| true),
        Command::Verify {
            bounds,
            suites,
            input,
            out,
        } => cmd_verify(bounds.bounds()?, &suites, input.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
