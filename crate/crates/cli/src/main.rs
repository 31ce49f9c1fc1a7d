//! Command-line front end: translate formulas, classify translations and
//! run verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use translogic::catalog::Catalog;
use translogic::formula::parse;
use translogic::suite::{edge_section, report_of, run_suite, suite_names, SuiteReport};
use translogic::translation::{apply_translation, classify_shape};
use translogic::verify::{with_workers, Bounds};
use translogic::Error;

/// Exit codes: verification mismatch, usage or configuration error,
/// formula parse error.
const MISMATCH: u8 = 1;
const USAGE: u8 = 2;
const PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "translogic", version, about = "Check translations between logics against expressiveness criteria")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Extra catalog files merged over the shipped catalog.
    #[arg(long, global = true)]
    catalog: Vec<PathBuf>,
    /// Bound overrides such as `max_nodes=5`; repeat the flag or separate
    /// with commas.
    #[arg(long, global = true, value_delimiter = ',', value_name = "KEY=VALUE")]
    bounds: Vec<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel checks.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Zero the timing fields of the report.
    #[arg(long, global = true)]
    no_elapsed: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the image of a formula under a catalog translation.
    Translate { translation: String, formula: String },
    /// Print the shape classification of a catalog translation.
    Classify { translation: String },
    /// Run checks and report them as JSON.
    Verify {
        #[command(subcommand)]
        target: Option<VerifyTarget>,
        /// Suite name, as an alternative to `verify suite NAME`.
        #[arg(long)]
        suite: Option<String>,
    },
    /// List the available suites.
    Suites,
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// A named suite, or `full` for all of them.
    Suite { name: String },
    /// One catalog edge, written `SOURCE->TARGET`.
    Edge {
        edge: String,
        #[arg(long)]
        via: String,
    },
    /// The over-generation counterexamples.
    Counterexamples,
    /// The verified preorder over the registry logics.
    Preorder,
}

enum Failure {
    Usage(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(p) => Failure::Parse(p.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(PARSE)
        }
    }
}

fn load_catalog(paths: &[PathBuf]) -> Result<Catalog, Failure> {
    let mut catalog = Catalog::builtin();
    for p in paths {
        catalog.merge_file(p)?;
    }
    catalog.validate()?;
    Ok(catalog)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = cli.global;
    let catalog = load_catalog(&g.catalog)?;
    let mut bounds = Bounds::default();
    for b in &g.bounds {
        bounds.set(b)?;
    }
    bounds.validate()?;
    match cli.command {
        Command::Translate { translation, formula } => {
            let t = catalog.translation(&translation)?;
            let source = catalog.logic(&t.source)?;
            let f = parse(&formula, &source.signature).map_err(|e| Failure::Parse(e.to_string()))?;
            println!("{}", apply_translation(t, &f)?);
            Ok(0)
        }
        Command::Classify { translation } => {
            let shape = classify_shape(catalog.translation(&translation)?);
            println!("{}", shape.labels().join(", "));
            Ok(0)
        }
        Command::Suites => {
            for name in suite_names() {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Verify { target, suite } => {
            let target = match (target, suite) {
                (Some(t), None) => t,
                (None, Some(name)) => VerifyTarget::Suite { name },
                _ => return Err(Failure::Usage("give exactly one of a verify target or --suite".into())),
            };
            let overrides = g.bounds.clone();
            let report = with_workers(g.workers, || verify(&catalog, target, &overrides))??;
            let json = report.to_json(!g.no_elapsed);
            match &g.out {
                Some(path) => std::fs::write(path, json).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{json}"),
            }
            for s in &report.sections {
                eprintln!("{} {}: {} outcomes, {} mismatches", if s.passed() { "PASS" } else { "FAIL" }, s.name, s.outcomes.len(), s.mismatches());
            }
            Ok(if report.mismatches() == 0 { 0 } else { MISMATCH })
        }
    }
}

fn verify(catalog: &Catalog, target: VerifyTarget, overrides: &[String]) -> Result<SuiteReport, Failure> {
    Ok(match target {
        VerifyTarget::Suite { name } => run_suite(catalog, &name, overrides)?,
        VerifyTarget::Counterexamples => run_suite(catalog, "overgeneration", overrides)?,
        VerifyTarget::Preorder => run_suite(catalog, "preorder", overrides)?,
        VerifyTarget::Edge { edge, via } => {
            let t = catalog.translation(&via)?;
            let (source, target) =
                edge.split_once("->").ok_or_else(|| Failure::Usage(format!("edge `{edge}` is not of the form SOURCE->TARGET")))?;
            if (source.trim(), target.trim()) != (t.source.as_str(), t.target.as_str()) {
                return Err(Failure::Usage(format!("`{via}` goes from {} to {}, not {edge}", t.source, t.target)));
            }
            report_of("edge", overrides, vec![edge_section(catalog, &via, overrides)?])
        }
    })
}
