//! Thin command-line front end: parses arguments, dispatches to the library
//! runner, prints or persists the JSON report, and exits nonzero when any
//! embedded expectation fails.

use clap::{Parser, Subcommand};
use g2kummer::report::{persist, run, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "g2kummer",
    version,
    about = "Flat G2-orbifold resolutions: groups, singular sets, deformation loci, and certified associative counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Default)]
struct Common {
    /// fixture file (JSON)
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// output directory for the report (printed to stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// random seed for the sampled diagnostics
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// also emit CSV sweep files (requires --out)
    #[arg(long)]
    csv: bool,
    /// tolerance overrides, e.g. --tolerance decay_slope_max=-2.9
    #[arg(long = "tolerance", value_name = "KEY=VALUE")]
    tolerances: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// The six flat three-dimensional group classes and their base orbifolds
    EnumerateBieberbach(Common),
    /// Exact singular set of a seven-torus quotient fixture
    SingularSet {
        #[command(flatten)]
        common: Common,
        /// alias for --fixture
        #[arg(long)]
        orbifold: Option<PathBuf>,
    },
    /// Wall-avoiding fixed loci in an ALE deformation space
    FixedLocus(Common),
    /// Harmonicity, decay and closedness diagnostics of the multi-center ansatz
    VerifyGh(Common),
    /// Certified associative-submanifold lower bounds for an example fixture
    CountAssociatives {
        #[command(flatten)]
        common: Common,
        /// orbifold part of a split fixture (with --resolution)
        #[arg(long)]
        orbifold: Option<PathBuf>,
        /// resolution part of a split fixture (with --orbifold)
        #[arg(long)]
        resolution: Option<PathBuf>,
    },
    /// Period-uniform estimate sweep and the contraction solver
    FueterDemo(Common),
    /// List the shipped example fixtures with their expected counts
    ListExamples(Common),
}

fn build_config(name: &str, common: &Common, fixtures: Vec<PathBuf>) -> RunConfig {
    let mut config = RunConfig::new(name);
    config.fixtures = fixtures;
    config.seed = common.seed;
    config.emit_csv = common.csv;
    config.out_dir = common.out.clone();
    for entry in &common.tolerances {
        if let Some((k, v)) = entry.split_once('=') {
            if let Ok(x) = v.parse::<f64>() {
                config.tolerances.insert(k.to_string(), x);
            }
        }
    }
    config
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, fixtures): (&str, Common, Vec<PathBuf>) = match &cli.command {
        Command::EnumerateBieberbach(c) => (
            "enumerate-bieberbach",
            c.clone(),
            c.fixture.iter().cloned().collect(),
        ),
        Command::SingularSet { common, orbifold } => {
            let f = common.fixture.clone().or_else(|| orbifold.clone());
            ("singular-set", common.clone(), f.into_iter().collect())
        }
        Command::FixedLocus(c) => (
            "fixed-locus",
            c.clone(),
            c.fixture.iter().cloned().collect(),
        ),
        Command::VerifyGh(c) => ("verify-gh", c.clone(), c.fixture.iter().cloned().collect()),
        Command::CountAssociatives {
            common,
            orbifold,
            resolution,
        } => {
            let fixtures = match (&common.fixture, orbifold, resolution) {
                (Some(f), _, _) => vec![f.clone()],
                (None, Some(o), Some(r)) => vec![o.clone(), r.clone()],
                _ => Vec::new(),
            };
            ("count-associatives", common.clone(), fixtures)
        }
        Command::FueterDemo(c) => (
            "fueter-demo",
            c.clone(),
            c.fixture.iter().cloned().collect(),
        ),
        Command::ListExamples(c) => (
            "list-examples",
            c.clone(),
            c.fixture.iter().cloned().collect(),
        ),
    };

    let config = build_config(name, &common, fixtures);
    match run(&config) {
        Ok((report, csv)) => {
            match &config.out_dir {
                Some(dir) => match persist(&report, &csv, dir) {
                    Ok(path) => eprintln!("report written to {}", path.display()),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
                None => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("serialisable")
                    );
                }
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "{} check(s) failed",
                    report.checks.iter().filter(|c| !c.pass).count()
                );
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
