mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use stategeom::format::parse_space;
use stategeom::scalar::parse_vector;
use stategeom::{Error, ExactScalar, ExactStateSpace};

use commands::{CmdResult, Output};
use report::{InputDigest, RunReport};

/// Exact geometry of finite-dimensional state spaces.
#[derive(Parser)]
#[command(name = "stategeom", version)]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArg {
    /// State space JSON file.
    #[arg(long)]
    space: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// List every face with rank and a certificate counter.
    Faces(SpaceArg),
    /// Face lattice: cover relation and distributivity.
    Lattice(SpaceArg),
    /// Detection ratio y:x.
    Ratio {
        #[command(flatten)]
        space: SpaceArg,
        /// Extreme point index for x.
        #[arg(long, conflicts_with = "x_point", required_unless_present = "x_point")]
        x: Option<usize>,
        /// Coordinates of x, e.g. 1/2,0.
        #[arg(long)]
        x_point: Option<String>,
        /// Extreme point index for y.
        #[arg(long, conflicts_with = "y_point", required_unless_present = "y_point")]
        y: Option<usize>,
        /// Coordinates of y.
        #[arg(long)]
        y_point: Option<String>,
    },
    /// Orthogonality of two faces, or the maximal faces orthogonal to one.
    Orth {
        #[command(flatten)]
        space: SpaceArg,
        /// Extreme point indices, e.g. 0,1.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        face: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        other: Option<Vec<usize>>,
    },
    /// Support counter of a face.
    Counter {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        face: Vec<usize>,
    },
    /// Convex decomposition of a state, and whether it is unique.
    Decompose {
        #[command(flatten)]
        space: SpaceArg,
        /// Coordinates, e.g. 1/2,1/2.
        #[arg(long)]
        point: String,
    },
    /// Whether the space is a simplex.
    SimplexCheck(SpaceArg),
    /// Numerical checks of the qubit and polygon results.
    QuantumCheck {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random state pairs per dimension.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        /// Random effects per pair.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Write the built-in example spaces as JSON files.
    Gallery {
        #[arg(long)]
        out: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Faces(_) => "faces",
            Command::Lattice(_) => "lattice",
            Command::Ratio { .. } => "ratio",
            Command::Orth { .. } => "orth",
            Command::Counter { .. } => "counter",
            Command::Decompose { .. } => "decompose",
            Command::SimplexCheck(_) => "simplex-check",
            Command::QuantumCheck { .. } => "quantum-check",
            Command::Gallery { .. } => "gallery",
        }
    }
}

fn load(path: &Path, digest: &mut InputDigest) -> Result<ExactStateSpace, Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    digest.file(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Input(format!("{} is not UTF-8", path.display())))?;
    parse_space(&text)
}

fn state(
    space: &ExactStateSpace,
    index: Option<usize>,
    coords: Option<&str>,
) -> Result<Vec<ExactScalar>, Error> {
    match (index, coords) {
        (Some(i), _) => Ok(space.vertex(i)?.0),
        (None, Some(text)) => parse_vector(text),
        (None, None) => Err(Error::Input("missing state".to_string())),
    }
}

fn run(command: &Command, digest: &mut InputDigest) -> CmdResult {
    match command {
        Command::Faces(a) => commands::faces(&load(&a.space, digest)?),
        Command::Lattice(a) => commands::lattice(&load(&a.space, digest)?),
        Command::Ratio {
            space,
            x,
            x_point,
            y,
            y_point,
        } => {
            let s = load(&space.space, digest)?;
            let xs = state(&s, *x, x_point.as_deref())?;
            let ys = state(&s, *y, y_point.as_deref())?;
            commands::ratio(&s, &xs, &ys)
        }
        Command::Orth { space, face, other } => {
            let s = load(&space.space, digest)?;
            commands::orth(&s, face, other.as_deref())
        }
        Command::Counter { space, face } => commands::support(&load(&space.space, digest)?, face),
        Command::Decompose { space, point } => {
            let s = load(&space.space, digest)?;
            commands::decomposition(&s, &parse_vector(point)?)
        }
        Command::SimplexCheck(a) => commands::simplex_check(&load(&a.space, digest)?),
        Command::QuantumCheck {
            seed,
            pairs,
            trials,
        } => commands::quantum_check(*seed, *pairs, *trials),
        Command::Gallery { out } => commands::write_gallery(out),
    }
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::Domain(_) | Error::Resource(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut digest = InputDigest::default();
    for arg in std::env::args().skip(1) {
        if arg != "--json" && arg != "--timing" {
            digest.arg(&arg);
        }
    }
    let start = Instant::now();
    let outcome = run(&cli.command, &mut digest);
    let timing_ms = cli
        .timing
        .then(|| start.elapsed().as_secs_f64() * 1000.0);
    let mut report = RunReport {
        command: cli.command.name().to_string(),
        input_digest: digest.finish(),
        results: json!(null),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timing_ms,
    };
    match outcome {
        Ok(Output {
            results,
            text,
            failed,
        }) => {
            if cli.json {
                report.results = results;
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{text}");
                if let Some(ms) = timing_ms {
                    println!("time: {ms:.1} ms");
                }
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let message = match &e {
                Error::Input(m) | Error::Domain(m) | Error::Resource(m) => m.clone(),
            };
            eprintln!("error: {message}");
            if cli.json {
                let kind = match e {
                    Error::Input(_) => "input",
                    Error::Domain(_) => "domain",
                    Error::Resource(_) => "resource",
                };
                report.results = json!({ "error": { "kind": kind, "message": message } });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            }
            ExitCode::from(exit_status(&e))
        }
    }
}
