use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dirichlet::generate::{perturbed, regular};
use dirichlet::input::PolygonInput;
use dirichlet::pipeline::{self, to_json, PipelineConfig};
use dirichlet::{Error, ErrorKind, Tolerances};

#[derive(Parser)]
#[command(name = "dirichlet", version, about = "Dirichlet domains of closed hyperbolic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Dirichlet domain of a fundamental polygon.
    Compute {
        input: PathBuf,
        /// Where to write the domain JSON (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Directory for the intermediate stages as JSON and SVG.
        #[arg(long)]
        dump_stages: Option<PathBuf>,
        /// A bare number sets the geometric tolerance; `name=value` sets
        /// geom, pred, norm, angle, area or merge. May be repeated.
        #[arg(long)]
        tol: Vec<String>,
        #[arg(long, default_value_t = dirichlet::flip::DEFAULT_FLIP_CAP)]
        flip_cap: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a test surface.
    Generate {
        kind: Kind,
        #[arg(long)]
        genus: usize,
        /// Seed for the perturbed kind.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a polygon with side pairings describes a closed surface.
    Validate {
        input: PathBuf,
        #[arg(long)]
        tol: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Regular,
    Perturbed,
}

fn tolerances(specs: &[String]) -> Result<Tolerances, Error> {
    let mut tol = Tolerances::default();
    for spec in specs {
        let (name, value) = spec.split_once('=').unwrap_or(("geom", spec));
        let value: f64 = value.trim().parse().map_err(|_| Error::Schema(format!("bad tolerance value in '{spec}'")))?;
        tol.set(name.trim(), value)?;
    }
    Ok(tol)
}

fn exit_code(err: &Error) -> u8 {
    match err.kind() {
        ErrorKind::Input => 1,
        ErrorKind::Validation => 2,
        ErrorKind::Numeric => 3,
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_error(err: &Error) {
    eprintln!("error: {err}");
    if let Error::ValidationFailed(report) = err {
        eprintln!("{report}");
    }
}

fn compute(
    input: &Path,
    out: Option<&Path>,
    svg: Option<&Path>,
    dump: Option<&Path>,
    config: PipelineConfig,
) -> Result<(), Error> {
    let raw = PolygonInput::read(input)?;
    let run = pipeline::run(&raw, &config)?;
    if let Some(dir) = dump {
        run.dump_stages(dir)?;
    }
    if let Some(path) = svg {
        fs::write(path, run.render_svg())?;
    }
    let json = run.domain_json()?;
    match out {
        Some(p) => {
            fs::write(p, json)?;
            println!("{}", run.summary());
        }
        None => {
            print!("{json}");
            eprintln!("{}", run.summary());
        }
    }
    if run.verification.passed() {
        Ok(())
    } else {
        Err(Error::VerificationFailed(run.verification.violations))
    }
}

fn validate(input: &Path, tol: &Tolerances) -> Result<bool, Error> {
    let raw = PolygonInput::read(input)?;
    raw.normalized_pairings()?;
    let outcome = pipeline::validate(&raw, tol);
    if let Some(report) = &outcome.report {
        println!("{report}");
    }
    match &outcome.map {
        Ok(_) => Ok(outcome.passed()),
        Err(Error::ValidationFailed(_)) => Ok(false),
        Err(e) if e.kind() == ErrorKind::Input => Err(Error::Schema(e.to_string())),
        Err(e) => {
            println!("error: {e}");
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute { input, out, svg, dump_stages, tol, flip_cap, samples, seed } => {
            tolerances(&tol).and_then(|tol| {
                let config = PipelineConfig { tol, flip_cap, samples, seed };
                compute(&input, out.as_deref(), svg.as_deref(), dump_stages.as_deref(), config)
            })
        }
        Command::Generate { kind, genus, seed, out } => {
            let raw = match kind {
                Kind::Regular => regular(genus),
                Kind::Perturbed => perturbed(genus, seed),
            };
            raw.and_then(|r| to_json(&r)).and_then(|text| write_or_print(out.as_deref(), &text))
        }
        Command::Validate { input, tol } => match tolerances(&tol).and_then(|tol| validate(&input, &tol)) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report_error(&err);
            ExitCode::from(exit_code(&err))
        }
    }
}
