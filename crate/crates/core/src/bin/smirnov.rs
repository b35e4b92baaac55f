use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use smirnov::a_integral::TruncationLadder;
use smirnov::boundary::DEFAULT_GRID_N;
use smirnov::cli::commands::{cmd_aintegral, cmd_eval, cmd_factor, cmd_hp, cmd_product, EvalTarget, FactorMode};
use smirnov::cli::descriptor::{FunctionDescriptor, RealData};
use smirnov::cli::verify::run_suite;
use smirnov::cli::{DEFAULT_IMAGE_N, DEFAULT_SEED};
use smirnov::products::{GeneratorSpec, DEFAULT_TRUNCATION};
use smirnov::{Error, C64};

#[derive(Parser, Debug)]
#[command(name = "smirnov", version, about = "Real Smirnov functions on the unit disk: evaluation, factorizations, products, A-integrals and H^p trends")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON input document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed of the probe point generator, recorded in every report.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Evaluation points `re,im`; repeatable.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<C64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function at points, or on a polar image grid of |z| ≤ radius.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        radius: Option<f64>,
        /// Rings and angles of the image grid.
        #[arg(long = "grid-n", default_value_t = DEFAULT_IMAGE_N)]
        grid_n: usize,
    },
    /// Helson, Koebe or sum-of-squares factorization as JSON.
    Factor {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "koebe")]
        mode: FactorMode,
        /// Boundary grid size.
        #[arg(long = "grid-n", env = "SMIRNOV_GRID_N", default_value_t = DEFAULT_GRID_N)]
        grid_n: usize,
    },
    /// Convergence verdict and partial-product trace of a generated sequence.
    Product {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Herglotz A-integral traces for real boundary data.
    Aintegral {
        #[command(flatten)]
        common: Common,
        /// Comma-separated truncation levels (default 1, 2, 4, …, 16384).
        #[arg(long, value_parser = parse_ladder)]
        ladder: Option<TruncationLadder>,
        #[arg(long = "grid-n", env = "SMIRNOV_GRID_N", default_value_t = DEFAULT_GRID_N)]
        grid_n: usize,
    },
    /// Radial H^p means and growth verdicts.
    Hp {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exponents in (0, 4].
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        exponents: Vec<f64>,
        #[arg(long = "grid-n", env = "SMIRNOV_GRID_N", default_value_t = DEFAULT_GRID_N)]
        grid_n: usize,
    },
    /// Run a named self-check suite; exits nonzero if any check fails.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad coordinate {x:?}: {e}"));
    Ok(C64::new(p(re)?, p(im)?))
}

fn parse_ladder(s: &str) -> Result<TruncationLadder, String> {
    let levels = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad level {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    TruncationLadder::new(levels).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Module(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

fn read_input(common: &Common) -> Result<String, Failure> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| Failure::Module(Error::Schema("--input is required".into())))?;
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Module(Error::Schema(e.to_string())))
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn points_or_origin(common: &Common) -> Vec<C64> {
    if common.points.is_empty() {
        vec![C64::new(0.0, 0.0)]
    } else {
        common.points.clone()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { common, radius, grid_n } => {
            let boundary_n = std::env::var("SMIRNOV_GRID_N")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(DEFAULT_GRID_N);
            let desc = FunctionDescriptor::parse(&read_input(&common)?, boundary_n)?;
            let target = match radius {
                Some(r) if common.points.is_empty() => {
                    if !(0.0..=1.0).contains(&r) {
                        return Err(Error::InvalidParameter(format!("radius {r} outside [0, 1]")).into());
                    }
                    EvalTarget::Image { radius: r, n: grid_n }
                }
                _ => EvalTarget::Points(points_or_origin(&common)),
            };
            write_output(common.output.as_ref(), &cmd_eval(&desc, &target, boundary_n, common.seed)?)
        }
        Command::Factor { common, mode, grid_n } => {
            let desc = FunctionDescriptor::parse(&read_input(&common)?, grid_n)?;
            write_output(common.output.as_ref(), &cmd_factor(&desc, mode, grid_n, common.seed)?)
        }
        Command::Product { common, truncation } => {
            let spec: GeneratorSpec = parse_json(&read_input(&common)?)?;
            let points = points_or_origin(&common);
            write_output(common.output.as_ref(), &cmd_product(&spec, truncation, &points, common.seed)?)
        }
        Command::Aintegral { common, ladder, grid_n } => {
            let v: RealData = parse_json(&read_input(&common)?)?;
            let ladder = ladder.unwrap_or_default();
            let points = points_or_origin(&common);
            write_output(common.output.as_ref(), &cmd_aintegral(&v, &points, &ladder, grid_n, common.seed)?)
        }
        Command::Hp { common, exponents, grid_n } => {
            let desc = FunctionDescriptor::parse(&read_input(&common)?, grid_n)?;
            write_output(common.output.as_ref(), &cmd_hp(&desc, &exponents, grid_n, common.seed)?)
        }
        Command::Verify { suite, seed, output } => {
            let report = run_suite(&suite, seed)?;
            write_output(output.as_ref(), &report.render())?;
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Module(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Schema(_) | Error::InvalidParameter(_) => 2,
                _ => 4,
            })
        }
    }
}
