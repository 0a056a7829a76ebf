//! Command-line surface. Everything here is deterministic given `--seed`.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{BasisMatrix, BasisTag, Biquaternion};
use crate::constructors::{
    cartan_to_standard_vars, cf_solution, special_solution, switch_coordinates,
};
use crate::error::{Error, Result};
use crate::holoexpr::{HoloExpr, Point4, DEFAULT_ORACLE_N, DEFAULT_ORACLE_RADIUS};
use crate::operators::{
    cauchy_fueter, dirac, induced_psi, laplacian, sample_points, weighted_oracle, BqFunction,
    PsiWeights, ResidualReport, Side,
};
use crate::parser::{function_from_json, function_to_json, load_job, parse_expr, Job, PsiSpec};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Standard,
    Cartan,
}

impl From<Basis> for BasisTag {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Standard => BasisTag::Standard,
            Basis::Cartan => BasisTag::Cartan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "biquat",
    version,
    about = "Complex quaternion algebra and weighted Dirac operators"
)]
pub struct Cli {
    /// RNG seed for sample points.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of sample points.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    /// Verification threshold on max_abs.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Circle radius of the Cauchy-integral derivative oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_RADIUS)]
    pub radius: f64,
    /// Node count of the Cauchy-integral derivative oracle.
    #[arg(long = "oracle-n", global = true, default_value_t = DEFAULT_ORACLE_N)]
    pub oracle_n: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two biquaternions (JSON literals or files).
    Mul {
        a: String,
        b: String,
        /// Convert both operands to this basis first.
        #[arg(long = "in-basis", value_enum)]
        in_basis: Option<Basis>,
    },
    /// Re-express a biquaternion in another basis.
    Convert {
        a: String,
        /// Target basis; defaults to the other one.
        #[arg(long, value_enum)]
        emit: Option<Basis>,
    },
    /// Apply a job's operator symbolically and print the result.
    Dirac { job: PathBuf },
    /// Build a closed-form solution.
    Solve {
        #[command(subcommand)]
        kind: SolveKind,
    },
    /// Check a job's function against its operator at seeded sample points.
    Verify { job: PathBuf },
    /// Componentwise four-variable Laplacian of a function (JSON literal or file).
    Laplacian { function: String },
    /// Weights induced by a change of basis (JSON literal or file with k, m, n, r).
    #[command(name = "induced-psi")]
    InducedPsi {
        matrix: String,
        #[arg(long, value_enum)]
        emit: Option<Basis>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveKind {
    /// f from g1(z2, z3) and g2(z1, z4).
    Cf {
        #[arg(long, default_value = "0")]
        g1: String,
        #[arg(long, default_value = "0")]
        g2: String,
        /// `standard` pulls the solution back to t-variables.
        #[arg(long, value_enum)]
        emit: Option<Basis>,
    },
    /// f for the special weight family; g's use slots z1, z2, z3.
    Special {
        /// Parameter object (JSON literal or file).
        #[arg(long)]
        params: String,
        #[arg(long, default_value = "0")]
        g1: String,
        #[arg(long, default_value = "0")]
        g2: String,
        #[arg(long, default_value = "0")]
        g3: String,
        #[arg(long, default_value = "0")]
        g4: String,
        #[arg(long, value_enum)]
        emit: Option<Basis>,
    },
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: EXIT_OK,
        }
    }
}

/// Runs a parsed command line. Errors map to [`EXIT_VALIDATION`].
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Mul { a, b, in_basis } => {
            let a: Biquaternion = read_typed(a)?;
            let b: Biquaternion = read_typed(b)?;
            let (a, b) = match in_basis {
                Some(basis) => (a.to_basis((*basis).into()), b.to_basis((*basis).into())),
                None => (a, b),
            };
            let product = a.mul(&b)?;
            Ok(Outcome::ok(render_biquaternion(&product, cli.output)))
        }
        Command::Convert { a, emit } => {
            let a: Biquaternion = read_typed(a)?;
            let target = emit.map(BasisTag::from).unwrap_or(a.basis.other());
            Ok(Outcome::ok(render_biquaternion(
                &a.to_basis(target),
                cli.output,
            )))
        }
        Command::Dirac { job } => {
            let job = load_job(job)?;
            let (_, residual) = residual_of(&job)?;
            Ok(Outcome::ok(render_function(&residual, cli.output)))
        }
        Command::Solve { kind } => solve(kind, cli.output),
        Command::Verify { job } => verify(cli, &load_job(job)?),
        Command::Laplacian { function } => {
            let f = function_from_json(&read_json(function)?)?;
            Ok(Outcome::ok(render_function(&laplacian(&f), cli.output)))
        }
        Command::InducedPsi { matrix, emit } => {
            let m: BasisMatrix = read_typed(matrix)?;
            let psi = induced_psi(&m)?;
            let basis = emit.map(BasisTag::from).unwrap_or(BasisTag::Cartan);
            Ok(Outcome::ok(render_weights(&psi, basis, cli.output)))
        }
    }
}

/// Parses `args` and runs; parse and validation failures are reported on
/// the returned outcome rather than by exiting.
pub fn run_args<I, T>(args: I) -> (Outcome, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                (Outcome::ok(text), None)
            } else {
                (
                    Outcome {
                        stdout: String::new(),
                        exit_code: code,
                    },
                    Some(text),
                )
            };
        }
    };
    match run(&cli) {
        Ok(out) => (out, None),
        Err(e) => (
            Outcome {
                stdout: String::new(),
                exit_code: EXIT_VALIDATION,
            },
            Some(format!("error: {e}")),
        ),
    }
}

/// The residual function of a job and the weights (in the residual's basis)
/// of the operator that produced it.
fn residual_of(job: &Job) -> Result<([Biquaternion; 4], BqFunction)> {
    match job.psi.weights()? {
        None => {
            let f = switch_coordinates(&job.f, BasisTag::Standard);
            let units = [0, 1, 2, 3].map(|k| Biquaternion::unit(BasisTag::Standard, k));
            Ok((units, cauchy_fueter(&f)?))
        }
        Some(psi) => {
            let f = switch_coordinates(&job.f, BasisTag::Cartan);
            Ok((*psi.psi(), dirac(&psi, &f, job.side)?))
        }
    }
}

fn operand_function(job: &Job) -> BqFunction {
    match job.psi {
        PsiSpec::CauchyFueter => switch_coordinates(&job.f, BasisTag::Standard),
        _ => switch_coordinates(&job.f, BasisTag::Cartan),
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    report: &'a ResidualReport,
    oracle_max_abs: f64,
}

fn verify(cli: &Cli, job: &Job) -> Result<Outcome> {
    let seed = cli.seed.or(job.options.seed).unwrap_or(DEFAULT_SEED);
    let samples = cli
        .samples
        .map(|n| n as usize)
        .or(job.options.samples)
        .unwrap_or(DEFAULT_SAMPLES);
    let tolerance = cli
        .tolerance
        .or(job.options.tolerance)
        .unwrap_or(DEFAULT_TOLERANCE);

    let (weights, residual) = residual_of(job)?;
    let points = sample_points(seed, samples);
    let report = ResidualReport::from_residual(&residual, &points)?;
    let oracle_max_abs = oracle_max_abs(job, &weights, &points, cli.radius, cli.oracle_n)?;

    let exit_code = if report.max_abs > tolerance {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    };
    let stdout = match cli.output {
        OutputFormat::Json => to_json(&VerifyOutput {
            report: &report,
            oracle_max_abs,
        }),
        OutputFormat::Text => format!(
            "symbolic_zero: {}\nmax_abs: {:e}\noracle_max_abs: {:e}\npoints: {}\nverdict: {}\n",
            report.symbolic_zero,
            report.max_abs,
            oracle_max_abs,
            report.per_point.len(),
            if exit_code == EXIT_OK { "pass" } else { "FAIL" },
        ),
    };
    Ok(Outcome { stdout, exit_code })
}

fn oracle_max_abs(
    job: &Job,
    weights: &[Biquaternion; 4],
    points: &[Point4],
    radius: f64,
    n: usize,
) -> Result<f64> {
    let f = operand_function(job);
    let side = match job.psi {
        PsiSpec::CauchyFueter => Side::Left,
        _ => job.side,
    };
    points.iter().try_fold(0.0f64, |acc, p| {
        Ok(acc.max(weighted_oracle(weights, &f, side, p, radius, n)?.max_abs()))
    })
}

fn solve(kind: &SolveKind, output: OutputFormat) -> Result<Outcome> {
    let cart = |name: &str, src: &str| -> Result<HoloExpr> {
        parse_expr(src, BasisTag::Cartan).map_err(|e| e.at(name))
    };
    let (f, emit) = match kind {
        SolveKind::Cf { g1, g2, emit } => (cf_solution(&cart("g1", g1)?, &cart("g2", g2)?)?, *emit),
        SolveKind::Special {
            params,
            g1,
            g2,
            g3,
            g4,
            emit,
        } => {
            let p = crate::parser::parse_special_params(&read_json(params)?)
                .map_err(|e| e.at("params"))?;
            let g = [
                cart("g1", g1)?,
                cart("g2", g2)?,
                cart("g3", g3)?,
                cart("g4", g4)?,
            ];
            (special_solution(&p, &g)?, *emit)
        }
    };
    let f = match emit.map(BasisTag::from) {
        Some(BasisTag::Standard) => cartan_to_standard_vars(&f)?,
        _ => f,
    };
    Ok(Outcome::ok(render_function(&f, output)))
}

fn read_json(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))
}

fn read_typed<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    serde_json::from_value(read_json(arg)?).map_err(|e| match e.to_string() {
        msg if msg.contains("singular basis matrix") => Error::SingularMatrix {
            det: singular_det(&msg),
        },
        msg => Error::Schema(msg),
    })
}

// serde flattens our error to text; recover the determinant for the message.
fn singular_det(msg: &str) -> f64 {
    msg.split("|det| = ")
        .nth(1)
        .and_then(|rest| rest.split(')').next())
        .and_then(|x| x.parse().ok())
        .unwrap_or(0.0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn render_biquaternion(q: &Biquaternion, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => to_json(q),
        OutputFormat::Text => format!("{q}\n"),
    }
}

fn render_function(f: &BqFunction, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => to_json(&function_to_json(f)),
        OutputFormat::Text => {
            let v = function_to_json(f);
            let mut s = format!("basis: {}\n", f.basis);
            for (name, comp) in f
                .basis
                .unit_names()
                .iter()
                .zip(v["components"].as_array().unwrap())
            {
                s.push_str(&format!("  {name}: {}\n", comp.as_str().unwrap()));
            }
            s
        }
    }
}

fn render_weights(psi: &PsiWeights, basis: BasisTag, output: OutputFormat) -> String {
    let weights = psi.to_basis(basis);
    match output {
        OutputFormat::Json => to_json(&json!({ "psi": weights })),
        OutputFormat::Text => weights
            .iter()
            .enumerate()
            .map(|(j, w)| format!("psi{} = {w}\n", j + 1))
            .collect(),
    }
}
