//! Command-line front end. `run` is the whole program minus process exit, so
//! tests can drive it with in-memory streams.
//!
//! Exit codes: 0 success or pass, 1 validation or check failure, 2 usage or
//! input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checker::check_copula;
use crate::copulas::{copula_value, evaluate, CopulaSpec, Family};
use crate::error::{Error, Result};
use crate::geometry::SquarePoint;
use crate::oracle::{disc_average, Integrand, OracleRequest};
use crate::radius::RadiusModel;
use crate::sampler::{sample_batch, to_gaussian, write_csv};
use crate::scalar::sci17;
use crate::validator::validate_model;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "regcopula",
    version,
    about = "Disc-averaged Fréchet–Hoeffding copulas: evaluate, validate, check, sample"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CopulaArg {
    /// Lower bound max(u+v-1, 0)
    W,
    /// Upper bound min(u, v)
    M,
    /// Smoothed lower bound
    Wbar,
    /// Smoothed upper bound
    Mbar,
}

impl CopulaArg {
    fn family(self) -> Family {
        match self {
            CopulaArg::W => Family::FhLower,
            CopulaArg::M => Family::FhUpper,
            CopulaArg::Wbar => Family::SmoothedLower,
            CopulaArg::Mbar => Family::SmoothedUpper,
        }
    }
}

#[derive(Debug, Args)]
struct CopulaOpts {
    #[arg(long, value_enum)]
    copula: CopulaArg,
    /// Radius model as inline JSON (leading '{') or a path to a JSON file
    #[arg(long)]
    radius: Option<String>,
}

#[derive(Debug, Args)]
struct OutOpt {
    /// Write output to this file (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print C(u, v)
    Eval {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        /// Also print the quadrature value of the disc average at this
        /// relative tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Print the density c(u, v) of a smoothed copula
    Density {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        #[command(flatten)]
        out: OutOpt,
    },
    /// CSV u,v,value,density on the lattice k/(grid_n - 1)
    Grid {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long, default_value_t = 64)]
        grid_n: usize,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Validate the radius model for wbar or mbar; JSON report
    Validate {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long, default_value_t = 64)]
        grid_n: usize,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Check the copula axioms on a grid; JSON report
    Check {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long, default_value_t = 128)]
        grid_n: usize,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Draw pairs by conditional inversion; CSV u,v (or x,y with --gaussian)
    Sample {
        #[command(flatten)]
        copula: CopulaOpts,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Map pairs through the normal quantile
        #[arg(long)]
        gaussian: bool,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Support band of the smoothed upper bound at each --w; one JSON object per line
    Band {
        #[arg(long)]
        radius: String,
        #[arg(long = "w", required = true, allow_negative_numbers = true)]
        w: Vec<f64>,
        #[command(flatten)]
        out: OutOpt,
    },
}

enum Failure {
    Usage(String),
    Fail(Vec<u8>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) => Failure::Fail(format!("error: {e}\n").into_bytes()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

/// Inline JSON or a file path, told apart by a leading `{`.
pub fn load_radius(arg: &str) -> Result<RadiusModel<f64>> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::Argument(format!("cannot read radius file {arg}: {e}")))?
    };
    RadiusModel::from_json(&text)
}

fn spec_of(opts: &CopulaOpts) -> Result<CopulaSpec<f64>> {
    let family = opts.copula.family();
    let model = match (&opts.radius, family.is_smoothed()) {
        (Some(r), true) => Some(load_radius(r)?),
        (None, true) => {
            return Err(Error::Argument(
                "--radius is required for wbar and mbar".into(),
            ))
        }
        (Some(_), false) => {
            return Err(Error::Argument(
                "--radius is not accepted for w and m".into(),
            ))
        }
        (None, false) => None,
    };
    CopulaSpec::new(family, model)
}

fn json_line(x: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(x).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

fn line(x: f64) -> Vec<u8> {
    format!("{}\n", sci17(x)).into_bytes()
}

/// Output of a command and whether it counts as a pass.
fn execute(cmd: &Command) -> std::result::Result<(Vec<u8>, bool), Failure> {
    match cmd {
        Command::Eval {
            copula, u, v, tol, ..
        } => {
            let spec = spec_of(copula)?;
            let p = SquarePoint::new(*u, *v)?;
            let mut out = line(copula_value(&spec, p)?);
            if let Some(tol) = tol {
                out.extend(line(oracle_value(&spec, p, *tol)?));
            }
            Ok((out, true))
        }
        Command::Density { copula, u, v, .. } => {
            let spec = spec_of(copula)?;
            if !spec.family().is_smoothed() {
                return Err(Failure::Usage("w and m are singular: no density".into()));
            }
            Ok((
                line(evaluate(&spec, SquarePoint::new(*u, *v)?)?.density),
                true,
            ))
        }
        Command::Grid { copula, grid_n, .. } => {
            let spec = spec_of(copula)?;
            if *grid_n < 2 {
                return Err(Failure::Usage("--grid-n must be at least 2".into()));
            }
            Ok((grid_csv(&spec, *grid_n)?, true))
        }
        Command::Validate { copula, grid_n, .. } => {
            let spec = spec_of(copula)?;
            let model = spec
                .model()
                .ok_or_else(|| Failure::Usage("validate needs wbar or mbar".into()))?;
            let report = validate_model(model, spec.family().orientation(), *grid_n);
            Ok((json_line(&report), report.passed()))
        }
        Command::Check { copula, grid_n, .. } => {
            let report = check_copula(&spec_of(copula)?, *grid_n);
            Ok((json_line(&report), report.verdict))
        }
        Command::Sample {
            copula,
            n,
            seed,
            gaussian,
            ..
        } => {
            let batch = sample_batch(&spec_of(copula)?, *n, *seed)?;
            let mut out = Vec::new();
            if *gaussian {
                write_csv(&mut out, "x,y", to_gaussian(&batch.pairs))?;
            } else {
                write_csv(&mut out, "u,v", batch.pairs.iter().map(|p| (p.u, p.v)))?;
            }
            Ok((out, true))
        }
        Command::Band { radius, w, .. } => {
            let model = load_radius(radius)?;
            let mut out = Vec::new();
            for &w in w {
                let band = model.support_band(w)?;
                out.extend(
                    serde_json::to_string(&band)
                        .expect("band serializes")
                        .into_bytes(),
                );
                out.push(b'\n');
            }
            Ok((out, true))
        }
    }
}

/// Quadrature value of the disc average defining `spec` at `p`.
fn oracle_value(spec: &CopulaSpec<f64>, p: SquarePoint<f64>, tol: f64) -> Result<f64> {
    let Some(model) = spec.model() else {
        return copula_value(spec, p);
    };
    let d = p.to_diamond();
    let integrand = match spec.family() {
        Family::SmoothedLower => Integrand::FhLower,
        _ => Integrand::FhUpper,
    };
    let r = model.radius(d)?;
    disc_average(&OracleRequest::new(integrand, d, r, tol)?)
}

fn grid_csv(spec: &CopulaSpec<f64>, n: usize) -> Result<Vec<u8>> {
    let mut out = b"u,v,value,density\n".to_vec();
    let t = |k: usize| k as f64 / (n - 1) as f64;
    for i in 0..n {
        for j in 0..n {
            let p = SquarePoint::new(t(i), t(j))?;
            let (value, density) = if spec.family().is_smoothed() {
                let e = evaluate(spec, p)?;
                (e.value, e.density)
            } else {
                (copula_value(spec, p)?, f64::NAN)
            };
            writeln!(
                out,
                "{},{},{},{}",
                sci17(p.u),
                sci17(p.v),
                sci17(value),
                sci17(density)
            )
            .expect("write to Vec");
        }
    }
    Ok(out)
}

fn out_path(cmd: &Command) -> Option<&Path> {
    let out = match cmd {
        Command::Eval { out, .. }
        | Command::Density { out, .. }
        | Command::Grid { out, .. }
        | Command::Validate { out, .. }
        | Command::Check { out, .. }
        | Command::Sample { out, .. }
        | Command::Band { out, .. } => out,
    };
    out.out.as_deref()
}

/// Temp file in the target directory, then rename over the target.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().ansi().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let (bytes, pass) = match execute(&cli.command) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(
                stderr,
                "error: {msg}\n\nFor more information, try '--help'."
            );
            return EXIT_USAGE;
        }
        Err(Failure::Fail(msg)) => {
            let _ = stderr.write_all(&msg);
            return EXIT_FAIL;
        }
    };
    let written = match out_path(&cli.command) {
        Some(path) => write_atomic(path, &bytes),
        None => stdout.write_all(&bytes).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
