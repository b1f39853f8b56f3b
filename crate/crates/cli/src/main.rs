//! relspec: classify relations, rasterize essential spectra of banded
//! models, run verification suites, and emit machine-readable artifacts.
//!
//! Exit codes: 0 success, 1 suite failure, 2 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use relspec::banded::{Rect, RegionOptions};
use relspec::schema::{self, ModelDoc, RelationDoc};
use relspec::spectra::{classify_point, mobius_resolvent, spectrum, Spectrum};
use relspec::subspace::DEFAULT_TOL;
use relspec::verify::{gen_small_perturbation, run_suite};

#[derive(Parser)]
#[command(name = "relspec", version, about = "Numerical toolkit for linear relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fredholm data at given points plus the full spectrum of a relation.
    Classify {
        #[command(flatten)]
        io: InputOutput,
        /// Point re,im; repeatable.
        #[arg(long = "lambda", value_name = "RE,IM", allow_hyphen_values = true)]
        lambda: Vec<String>,
    },
    /// Rasterize the essential-spectra regions of a banded model to CSV.
    Essential {
        #[command(flatten)]
        io: InputOutput,
        /// Window re0,re1,im0,im1.
        #[arg(long, value_name = "RE0,RE1,IM0,IM1", allow_hyphen_values = true)]
        bounds: String,
        /// Grid resolution nx,ny (at most 2048x2048).
        #[arg(long, value_name = "NX,NY")]
        res: String,
    },
    /// Run a verification suite and print its report as JSON.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resolvent (mu - T)^{-1} of a relation or banded model.
    Mobius {
        #[command(flatten)]
        io: InputOutput,
        /// Resolvent point re,im.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        mu: String,
    },
    /// Generate a small perturbation satisfying the perturbation hypotheses.
    Perturb {
        #[command(flatten)]
        io: InputOutput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InputOutput {
    /// Input JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when omitted (essential requires it for the CSV).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Usage/input problems exit 2; suite failures exit 1.
enum CliError {
    Input(String),
    SuiteFailed,
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn rank_tol() -> CliResult<f64> {
    match std::env::var("RELSPEC_TOL") {
        Ok(v) => {
            let tol: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("RELSPEC_TOL is not a number: {v:?}")))?;
            if !(tol > 0.0 && tol < 1.0) {
                return Err(CliError::Input(format!("RELSPEC_TOL out of range: {tol}")));
            }
            Ok(tol)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn parse_floats(text: &str, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("bad {what}: {text:?}")))?;
    if parts.len() != n {
        return Err(CliError::Input(format!(
            "{what} needs {n} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    Ok(parts)
}

fn parse_complex(text: &str, what: &str) -> CliResult<Complex64> {
    let v = parse_floats(text, 2, what)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // Ignore broken pipes so `relspec ... | head` exits quietly.
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn cmd_classify(io: &InputOutput, lambdas: &[String]) -> CliResult {
    let tol = rank_tol()?;
    let rel = schema::relation_from_json(&read_input(&io.input)?, tol)?;
    let points = lambdas
        .iter()
        .map(|text| {
            let lambda = parse_complex(text, "--lambda")?;
            Ok(serde_json::to_value(classify_point(&rel, lambda)?).expect("serializable"))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let spec = match spectrum(&rel)? {
        Spectrum::AllOfC => serde_json::json!("all_of_C"),
        Spectrum::Points(p) => {
            serde_json::json!(p.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
        }
    };
    let report = serde_json::json!({
        "dim_x": rel.dim_x(),
        "dim_y": rel.dim_y(),
        "graph_dim": rel.graph().dim(),
        "points": points,
        "spectrum": spec,
    });
    emit(&io.out, &serde_json::to_string_pretty(&report).expect("serializable"))
}

fn cmd_essential(io: &InputOutput, bounds: &str, res: &str) -> CliResult {
    let model = schema::model_from_json(&read_input(&io.input)?)?;
    let b = parse_floats(bounds, 4, "--bounds")?;
    let bounds = Rect::new(b[0], b[1], b[2], b[3])?;
    let r = parse_floats(res, 2, "--res")?;
    let (nx, ny) = (r[0] as usize, r[1] as usize);
    if nx > 2048 || ny > 2048 {
        return Err(CliError::Input(format!("resolution {nx}x{ny} exceeds 2048x2048")));
    }
    let grid = relspec::banded::essential_region(&model, &bounds, (nx, ny), &RegionOptions::default())?;
    let out = io
        .out
        .as_ref()
        .ok_or_else(|| CliError::Input("essential requires --out for the CSV".into()))?;
    fs::write(out, grid.to_csv()).map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
    println!("{}", grid.summary_json());
    Ok(())
}

fn cmd_verify(suite: &str, seed: u64, trials: usize, out: &Option<PathBuf>) -> CliResult {
    let report = run_suite(suite, seed, trials)?;
    emit(out, &report.to_json())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::SuiteFailed)
    }
}

fn cmd_mobius(io: &InputOutput, mu: &str) -> CliResult {
    let mu = parse_complex(mu, "--mu")?;
    let text = read_input(&io.input)?;
    // Dispatch on the document shape: models have a "space" field.
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("input JSON: {e}")))?;
    let result = if value.get("space").is_some() {
        let model: ModelDoc = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("model JSON: {e}")))?;
        let resolvent = model.to_model()?.mobius_laurent(mu)?;
        serde_json::to_string_pretty(&ModelDoc::from_model(&resolvent)).expect("serializable")
    } else {
        let rel: RelationDoc = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("relation JSON: {e}")))?;
        let resolvent = mobius_resolvent(&rel.to_relation(rank_tol()?)?, mu)?;
        serde_json::to_string_pretty(&RelationDoc::from_relation(&resolvent)).expect("serializable")
    };
    emit(&io.out, &result)
}

fn cmd_perturb(io: &InputOutput, seed: u64) -> CliResult {
    let rel = schema::relation_from_json(&read_input(&io.input)?, rank_tol()?)?;
    let s = gen_small_perturbation(&rel, seed)?;
    emit(
        &io.out,
        &serde_json::to_string_pretty(&RelationDoc::from_relation(&s)).expect("serializable"),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { io, lambda } => cmd_classify(io, lambda),
        Command::Essential { io, bounds, res } => cmd_essential(io, bounds, res),
        Command::Verify { suite, seed, trials, out } => cmd_verify(suite, *seed, *trials, out),
        Command::Mobius { io, mu } => cmd_mobius(io, mu),
        Command::Perturb { io, seed } => cmd_perturb(io, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::SuiteFailed) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
