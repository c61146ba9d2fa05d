use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vpf_core::arith::{parse_cyclotomic, parse_rat, set_max_level};
use vpf_core::genfun::dedekind_sum;
use vpf_core::oracle::count_points;
use vpf_core::pipeline::{
    compute, compute_with_order, evaluate, evaluate_exact, parse_range, verify_box, ProblemSpec, ResultExpr,
};
use vpf_core::Error;

mod matrix_file;
mod render;

#[derive(Parser)]
#[command(name = "vpf", version, about = "Closed-form vector partition functions")]
struct Cli {
    /// Largest cyclotomic level allowed in intermediate arithmetic
    #[arg(long, global = true, env = "VPF_MAX_LEVEL")]
    max_level: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the closed form of a matrix
    Compute {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Row permutation, e.g. `1,0`; the last listed row is eliminated first
        #[arg(long)]
        order: Option<String>,
    },
    /// Evaluate at one point
    Eval {
        /// Matrix file or expression JSON
        input: PathBuf,
        /// Comma-separated coordinates, e.g. `2,5`
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Compare the closed form with brute-force counts on a box
    Verify {
        /// Matrix file or expression JSON
        input: PathBuf,
        /// Box as `lo..hi` per coordinate, e.g. `-3..8,-3..8`
        #[arg(allow_hyphen_values = true)]
        region: String,
    },
    /// Count lattice points by enumeration
    Oracle {
        matrix: PathBuf,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Generalized Dedekind sum (1/n) Σ_{α^n = e(a)} α^β / f(α⁻¹)
    Dedekind {
        #[arg(long)]
        n: u64,
        /// Phase `a` of the root, as `p/q`
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        /// Coefficient `c` of a linear factor `1 - c·w`; repeatable
        #[arg(long = "factor", allow_hyphen_values = true)]
        factors: Vec<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        beta: i64,
    },
}

enum Failure {
    Engine(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Error> {
    let text = read(path)?;
    let rows = matrix_file::parse_matrix(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    ProblemSpec::new(rows, None, label)
}

enum Input {
    Matrix(ProblemSpec),
    Expr(Box<ResultExpr>),
}

fn load_input(path: &Path) -> Result<Input, Error> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let expr: ResultExpr =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: invalid expression JSON: {e}", path.display())))?;
        expr.validate()?;
        Ok(Input::Expr(Box::new(expr)))
    } else {
        load_spec(path).map(Input::Matrix)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("`{s}` is not a comma-separated integer vector"))))
        .collect()
}

fn parse_order(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("`{s}` is not a row permutation"))))
        .collect()
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Compute { matrix, format, order } => {
            let spec = load_spec(&matrix)?;
            let expr = match order {
                Some(o) => compute_with_order(&spec, &parse_order(&o)?)?,
                None => compute(&spec)?,
            };
            match format {
                Format::Text => print!("{}", render::text(&expr)),
                Format::Latex => print!("{}", render::latex(&expr)),
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&expr).map_err(|e| Error::SanityFailure(e.to_string()))?)
                }
            }
        }
        Command::Eval { input, b } => {
            let b = parse_ints(&b)?;
            let expr = match load_input(&input)? {
                Input::Matrix(spec) => compute(&spec)?,
                Input::Expr(e) => *e,
            };
            if expr.provenance.spec()?.has_phases() {
                println!("{}", evaluate_exact(&expr, &b)?);
            } else {
                println!("{}", evaluate(&expr, &b)?);
            }
        }
        Command::Verify { input, region } => {
            let (spec, expr) = match load_input(&input)? {
                Input::Matrix(spec) => {
                    let e = compute(&spec)?;
                    (spec, e)
                }
                Input::Expr(e) => (e.provenance.spec()?, *e),
            };
            let ranges = region
                .split(',')
                .map(|r| parse_range(r).ok_or_else(|| usage(format!("`{r}` is not a range lo..hi"))))
                .collect::<Result<Vec<_>, _>>()?;
            let (lo, hi): (Vec<i64>, Vec<i64>) = ranges.into_iter().unzip();
            let report = verify_box(&spec, &expr, &lo, &hi)?;
            for m in &report.mismatches {
                let got = match &m.got {
                    Ok(v) => v.to_string(),
                    Err(e) => e.clone(),
                };
                println!("mismatch at {:?}: expected {}, got {}", m.b, m.expected, got);
            }
            println!(
                "checked {} points in {:.3}s: {} mismatches",
                report.points,
                report.elapsed.as_secs_f64(),
                report.mismatches.len()
            );
            if !report.ok() {
                return Err(Failure::Mismatch);
            }
        }
        Command::Oracle { matrix, b } => {
            let spec = load_spec(&matrix)?;
            println!("{}", count_points(&spec, &parse_ints(&b)?)?);
        }
        Command::Dedekind { n, a, factors, beta } => {
            let a = parse_rat(&a).ok_or_else(|| usage(format!("`{a}` is not a rational number")))?;
            let f = factors
                .iter()
                .map(|s| parse_cyclotomic(s).ok_or_else(|| usage(format!("`{s}` is not a cyclotomic number"))))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", dedekind_sum(n, &a, &f, beta)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(cap) = cli.max_level {
        set_max_level(cap);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Engine(e)) => {
            eprintln!("vpf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
