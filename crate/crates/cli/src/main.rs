use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::{json, Value};

use uniqmod::problem::ProblemDocument;
use uniqmod::scalar::{format_rational, parse_rational};
use uniqmod::schur::{self, DegreeSequence, Partition};
use uniqmod::solver::{self, BestApproxResult, CertificationReport, Grid};
use uniqmod::validate;
use uniqmod::{Rational, Scalar};

const THREADS_ENV: &str = "UNIQMOD_THREADS";

#[derive(Parser)]
#[command(name = "uniqmod", version, about = "Constrained best uniform approximation and uniqueness certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Schur polynomial, count its tableaux, or print the cap N_n.
    Schur(SchurArgs),
    /// Bracket the best approximation error of a problem document.
    Solve(SolveArgs),
    /// Issue a uniqueness certificate and stress-test it.
    Certify(CertifyArgs),
    /// Run the seeded property suites.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SchurArgs {
    /// Strictly decreasing exponent sequence, e.g. `2,0`.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda")]
    h: Option<Vec<usize>>,
    /// Weakly decreasing partition, e.g. `1,0`.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<usize>>,
    /// Evaluation points; decimals or fractions such as `1/3`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Option<Vec<String>>,
    /// Evaluate in exact rational arithmetic and print a fraction.
    #[arg(long)]
    exact: bool,
    /// Print N_n, the largest tableau count over exponent sets in {0..n}.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    problem: PathBuf,
    /// Write `t,f,p_star,error` for every grid point.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    problem: PathBuf,
    /// Write the report JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the generation time out of the report, making it reproducible
    /// byte for byte.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Schur,
    Interp,
    Bounds,
    Certify,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Schur => "schur",
            Suite::Interp => "interp",
            Suite::Bounds => "bounds",
            Suite::Certify => "certify",
            Suite::All => "all",
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the suite reports as JSON.
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code: 1 for certificate or property failures,
/// 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    fn check(message: impl ToString) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<uniqmod::Error> for Failure {
    fn from(e: uniqmod::Error) -> Self {
        Self::input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads().and_then(|()| run(cli)) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::input(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(Failure::input)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Schur(args) => cmd_schur(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn cmd_schur(args: SchurArgs) -> Result<(), Failure> {
    let mut out = serde_json::Map::new();
    if let Some(n) = args.cap {
        out.insert("n".into(), json!(n));
        out.insert("schur_cap".into(), count_json(&schur::schur_cap(n)?));
    }

    let shape = match (&args.h, &args.lambda) {
        (Some(h), _) => {
            let h = DegreeSequence::tight(h.clone())?;
            out.insert("h".into(), json!(h.exponents()));
            Some(h.to_partition())
        }
        (None, Some(parts)) => Some(Partition::new(parts.clone())?),
        (None, None) => None,
    };
    match (shape, &args.points) {
        (Some(shape), Some(points)) => {
            out.insert("lambda".into(), json!(shape.parts()));
            let exact: Vec<Rational> = points
                .iter()
                .map(|p| parse_rational(p.trim()).ok_or_else(|| Failure::input(format!("cannot parse point {p:?}"))))
                .collect::<Result<_, _>>()?;
            let value = if args.exact {
                json!(format_rational(&schur::schur_value(&shape, &exact)?))
            } else {
                let y: Vec<f64> = exact.iter().map(Scalar::as_f64).collect();
                json!(schur::schur_value(&shape, &y)?)
            };
            out.insert("value".into(), value);
            out.insert("tableau_count".into(), count_json(&schur::tableau_count(&shape)));
        }
        (Some(_), None) => return Err(Failure::input("--points is required with --h or --lambda")),
        (None, Some(_)) => return Err(Failure::input("--points needs --h or --lambda")),
        (None, None) if args.cap.is_none() => {
            return Err(Failure::input("nothing to do: pass --h/--lambda with --points, or --cap"))
        }
        (None, None) => {}
    }
    println!("{}", Value::Object(out));
    Ok(())
}

fn count_json<T>(v: &T) -> Value
where
    for<'a> u64: TryFrom<&'a T>,
    T: ToString,
{
    match u64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

/// The parsed document plus its exact text for embedding in reports.
fn load_problem(path: &Path) -> Result<(ProblemDocument, Box<RawValue>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let doc = ProblemDocument::from_json(&text)?;
    let raw = RawValue::from_string(text.trim().to_string()).map_err(Failure::input)?;
    Ok((doc, raw))
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    input: &'a RawValue,
    result: &'a BestApproxResult,
}

#[derive(Serialize)]
struct CertifyOutput<'a> {
    input: &'a RawValue,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at_unix: Option<u64>,
    report: &'a CertificationReport,
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::input)?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let (doc, raw) = load_problem(&args.problem)?;
    let instance = doc.to_instance()?;
    let grid_eps = doc.options.grid_eps;
    let result = solver::solve_best_approx(&instance, grid_eps)?;

    if let Some(path) = &args.csv {
        let grid = Grid::for_instance(&instance, grid_eps)?;
        let p = result.polynomial();
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        let io = |e: csv::Error| Failure::input(format!("cannot write {}: {e}", path.display()));
        w.write_record(["t", "f", "p_star", "error"]).map_err(io)?;
        for &t in grid.points() {
            let (f, q) = (instance.f().eval(t), p.eval(&t));
            w.write_record([t, f, q, f - q].map(|v| v.to_string())).map_err(io)?;
        }
        w.flush().map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }

    let output = SolveOutput {
        input: &raw,
        result: &result,
    };
    emit(&output, args.out.as_deref())
}

fn cmd_certify(args: CertifyArgs) -> Result<(), Failure> {
    let (doc, raw) = load_problem(&args.problem)?;
    let instance = doc.to_instance()?;
    let report = solver::certify_uniqueness(&instance, doc.options.delta, doc.options.mode, &doc.certify_options())?;

    let generated_at_unix =
        (!args.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let output = CertifyOutput {
        input: &raw,
        verdict: if report.passed { "PASS" } else { "FAIL" },
        generated_at_unix,
        report: &report,
    };
    emit(&output, args.out.as_deref())?;

    let seed = doc.options.seed;
    if report.passed {
        if let Some(path) = &args.out {
            println!("PASS: 0 violations (seed {seed}); report written to {}", path.display());
        }
        Ok(())
    } else {
        Err(Failure::check(format!(
            "certificate violated in {} check(s); reproduce with seed {seed}",
            report.violations
        )))
    }
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let reports = validate::run_suite(args.suite.name(), args.seed)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&reports).map_err(Failure::input)?);
    } else {
        println!("{:<8} {:>7} {:>7} {:>7}  worst margin", "suite", "checks", "passed", "failed");
        for r in &reports {
            let margin = r.worst_margin.map_or("-".to_string(), |m| format!("{m:.3e}"));
            println!("{:<8} {:>7} {:>7} {:>7}  {margin}", r.suite, r.checks, r.passed, r.failed);
            for f in &r.failures {
                println!("  FAIL {f}");
            }
        }
    }
    let failed: usize = reports.iter().map(|r| r.failed).sum();
    if failed > 0 {
        return Err(Failure::check(format!("{failed} property check(s) failed (seed {})", args.seed)));
    }
    Ok(())
}
