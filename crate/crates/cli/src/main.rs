use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use maymust::check::{check_instance, fuzz, FuzzConfig};
use maymust::generate::{generate_document, parse_probability, TupleMode};
use maymust::io::{parse_mmaf, render_dot, render_json, render_text};
use maymust::{solve, Engine, Error, Search, SemanticsName};

#[derive(Parser)]
#[command(name = "maymust", version, about = "May-must argumentation solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one semantics of an instance
    Solve(SolveArgs),
    /// Write a seeded random instance
    Gen(GenArgs),
    /// Run the differential checks on a file or on fuzzed instances
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Brute,
    Scc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// exact, maxi-complete, maxi-preferred, maxi-stable, maxi-grounded,
    /// adf-complete, adf-preferred or adf-grounded
    #[arg(short, long)]
    semantics: SemanticsName,
    #[arg(long, value_enum, default_value = "brute")]
    engine: EngineArg,
    #[arg(short, long, value_enum, default_value = "json")]
    output: OutputArg,
    /// With DOT output, one graph per labelling
    #[arg(long)]
    all: bool,
    /// Walk all 3^n labellings instead of the SCC-ordered search
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(short)]
    n: usize,
    /// Edge probability as a decimal in [0, 1]
    #[arg(short)]
    p: String,
    /// dung, uniform, uniform:K or ratio
    #[arg(long, default_value = "uniform")]
    tuples: TupleMode,
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(short, long, conflicts_with = "fuzz", required_unless_present = "fuzz")]
    input: Option<PathBuf>,
    /// Number of random instances to check
    #[arg(long, requires_all = ["max_args", "seed"])]
    fuzz: Option<usize>,
    #[arg(long)]
    max_args: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Edge probability for fuzzed instances
    #[arg(short, default_value = "0.3")]
    p: String,
    #[arg(long, default_value = "uniform")]
    tuples: TupleMode,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Directory for minimal reproducers of failing instances
    #[arg(long)]
    archive: Option<PathBuf>,
}

enum Failure {
    Io(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run_solve(a: SolveArgs) -> Result<ExitCode, Failure> {
    let f = parse_mmaf(&read(&a.input)?)?;
    let engine = match a.engine {
        EngineArg::Brute => Engine::Brute,
        EngineArg::Scc => Engine::Scc,
    };
    let search = if a.no_prune {
        Search::Exhaustive
    } else {
        Search::Pruned
    };
    let r = solve(&f, a.semantics, engine, search)?;
    let doc = match a.output {
        OutputArg::Json => render_json(&f, &r),
        OutputArg::Text => render_text(&f, &r),
        OutputArg::Dot => render_dot(&f, &r, a.all),
    };
    print!("{doc}");
    Ok(ExitCode::SUCCESS)
}

fn run_gen(a: GenArgs) -> Result<ExitCode, Failure> {
    let p = parse_probability(&a.p)?;
    let doc = generate_document(a.n, p, a.tuples, a.seed)?.to_string();
    match a.output {
        Some(path) => fs::write(&path, doc)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{doc}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_check(a: CheckArgs) -> Result<ExitCode, Failure> {
    let passed = if let Some(path) = &a.input {
        let f = parse_mmaf(&read(path)?)?;
        let report = check_instance(&f)?;
        match a.format {
            ReportFormat::Text => print!("{report}"),
            ReportFormat::Json => println!("{:#}", report.to_json()),
        }
        if let (Some(dir), Some(text)) = (&a.archive, &report.reproducer) {
            fs::create_dir_all(dir)
                .and_then(|_| fs::write(dir.join("reproducer.mmaf"), text))
                .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        }
        report.passed()
    } else {
        let mut config = FuzzConfig::new(
            a.fuzz.unwrap_or(0),
            a.max_args.unwrap_or(0),
            a.seed.unwrap_or(0),
        );
        config.edge_prob = parse_probability(&a.p)?;
        config.tuples = a.tuples;
        let report = fuzz(&config)?;
        match a.format {
            ReportFormat::Text => print!("{report}"),
            ReportFormat::Json => println!("{:#}", report.to_json()),
        }
        if let Some(dir) = &a.archive {
            let written = report
                .write_archive(dir)
                .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            for path in written {
                eprintln!("archived {}", path.display());
            }
        }
        report.passed()
    };
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = match &cli.command {
        Command::Solve(a) => a.output == OutputArg::Json,
        Command::Check(a) => a.format == ReportFormat::Json,
        Command::Gen(_) => false,
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Gen(a) => run_gen(a),
        Command::Check(a) => run_check(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            if json_errors {
                println!("{:#}", json!({"error": {"kind": "io", "message": msg}}));
            }
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error[{}]: {e}", e.kind());
            if json_errors {
                let mut diag = json!({"kind": e.kind(), "message": e.to_string()});
                if let Error::Syntax { line, .. } = &e {
                    diag["line"] = json!(line);
                }
                println!("{:#}", json!({ "error": diag }));
            }
            ExitCode::from(if e.is_semantic() { 1 } else { 2 })
        }
    }
}
