use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use icg::gcd_graph::{export_graph, vertex_cap_from_env, ExportFormat};
use icg::max_clique::Budget;
use icg::survey::{check_instance, counterexample_family, write_scan, OutputFormat, ScanConfig};
use icg::{DispatchOptions, DivisorSet, Error, GcdGraph, Policy, SolverOptions};

const EXIT_VALIDATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "icg",
    version,
    about = "Clique numbers of integral circulant graphs X_n(D)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Formula,
    Exact,
}

impl From<MethodArg> for Policy {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Policy::Auto,
            MethodArg::Formula => Policy::FormulaOnly,
            MethodArg::Exact => Policy::ExactOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFormat {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Edgelist,
}

#[derive(clap::Args, Clone)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Node budget for each exact search.
    #[arg(long)]
    budget: Option<u64>,
    /// Time limit per exact search, in milliseconds.
    #[arg(long)]
    time_limit_ms: Option<u64>,
    /// Cross-check formula values against exact search up to this n.
    #[arg(long)]
    verify_cap: Option<u64>,
}

impl SolveArgs {
    fn dispatch(&self) -> DispatchOptions {
        DispatchOptions {
            policy: self.method.into(),
            solver: SolverOptions {
                budget: Budget {
                    max_nodes: self.budget,
                    time_limit: self.time_limit_ms.map(Duration::from_millis),
                },
                ..SolverOptions::default()
            },
            vertex_cap: vertex_cap_from_env(),
            verify_cap: self.verify_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clique number of a single X_n(D).
    Clique {
        n: u64,
        #[arg(short = 'D', value_delimiter = ',', required = true)]
        divisors: Vec<u64>,
        #[command(flatten)]
        solve: SolveArgs,
        /// Include the witness clique.
        #[arg(long)]
        witness: bool,
    },
    /// Scan ranges of (n, D) and test whether ω divides n.
    Scan {
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Skip divisor sets with gcd(D) > 1.
        #[arg(long)]
        connected_only: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: ScanFormat,
        /// Emit only records where ω does not divide n.
        #[arg(long)]
        check_divides: bool,
        /// Include witnesses in every record.
        #[arg(long)]
        witness: bool,
        /// Add elapsed_ms to records (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// The X_{20p}(1,4,10) counterexample family.
    Family {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Write X_n(D) as DOT or an edge list.
    Export {
        n: u64,
        #[arg(short = 'D', value_delimiter = ',', required = true)]
        divisors: Vec<u64>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
    },
}

fn is_validation(e: &Error) -> bool {
    !matches!(e, Error::Internal(_))
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if is_validation(&e) {
        EXIT_VALIDATION
    } else {
        1
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let io_err = |e: io::Error| Error::Internal(format!("io: {e}"));
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Clique {
            n,
            divisors,
            solve,
            witness,
        } => {
            let mut record = check_instance(n, &divisors, &solve.dispatch())?;
            if !witness {
                record.witness = None;
            }
            writeln!(stdout, "{}", record.to_json_line()).map_err(io_err)?;
            if record.budget_exhausted {
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
        }
        Command::Scan {
            n_min,
            n_max,
            k_min,
            k_max,
            connected_only,
            jobs,
            format,
            check_divides,
            witness,
            timing,
            output,
            solve,
        } => {
            let config = ScanConfig {
                n_min,
                n_max,
                k_min,
                k_max,
                connected_only,
                counterexamples_only: check_divides,
                dispatch: solve.dispatch(),
                witnesses: witness,
                timing,
                jobs,
            };
            let format = match format {
                ScanFormat::Jsonl => OutputFormat::JsonLines,
                ScanFormat::Csv => OutputFormat::Csv,
            };
            let summary = match output {
                Some(path) => write_scan(&config, format, File::create(path).map_err(io_err)?)?,
                None => write_scan(&config, format, &mut stdout)?,
            };
            eprintln!(
                "scanned {} instances, {} counterexamples, {} budget-limited, {} formula/exact disagreements",
                summary.instances,
                summary.counterexamples.len(),
                summary.budget_exhausted,
                summary.disagreements
            );
            for r in &summary.counterexamples {
                eprintln!(
                    "counterexample: n = {} D = {:?} omega = {}",
                    r.n,
                    r.divisors,
                    r.omega.unwrap_or_default()
                );
            }
            if summary.budget_exhausted > 0 {
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
        }
        Command::Family { primes } => {
            for record in counterexample_family(&primes, &DispatchOptions::default())? {
                writeln!(stdout, "{}", record.to_json_line()).map_err(io_err)?;
            }
        }
        Command::Export {
            n,
            divisors,
            format,
        } => {
            let ds = DivisorSet::new(n, &divisors)?;
            let g = GcdGraph::build(&ds)?;
            let format = match format {
                GraphFormat::Dot => ExportFormat::Dot,
                GraphFormat::Edgelist => ExportFormat::EdgeList,
            };
            stdout
                .write_all(export_graph(&g, format).as_bytes())
                .map_err(io_err)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}
