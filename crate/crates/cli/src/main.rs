use std::fs;
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand};
use rayon::prelude::*;

use essdim_core::engine::{compute_ed_with, extend_or_fallback, EdReport, Options};
use essdim_core::fixtures;
use essdim_core::oracle::{self, OracleConfig};
use essdim_core::spec_io::{emit, parse, parse_element, Format};

const EXIT_EXACT: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_BOUNDS: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Upper bound on worker threads in batch mode.
const MAX_WORKERS: usize = 8;

/// Essential dimension of reduced split semisimple groups.
#[derive(Debug, Parser)]
#[command(name = "essdim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bounds and, when certified, the exact value for one group or a batch.
    Compute {
        /// Group such as "Spin(10) * Spin(3)^2 / [(2,1,0), (2,0,1)]".
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        spec: Option<String>,
        /// One spec per line; `-` reads standard input.
        #[arg(long, value_name = "FILE")]
        batch: Option<String>,
        #[arg(long)]
        json: bool,
        /// Torsion prime, overriding the family default.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Value for H through its quotient G = H / <nu>.
    Extend {
        /// The group H.
        spec: String,
        /// Central element of order p, e.g. "(1,3)".
        #[arg(long)]
        nu: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Randomized checks against brute force.
    OracleCheck {
        /// Largest socle dual order admitted.
        #[arg(long, default_value_t = 81)]
        max_order: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = OracleConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        snf_count: usize,
    },
    /// Evaluates the pinned fixtures.
    PaperSuite,
}

fn status(r: &EdReport) -> u8 {
    if r.exact {
        EXIT_EXACT
    } else {
        EXIT_BOUNDS
    }
}

fn format_of(json: bool) -> Format {
    if json {
        Format::Json
    } else {
        Format::Text
    }
}

fn compute_one(src: &str, prime: Option<u64>) -> Result<EdReport, String> {
    let spec = parse(src).map_err(|e| format!("{src}: {e}"))?;
    compute_ed_with(&spec, Options { prime }).map_err(|e| format!("{src}: {e}"))
}

fn print(out: &str) -> u8 {
    let mut stdout = io::stdout().lock();
    match writeln!(stdout, "{}", out.trim_end()) {
        Ok(()) => EXIT_EXACT,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn read_batch(path: &str) -> io::Result<Vec<(usize, String)>> {
    let lines: Vec<String> = if path == "-" {
        io::stdin().lock().lines().collect::<Result<_, _>>()?
    } else {
        fs::read_to_string(path)?.lines().map(str::to_owned).collect()
    };
    Ok(lines
        .into_iter()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_owned()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn run_batch(path: &str, format: Format, prime: Option<u64>) -> u8 {
    let lines = match read_batch(path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return EXIT_ERROR;
        }
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get().min(MAX_WORKERS));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let results: Vec<_> = pool.install(|| {
        lines
            .par_iter()
            .map(|(n, src)| (*n, compute_one(src, prime)))
            .collect()
    });
    let mut code = EXIT_EXACT;
    for (n, res) in results {
        match res {
            Ok(r) => {
                code = code.max(print(&emit(&r, format)));
                if code != EXIT_ERROR {
                    code = code.max(status(&r));
                }
            }
            Err(e) => {
                eprintln!("error: line {n}: {e}");
                code = EXIT_ERROR;
            }
        }
    }
    code
}

fn finish(res: Result<EdReport, String>, format: Format) -> u8 {
    match res {
        Ok(r) => match print(&emit(&r, format)) {
            EXIT_EXACT => status(&r),
            c => c,
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn extend(src: &str, nu: &str, prime: Option<u64>) -> Result<EdReport, String> {
    let spec = parse(src).map_err(|e| format!("{src}: {e}"))?;
    let nu = parse_element(nu, &spec.factors).map_err(|e| format!("nu {nu}: {e}"))?;
    extend_or_fallback(&spec, &nu, prime).map_err(|e| e.to_string())
}

fn oracle_check(config: OracleConfig) -> u8 {
    let s = oracle::run(&config);
    println!("basis        {} checked", s.basis_checked);
    println!("annihilator  {} checked", s.annihilator_checked);
    println!("snf          {} checked", s.snf_checked);
    println!("skipped      {}", s.skipped);
    println!("failures     {}", s.failures.len());
    for f in &s.failures {
        eprintln!("fail: {f}");
    }
    if s.passed() {
        EXIT_EXACT
    } else {
        EXIT_ERROR
    }
}

fn paper_suite() -> u8 {
    let outcomes = fixtures::run_all();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    for o in &outcomes {
        let tag = if o.pass { "pass" } else { "FAIL" };
        println!("{tag}  {:<24} {}", o.name, o.detail);
    }
    println!("{passed}/{} fixtures pass", outcomes.len());
    if passed == outcomes.len() {
        EXIT_EXACT
    } else {
        EXIT_ERROR
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Compute {
            spec,
            batch,
            json,
            prime,
        } => match (spec, batch) {
            (_, Some(path)) => run_batch(&path, format_of(json), prime),
            (Some(src), None) => finish(compute_one(&src, prime), format_of(json)),
            (None, None) => unreachable!("clap requires a spec or --batch"),
        },
        Command::Extend {
            spec,
            nu,
            json,
            prime,
        } => finish(extend(&spec, &nu, prime), format_of(json)),
        Command::OracleCheck {
            max_order,
            count,
            seed,
            snf_count,
        } => oracle_check(OracleConfig {
            count,
            max_order,
            seed,
            snf_count,
        }),
        Command::PaperSuite => paper_suite(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if e.kind() != ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = writeln!(io::stderr(), "\n{}", Cli::command().render_help());
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    ExitCode::from(run(cli))
}
