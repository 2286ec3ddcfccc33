use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use achrolab::bounds::{general_bound_terms, general_upper_bound, k6_bounds};
use achrolab::construction::odd_q_matrix;
use achrolab::io::{read_matrix_file, render_latex, render_matrix, write_matrix_file};
use achrolab::report::{to_json, BoundsReport, ConstructReport, SearchReport, VerifyReport};
use achrolab::search::{
    achromatic_number, exists_colouring, heuristic_search, ExactLimits, SearchConfig, SearchError,
    SearchOutcome, EXACT_CELL_LIMIT,
};

const THREADS_VAR: &str = "ACHROLAB_THREADS";

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Proper complete colourings of rook's graphs as colour matrices.
#[derive(Parser)]
#[command(name = "achrolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the 6 x q matrix with 2q+3 colours (q odd, q >= 7).
    Construct {
        #[arg(long)]
        q: usize,
        /// Write the matrix file here and print a JSON summary.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the matrix as a LaTeX pmatrix.
        #[arg(long)]
        latex: bool,
    },
    /// Check whether a matrix file is a proper complete colouring.
    Verify {
        path: PathBuf,
        /// For 6-row matrices, also evaluate the structural claim suite.
        #[arg(long)]
        diagnose: bool,
    },
    /// Counting upper bound on the achromatic number.
    Bounds {
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
    },
    /// Search for a member matrix with k colours, or compute the achromatic number.
    Search(SearchArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(short)]
    p: usize,
    #[arg(short)]
    q: usize,
    /// Target colour count; exact mode without it computes the achromatic number.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    #[arg(long)]
    heuristic: bool,
    /// Node budget; 0 means unlimited (exact mode only).
    #[arg(long, default_value_t = 0)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the witness matrix here when one is found.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timings: bool,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn threads_from_env() -> Result<usize, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got {v:?}")),
        },
    }
}

fn construct(q: usize, output: Option<PathBuf>, latex: bool) -> ExitCode {
    let m = match odd_q_matrix(q) {
        Ok(m) => m,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let Some(path) = output else {
        print!("{}", if latex { render_latex(&m) } else { render_matrix(&m) });
        return ExitCode::SUCCESS;
    };
    if let Err(e) = write_matrix_file(&path, &m) {
        return fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display()));
    }
    if latex {
        print!("{}", render_latex(&m));
    } else {
        let doc = ConstructReport {
            command: "construct",
            p: m.rows(),
            q: m.cols(),
            colours: m.colour_count(),
            member: m.is_member(),
            output: Some(path.display().to_string()),
        };
        print!("{}", to_json(&doc));
    }
    ExitCode::SUCCESS
}

fn verify(path: PathBuf, diagnose: bool) -> ExitCode {
    let (m, bytes) = match read_matrix_file(&path) {
        Ok(x) => x,
        Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", path.display())),
    };
    let doc = VerifyReport::new(&m, &bytes, diagnose);
    print!("{}", to_json(&doc));
    if doc.member {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn bounds(p: usize, q: usize) -> ExitCode {
    let (upper, terms) = match (general_upper_bound(p, q), general_bound_terms(p, q)) {
        (Ok(u), Ok(t)) => (u, t),
        (Err(e), _) | (_, Err(e)) => return fail(EXIT_USAGE, e),
    };
    let k6 = if p == 6 { k6_bounds(q).ok() } else { None };
    let doc = BoundsReport {
        command: "bounds",
        p,
        q,
        general_upper_bound: upper,
        terms,
        k6,
    };
    print!("{}", to_json(&doc));
    ExitCode::SUCCESS
}

fn outcome_code(outcome: SearchOutcome) -> ExitCode {
    match outcome {
        SearchOutcome::Found => ExitCode::SUCCESS,
        SearchOutcome::Exhausted => ExitCode::from(EXIT_NEGATIVE),
        SearchOutcome::BudgetExhausted => ExitCode::from(EXIT_BUDGET),
    }
}

fn search(args: SearchArgs) -> ExitCode {
    let threads = match threads_from_env() {
        Ok(n) => n,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let (p, q) = (args.p, args.q);

    let (mut doc, witness) = match (args.heuristic, args.k) {
        (true, None) => return fail(EXIT_USAGE, "heuristic search needs --k"),
        (_, Some(k)) => {
            let cfg = SearchConfig::new(p, q, k)
                .budget(args.budget)
                .seed(args.seed)
                .threads(threads);
            let res = if args.heuristic {
                heuristic_search(&cfg)
            } else {
                exists_colouring(&cfg)
            };
            let res = match res {
                Ok(r) => r,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let mode = if args.heuristic { "heuristic" } else { "exact" };
            let seed = args.heuristic.then_some(args.seed);
            let mut doc = SearchReport::from_result(mode, p, q, k, seed, &res);
            doc.elapsed_ms = args.timings.then(|| res.elapsed.as_millis());
            (doc, res.witness)
        }
        (false, None) => {
            let limits = ExactLimits {
                max_cells: EXACT_CELL_LIMIT,
                node_budget: args.budget,
                threads,
            };
            let start = std::time::Instant::now();
            match achromatic_number(p, q, limits) {
                Ok(a) => {
                    let mut doc = SearchReport::from_achromatic(p, q, &a);
                    doc.elapsed_ms = args.timings.then(|| start.elapsed().as_millis());
                    (doc, Some(a.witness))
                }
                Err(e @ SearchError::BudgetExhausted { nodes, .. }) => {
                    let mut doc = SearchReport::budget_exhausted(p, q, nodes, e.to_string());
                    doc.elapsed_ms = args.timings.then(|| start.elapsed().as_millis());
                    print!("{}", to_json(&doc));
                    return ExitCode::from(EXIT_BUDGET);
                }
                Err(e) => return fail(EXIT_USAGE, e),
            }
        }
    };

    if let (Some(path), Some(w)) = (&args.output, &witness) {
        if let Err(e) = write_matrix_file(path, w) {
            return fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display()));
        }
        doc.witness_file = Some(path.display().to_string());
    }
    print!("{}", to_json(&doc));
    outcome_code(doc.outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct { q, output, latex } => construct(q, output, latex),
        Command::Verify { path, diagnose } => verify(path, diagnose),
        Command::Bounds { p, q } => bounds(p, q),
        Command::Search(args) => search(args),
    }
}
