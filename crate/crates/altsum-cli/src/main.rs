//! `altsum` — classify function expressions, check alternating-sum
//! inequalities, search for counterexamples, and replicate the built-in
//! numeric suite.
//!
//! Exit codes: 0 when all checks hold (or classification succeeded),
//! 1 when a violation or replication mismatch was found, 2 on input
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use altsum_cli::parallel::search_violation_parallel;
use altsum_cli::replicate;
use altsum_cli::report::{CheckEntry, GridReport, PropertyReport, Report, SearchReport};
use altsum_cli::seqfile;
use altsum_core::{
    check_generalized, check_szego, check_weinberger, parse, propagate, test_convexity,
    test_w_membership, AltSequence, CheckResult, FuncExpr, GridSpec, MembershipVerdict,
    PropertySet, PropertyStatus, SearchConfig, SearchStrategy,
};

#[derive(Parser)]
#[command(
    name = "altsum",
    version,
    about = "Alternating-sum inequality checking for functions on [0, inf)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON report to this path
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Random seed; flag overrides the ALTSUM_SEED environment variable
    #[arg(long, global = true, env = "ALTSUM_SEED")]
    seed: Option<u64>,
}

#[derive(Args)]
struct SeqArgs {
    /// Comma-separated sequence, repeatable: --seq "4.6,3.1,2.8,1.2"
    #[arg(long)]
    seq: Vec<String>,

    /// File with one comma-separated sequence per line (# comments)
    #[arg(long, value_name = "PATH")]
    seq_file: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum StrategyArg {
    Random,
    Grid,
    Pattern,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => SearchStrategy::Random,
            StrategyArg::Grid => SearchStrategy::Grid,
            StrategyArg::Pattern => SearchStrategy::Pattern,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Derive property flags and probe them on numeric grids
    Classify {
        /// Expression in the DSL, e.g. "pow(2) + xlogx()"
        #[arg(long)]
        expr: String,
        /// Domain bound A for the grids
        #[arg(long, default_value_t = 10.0)]
        bound: f64,
        /// Grid points per axis
        #[arg(long = "grid-n", default_value_t = 200)]
        grid_n: usize,
        /// Run grid testers even for properties already proven
        #[arg(long)]
        force_grid: bool,
    },
    /// Check the generalized inequality on the given sequences
    Check {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        seqs: SeqArgs,
    },
    /// Odd-length check for convex functions
    Szego {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        seqs: SeqArgs,
    },
    /// Power-function check with exponent r > 1
    Weinberger {
        /// Exponent of f(x) = x^r
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        seqs: SeqArgs,
    },
    /// Search for a violating sequence
    Search {
        #[arg(long)]
        expr: String,
        /// Sequence length
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        /// Maximum candidate evaluations
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Domain bound A
        #[arg(long, default_value_t = 10.0)]
        bound: f64,
        #[arg(long, value_enum, default_value = "pattern")]
        strategy: StrategyArg,
    },
    /// Replicate the built-in numeric suite; exits 0 only on full match
    Replicate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let started = Instant::now();
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let seed = cli.seed.unwrap_or(0);
    let mut report = Report::new(command_echo, seed);

    let code = match &cli.command {
        Command::Classify {
            expr,
            bound,
            grid_n,
            force_grid,
        } => run_classify(&mut report, expr, *bound, *grid_n, *force_grid)?,
        Command::Check { expr, seqs } => {
            let e = parse_expr(&mut report, expr)?;
            run_checks(&mut report, &e, seqs, check_generalized)?
        }
        Command::Szego { expr, seqs } => {
            let e = parse_expr(&mut report, expr)?;
            run_checks(&mut report, &e, seqs, check_szego)?
        }
        Command::Weinberger { r, seqs } => {
            if !r.is_finite() || *r <= 1.0 {
                anyhow::bail!("weinberger requires an exponent r > 1, got {r}");
            }
            let e = FuncExpr::Power(*r);
            report.expression = Some(e.to_string());
            report.canonical = Some(e.to_string());
            run_checks(&mut report, &e, seqs, |_, s| check_weinberger(*r, s))?
        }
        Command::Search {
            expr,
            m,
            budget,
            bound,
            strategy,
        } => {
            let e = parse_expr(&mut report, expr)?;
            let cfg = SearchConfig {
                m: *m,
                bound: *bound,
                budget: *budget,
                seed,
                strategy: (*strategy).into(),
            };
            cfg.validate().map_err(anyhow::Error::msg)?;
            run_search(&mut report, &e, &cfg)
        }
        Command::Replicate => run_replicate(&mut report),
    };

    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &cli.json {
        let json = report.to_json().context("serializing report")?;
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(code)
}

fn parse_expr(report: &mut Report, text: &str) -> Result<FuncExpr> {
    let e = parse(text).map_err(|err| anyhow::anyhow!("{err}"))?;
    report.expression = Some(text.to_string());
    report.canonical = Some(e.to_string());
    Ok(e)
}

fn status_line(s: &PropertyStatus) -> String {
    match s {
        PropertyStatus::Proven { rule } => format!("proven     [{rule}]"),
        PropertyStatus::Refuted { witness, violation } => {
            format!("refuted    witness {witness:?}, violation {violation:.3e}")
        }
        PropertyStatus::Unknown => "unknown".to_string(),
    }
}

fn print_properties(ps: &PropertySet) {
    for (name, status) in [
        ("in_w", &ps.in_w),
        ("convex", &ps.convex),
        ("nonnegative", &ps.nonnegative),
        ("nondecreasing", &ps.nondecreasing),
        ("f0_nonpositive", &ps.f0_nonpositive),
    ] {
        println!("  {name:<16} {}", status_line(status));
    }
}

fn print_grid_verdict(name: &str, v: &Option<MembershipVerdict>) {
    match v {
        None => println!("  {name:<16} skipped (already proven)"),
        Some(v) => match &v.witness {
            None => println!("  {name:<16} no violation over {} pairs", v.pairs_tested),
            Some(w) => println!(
                "  {name:<16} refuted at ({}, {}), violation {:.3e} over {} pairs",
                w.x, w.y, w.violation, v.pairs_tested
            ),
        },
    }
}

fn run_classify(
    report: &mut Report,
    expr_text: &str,
    bound: f64,
    grid_n: usize,
    force_grid: bool,
) -> Result<u8> {
    let e = parse_expr(report, expr_text)?;
    let ps = propagate(&e);
    let grid = GridSpec {
        bound,
        points: grid_n,
        ..GridSpec::default()
    };
    grid.validate().map_err(anyhow::Error::msg)?;

    // proven properties skip the numeric sweep unless forced
    let membership = if force_grid || !ps.in_w.is_proven() {
        Some(test_w_membership(&e, &grid).map_err(anyhow::Error::msg)?)
    } else {
        None
    };
    let convexity = if force_grid || !ps.convex.is_proven() {
        Some(test_convexity(&e, &grid).map_err(anyhow::Error::msg)?)
    } else {
        None
    };

    println!("expression: {expr_text}");
    println!("canonical:  {}", report.canonical.as_deref().unwrap_or(""));
    println!("propagated properties:");
    print_properties(&ps);
    println!("grid verdicts (A = {bound}, n = {grid_n}):");
    print_grid_verdict("membership", &membership);
    print_grid_verdict("convexity", &convexity);

    report.properties = Some(PropertyReport {
        propagated: ps,
        grid: Some(GridReport {
            spec: grid,
            membership,
            convexity,
        }),
    });
    Ok(0)
}

fn gather_sequences(seqs: &SeqArgs) -> Result<Vec<AltSequence>> {
    let mut out = Vec::new();
    for (i, text) in seqs.seq.iter().enumerate() {
        let seq = seqfile::parse_sequence(text).with_context(|| format!("--seq #{}", i + 1))?;
        out.push(seq);
    }
    if let Some(path) = &seqs.seq_file {
        out.extend(seqfile::load_sequences(path)?);
    }
    anyhow::ensure!(
        !out.is_empty(),
        "no sequences given; use --seq or --seq-file"
    );
    Ok(out)
}

fn run_checks(
    report: &mut Report,
    expr: &FuncExpr,
    seqs: &SeqArgs,
    check: impl Fn(&FuncExpr, &AltSequence) -> Result<CheckResult, altsum_core::CheckError>,
) -> Result<u8> {
    let sequences = gather_sequences(seqs)?;
    report.properties = Some(PropertyReport {
        propagated: propagate(expr),
        grid: None,
    });

    let mut any_violated = false;
    println!(
        "{:<28} {:>14} {:>14} {:>12}  verdict",
        "sequence", "lhs", "rhs", "margin"
    );
    for (i, seq) in sequences.iter().enumerate() {
        let result = check(expr, seq).map_err(|e| anyhow::anyhow!("sequence #{}: {e}", i + 1))?;
        any_violated |= !result.holds;
        println!(
            "{:<28} {:>14.6} {:>14.6} {:>12.3e}  {}",
            format!("{:?}", seq.values()),
            result.lhs,
            result.rhs,
            result.margin,
            if result.holds { "holds" } else { "VIOLATED" }
        );
        report.checks.push(CheckEntry {
            sequence: seq.values().to_vec(),
            result,
        });
    }
    Ok(u8::from(any_violated))
}

fn run_search(report: &mut Report, expr: &FuncExpr, cfg: &SearchConfig) -> u8 {
    let outcome = search_violation_parallel(expr, cfg);
    println!(
        "strategy {:?}, m = {}, budget = {}, bound = {}, seed = {}",
        cfg.strategy, cfg.m, cfg.budget, cfg.bound, cfg.seed
    );
    println!(
        "evaluations: {}, best margin: {:.6e}, violated: {}",
        outcome.evaluations, outcome.best_margin, outcome.violated
    );
    if let Some(seq) = &outcome.best_seq {
        println!("best sequence: {:?}", seq.values());
    }
    let code = u8::from(outcome.violated);
    report.search = Some(SearchReport {
        strategy: cfg.strategy,
        m: cfg.m,
        bound: cfg.bound,
        budget: cfg.budget,
        outcome,
    });
    code
}

fn run_replicate(report: &mut Report) -> u8 {
    let entries = replicate::run();
    let mut failures = 0;
    for e in &entries {
        if e.pass {
            println!("PASS {:<28} {}", e.name, e.actual);
        } else {
            failures += 1;
            println!(
                "FAIL {:<28} expected {}, got {}",
                e.name, e.expected, e.actual
            );
        }
    }
    println!(
        "replication: {}/{} items match",
        entries.len() - failures,
        entries.len()
    );
    let code = u8::from(failures > 0);
    report.replication = Some(entries);
    code
}
