//! Command-line surface for the distance-graph toolkit: construct families,
//! analyze their structure, solve for independence numbers, sample
//! percolated subgraphs, and run stability experiments.
//!
//! Machine-readable output goes to files (written atomically); human
//! summaries go to standard output. Every randomized subcommand requires an
//! explicit `--seed`, so published numbers are reproducible. Exit codes:
//! 0 success, 1 input error, 2 budget exhaustion.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gnrs::distance_graph::{edge_retained, ExplicitGraph, PercolationSpec};
use gnrs::experiments::{
    alpha_formula_check, alpha_table_to_csv, alpha_table_to_json, estimates_to_csv,
    estimates_to_json, exact_stability, half_percolation_alpha_scale, mc_stability, p_threshold,
    stability_sweep, LogBase, StabilityEstimate,
};
use gnrs::family_analysis::{
    bound_report, decompose, find_dense_core, is_dense_construction, DenseConstructionQuery,
};
use gnrs::mis_solver::{max_independent_set, Budget, SolveStatus};
use gnrs::{Family, GraphParams};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_BUDGET: u8 = 2;

#[derive(Parser)]
#[command(
    name = "gnrs",
    version,
    about = "Distance graphs G(n,r,s): exact independence numbers, extremal families, and percolation stability"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact independence number, optionally of a percolated subgraph or a
    /// family file's induced subgraph
    Alpha(AlphaArgs),
    /// Structural decomposition of an independent family (JSON report)
    Analyze(AnalyzeArgs),
    /// Generate a named extremal family
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Emit the retained edge list of one percolated graph
    Sample(SampleArgs),
    /// Monte Carlo stability estimate at one retention probability
    Stability(StabilityArgs),
    /// Exact stability probability by full edge-subset enumeration
    StabilityExact(StabilityExactArgs),
    /// Monte Carlo stability estimates over a grid of retention probabilities
    Sweep(SweepArgs),
    /// Stability threshold formula evaluation
    Threshold(ThresholdArgs),
    /// Solver alpha against the closed-form value over a range of n
    CheckAlphaFormula(CheckAlphaArgs),
}

#[derive(Args)]
struct BudgetArgs {
    /// Search-node limit for exact solves
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Wall-clock limit in seconds for exact solves
    #[arg(long, default_value_t = 300.0)]
    budget_seconds: f64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.budget_nodes, self.budget_seconds)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogBaseArg {
    /// Natural logarithm
    E,
    /// Base-2 logarithm
    #[value(name = "2")]
    Two,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    /// Edge retention probability; requires --seed
    #[arg(long, requires = "seed")]
    q: Option<f64>,
    /// Percolation seed
    #[arg(long)]
    seed: Option<u64>,
    /// Solve on the members of this family file instead of the full graph
    #[arg(long)]
    family: Option<PathBuf>,
    /// Write a JSON result record here
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Family file to decompose
    #[arg(long)]
    family: PathBuf,
    /// Intersection size of the ambient graph (must be 1)
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Also run the dense-core heuristic at this gamma and report it
    #[arg(long)]
    gamma: Option<f64>,
    /// Skip the star-density bound report (included by default for r >= 4)
    #[arg(long)]
    no_bounds: bool,
    /// Write the JSON report here (otherwise it prints to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// All r-subsets containing two fixed elements
    Star {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        x: u32,
        #[arg(long, default_value_t = 2)]
        y: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One star over each of k equal consecutive blocks of the ground set
    UnionStars {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All quadruples merging two of the pairs {1,2},{3,4},...
    PairMerge {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Ahlswede-Khachatrian families V1 and V2 of k-subsets
    Ak {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        /// Output path for V1
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output path for V2
        #[arg(long)]
        out2: Option<PathBuf>,
    },
    /// All r-subsets containing {1, ..., t}
    Trivial {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    /// Edge retention probability
    #[arg(long)]
    q: f64,
    #[arg(long)]
    seed: u64,
    /// Write the edge list here (otherwise it prints to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Reference independence number (default: solved from the full graph)
    #[arg(long)]
    alpha_ref: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct StabilityExactArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    /// Comma-separated retention probabilities, e.g. "0,0.25,0.5,0.75,1"
    #[arg(long)]
    q_grid: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    r: u64,
    /// Logarithm convention for the formula's "log"
    #[arg(long, value_enum, default_value_t = LogBaseArg::E)]
    log_base: LogBaseArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckAlphaArgs {
    #[arg(long)]
    n_min: u32,
    #[arg(long)]
    n_max: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(EXIT_INPUT)
                }
            };
        }
    };
    let threads = cli.threads;
    let run = || match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err
                .downcast_ref::<gnrs::Error>()
                .is_some_and(|e| matches!(e, gnrs::Error::BudgetExhausted { .. }))
            {
                EXIT_BUDGET
            } else {
                EXIT_INPUT
            }
        }
    };
    let code = match threads {
        None => run(),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(err) => {
                eprintln!("error: {err}");
                EXIT_INPUT
            }
        },
    };
    ExitCode::from(code)
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Alpha(args) => cmd_alpha(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Stability(args) => cmd_stability(args),
        Command::StabilityExact(args) => cmd_stability_exact(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::CheckAlphaFormula(args) => cmd_check_alpha(args),
    }
}

/// Writes machine-readable output atomically (temp file + rename).
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file next to {}", path.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_family(family: &Family, out: Option<&PathBuf>, label: &str) -> Result<()> {
    let text = family.to_file_string();
    match out {
        Some(path) => {
            write_atomic(path, &text)?;
            println!("{label}: {} members -> {}", family.len(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn estimates_out(rows: &[StabilityEstimate], out: Option<&PathBuf>, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => estimates_to_csv(rows),
        Format::Json => estimates_to_json(rows),
    };
    match out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_alpha(args: AlphaArgs) -> Result<u8> {
    let params = GraphParams::new(args.n, args.r, args.s)?;
    let family = match &args.family {
        Some(path) => {
            let fam = Family::read_file(path)?;
            fam.check_params(&params)?;
            fam
        }
        None => Family::full_vertex_set(&params),
    };
    let spec = match args.q {
        Some(q) => Some(PercolationSpec::new(
            q,
            args.seed.expect("clap enforces seed"),
        )?),
        None => None,
    };
    let res = max_independent_set(&family, &params, spec.as_ref(), &args.budget.budget())?;
    let status = match res.status {
        SolveStatus::Exact => "exact",
        SolveStatus::LowerBoundOnly => "lower-bound-only",
    };
    println!(
        "alpha({params}) = {} [{status}] over {} vertices",
        res.alpha,
        family.len()
    );
    println!("witness ({} members):", res.witness.len());
    for v in res.witness.iter() {
        println!("  {v}");
    }
    if let Some(out) = &args.out {
        let record = serde_json::json!({
            "n": params.n, "r": params.r, "s": params.s,
            "q": args.q,
            "seed": args.seed,
            "vertices": family.len(),
            "alpha": res.alpha,
            "status": status,
            "nodes_explored": res.nodes_explored,
            "witness": res.witness.element_lists(),
        });
        write_atomic(
            out,
            &format!("{}\n", serde_json::to_string_pretty(&record)?),
        )?;
    }
    Ok(if res.status == SolveStatus::Exact {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let family = Family::read_file(&args.family)?;
    let params = GraphParams::new(family.n(), family.r(), args.s)?;
    let budget = args.budget.budget();
    let report = decompose(&family, &params, &budget)?;
    let mut json = report.to_json();
    if !args.no_bounds && params.r >= 4 {
        let bounds = bound_report(&family, &params)?;
        json["bound_report"] = serde_json::to_value(&bounds)?;
    }
    if let Some(gamma) = args.gamma {
        let core = find_dense_core(&family, gamma, &params)?;
        json["dense_core"] = match core {
            None => serde_json::json!({ "gamma": gamma, "found": false }),
            Some((a1, a2)) => {
                let q = DenseConstructionQuery {
                    a1: &a1,
                    a2: &a2,
                    gamma,
                    params,
                };
                let diag = is_dense_construction(&q)?;
                serde_json::json!({
                    "gamma": gamma,
                    "found": true,
                    "size": a1.len(),
                    "diagnostics": serde_json::to_value(&diag)?,
                })
            }
        };
    }
    let text = format!("{}\n", serde_json::to_string_pretty(&json)?);
    match &args.out {
        Some(path) => {
            write_atomic(path, &text)?;
            println!(
                "analyzed {} members: k = {}, q = {}, d = {} -> {}",
                family.len(),
                report.a0.len(),
                report.q(),
                report.d_value,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(if report.a0_certified {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

fn cmd_construct(cmd: ConstructCmd) -> Result<u8> {
    match cmd {
        ConstructCmd::Star { n, r, x, y, out } => {
            let fam = gnrs::constructions::star(n, r, x, y)?;
            write_family(&fam, out.as_ref(), "star")?;
        }
        ConstructCmd::UnionStars { n, r, k, out } => {
            let fam = gnrs::constructions::union_of_stars(n, r, k)?;
            write_family(&fam, out.as_ref(), "union-stars")?;
        }
        ConstructCmd::PairMerge { n, out } => {
            let fam = gnrs::constructions::pair_merge(n)?;
            write_family(&fam, out.as_ref(), "pair-merge")?;
        }
        ConstructCmd::Trivial { n, r, t, out } => {
            let fam = gnrs::constructions::trivial_t_intersecting(n, r, t)?;
            write_family(&fam, out.as_ref(), "trivial")?;
        }
        ConstructCmd::Ak { n, k, t, out, out2 } => {
            let ak = gnrs::constructions::ak_families(n, k, t)?;
            println!(
                "ak families for n={n} k={k} t={t}: |V1| = {}, |V2| = {}, size-bound precondition {}",
                ak.v1.len(),
                ak.v2.len(),
                if ak.precondition_ok { "holds" } else { "fails (n <= (t+1)(k-t+1))" }
            );
            if let Some(path) = &out {
                write_atomic(path, &ak.v1.to_file_string())?;
                println!("V1 -> {}", path.display());
            }
            if let Some(path) = &out2 {
                write_atomic(path, &ak.v2.to_file_string())?;
                println!("V2 -> {}", path.display());
            }
            if out.is_none() && out2.is_none() {
                print!("{}", ak.v1.to_file_string());
                print!("{}", ak.v2.to_file_string());
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sample(args: SampleArgs) -> Result<u8> {
    let params = GraphParams::new(args.n, args.r, args.s)?;
    let spec = PercolationSpec::new(args.q, args.seed)?;
    let family = Family::full_vertex_set(&params);
    let graph = ExplicitGraph::build(&family, &params, None)?;
    let mut text = format!(
        "# n={} r={} s={} q={} seed={}\n",
        args.n, args.r, args.s, args.q, args.seed
    );
    let mut kept = 0usize;
    for &(i, j) in &graph.edges {
        let (u, v) = (&graph.vertices[i], &graph.vertices[j]);
        if edge_retained(u, v, &params, &spec)? {
            text.push_str(&format!("{u};{v}\n"));
            kept += 1;
        }
    }
    match &args.out {
        Some(path) => {
            write_atomic(path, &text)?;
            println!(
                "retained {kept} of {} edges of {params} at q={} -> {}",
                graph.edges.len(),
                args.q,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn summarize_estimate(e: &StabilityEstimate) {
    println!(
        "P[alpha(G_q) = {}] ~ {} (q = {}, deletion p = {}, {} trials, 95% Wilson [{}, {}])",
        e.alpha_ref,
        e.point_estimate,
        e.q,
        1.0 - e.q,
        e.trials,
        e.wilson_lo,
        e.wilson_hi
    );
    if e.indeterminate > 0 {
        println!(
            "  {} trials indeterminate (budget exhausted) and excluded",
            e.indeterminate
        );
    }
}

fn cmd_stability(args: StabilityArgs) -> Result<u8> {
    let params = GraphParams::new(args.n, args.r, args.s)?;
    let est = mc_stability(
        &params,
        args.q,
        args.trials,
        args.seed,
        args.alpha_ref,
        &args.budget.budget(),
    )?;
    summarize_estimate(&est);
    println!(
        "context: half-percolation alpha scale = {}",
        half_percolation_alpha_scale(&params)
    );
    estimates_out(std::slice::from_ref(&est), args.out.as_ref(), args.format)?;
    Ok(if est.indeterminate == 0 {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

fn cmd_stability_exact(args: StabilityExactArgs) -> Result<u8> {
    let params = GraphParams::new(args.n, args.r, args.s)?;
    let est = exact_stability(&params, args.q, &args.budget.budget())?;
    println!(
        "P[alpha(G_q) = {}] = {} exactly (q = {}, {} of {} edge subsets stable)",
        est.alpha_ref, est.point_estimate, est.q, est.successes, est.trials
    );
    estimates_out(std::slice::from_ref(&est), args.out.as_ref(), args.format)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(args: SweepArgs) -> Result<u8> {
    let params = GraphParams::new(args.n, args.r, args.s)?;
    let grid: Vec<f64> = args
        .q_grid
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| anyhow::anyhow!("bad q value {part:?} in --q-grid"))
        })
        .collect::<Result<_>>()?;
    let rows = stability_sweep(
        &params,
        &grid,
        args.trials,
        args.seed,
        &args.budget.budget(),
    )?;
    for row in &rows {
        summarize_estimate(row);
    }
    estimates_out(&rows, args.out.as_ref(), args.format)?;
    let indeterminate: u64 = rows.iter().map(|r| r.indeterminate).sum();
    Ok(if indeterminate == 0 {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

fn cmd_threshold(args: ThresholdArgs) -> Result<u8> {
    let natural = p_threshold(args.n, args.r, LogBase::Natural)?;
    let log2 = p_threshold(args.n, args.r, LogBase::Two)?;
    let chosen = match args.log_base {
        LogBaseArg::E => &natural,
        LogBaseArg::Two => &log2,
    };
    println!(
        "p_c({}, {}) = {} (retention-side; chosen log base)",
        args.n, args.r, chosen.p_c
    );
    println!(
        "  natural log: p_c = {}, deletion-side 1 - p_c = {}",
        natural.p_c, natural.deletion_threshold
    );
    println!(
        "  log2:        p_c = {}, deletion-side 1 - p_c = {}",
        log2.p_c, log2.deletion_threshold
    );
    if let Some(out) = &args.out {
        let record = serde_json::json!({
            "n": args.n,
            "r": args.r,
            "natural": { "p_c": natural.p_c, "deletion_threshold": natural.deletion_threshold },
            "log2": { "p_c": log2.p_c, "deletion_threshold": log2.deletion_threshold },
        });
        write_atomic(
            out,
            &format!("{}\n", serde_json::to_string_pretty(&record)?),
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_check_alpha(args: CheckAlphaArgs) -> Result<u8> {
    if args.n_min > args.n_max {
        bail!("--n-min must not exceed --n-max");
    }
    let rows = alpha_formula_check(
        args.n_min..=args.n_max,
        args.r,
        args.s,
        &args.budget.budget(),
    )?;
    let mut all_exact = true;
    for row in &rows {
        let status = match row.status {
            SolveStatus::Exact => "exact",
            SolveStatus::LowerBoundOnly => {
                all_exact = false;
                "lower-bound-only"
            }
        };
        println!(
            "n={} r={} s={}: alpha = {} [{}], formula C(n-s-1, r-s-1) = {}, equal = {}",
            row.n, row.r, row.s, row.alpha, status, row.formula, row.equal
        );
    }
    let text = match args.format {
        Format::Csv => alpha_table_to_csv(&rows),
        Format::Json => alpha_table_to_json(&rows),
    };
    if let Some(out) = &args.out {
        write_atomic(out, &text)?;
    }
    Ok(if all_exact { EXIT_OK } else { EXIT_BUDGET })
}
