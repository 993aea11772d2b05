use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hmplan::error::PddlError;
use hmplan::idao::{Stopping, SubsetOrder};
use hmplan::metrics::trace_to_csv;
use hmplan::model::{Mode, Problem};
use hmplan::pddl;
use hmplan::pipeline::{run, BaseHeuristic, Pipeline, PlannerConfig, Verdict};
use hmplan::rational::{Rational, INFINITY};

#[derive(Parser)]
#[command(name = "hmplan", version, about = "Optimal regression planner with h^m heuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a PDDL problem optimally.
    Plan(PlanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Tp4,
    Hspa,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Seq,
    Par,
    Temp,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    H1,
    H2,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lexical,
    Eval,
}

fn parse_stop(s: &str) -> Result<Stopping, String> {
    match s {
        "no-and" => Ok(Stopping::NoAndNode),
        "converged" => Ok(Stopping::Converged),
        _ => match s.strip_prefix("fixed:") {
            Some(m) => m.parse().map(Stopping::Fixed).map_err(|e| format!("bad m in `{s}`: {e}")),
            None => Err(format!("expected fixed:M, no-and or converged, found `{s}`")),
        },
    }
}

fn parse_limit(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(clap::Args)]
struct PlanArgs {
    domain: PathBuf,
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "hspa")]
    pipeline: PipelineArg,
    /// Defaults to temporal for domains with durative actions, else sequential.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value = "h2")]
    base: BaseArg,
    #[arg(long, value_parser = parse_stop, default_value = "fixed:3")]
    stop: Stopping,
    #[arg(long)]
    round_durations: bool,
    #[arg(long)]
    no_right_shift: bool,
    /// Transposition table slots (0 disables it).
    #[arg(long, default_value_t = 1 << 16)]
    tt_size: usize,
    /// Solved table slots (0 disables it).
    #[arg(long, default_value_t = 1 << 16)]
    solved_size: usize,
    /// Write the bound evolution as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write per-space expansion statistics as CSV.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long)]
    validate: bool,
    #[arg(long)]
    first_iteration_only: bool,
    #[arg(long, value_parser = parse_limit)]
    upper_limit: Option<Rational>,
    #[arg(long)]
    max_expansions: Option<u64>,
    #[arg(long, value_enum, default_value = "lexical")]
    subset_order: OrderArg,
}

const EXIT_SOLVED: u8 = 0;
const EXIT_NO_PLAN: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        EXIT_INPUT
    })
}

fn load(args: &PlanArgs) -> Result<Problem, u8> {
    let dtext = read(&args.domain)?;
    let ptext = read(&args.problem)?;
    let report = |path: &Path, e: PddlError| {
        eprintln!("{}", e.with_file(&path.display().to_string()));
        EXIT_INPUT
    };
    let d = pddl::parse_domain(&dtext).map_err(|e| report(&args.domain, e))?;
    pddl::check_domain(&d).map_err(|e| report(&args.domain, e))?;
    let p = pddl::parse_problem(&ptext).map_err(|e| report(&args.problem, e))?;
    pddl::ground(&d, &p).map_err(|e| report(&args.problem, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), u8> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        EXIT_INPUT
    })
}

fn plan(args: PlanArgs) -> Result<u8, u8> {
    let problem = load(&args)?;
    let cfg = PlannerConfig {
        pipeline: match args.pipeline {
            PipelineArg::Tp4 => Pipeline::Tp4,
            PipelineArg::Hspa => Pipeline::Hspa,
        },
        mode: args.mode.map(|m| match m {
            ModeArg::Seq => Mode::Sequential,
            ModeArg::Par => Mode::Parallel,
            ModeArg::Temp => Mode::Temporal,
        }),
        base_heuristic: match args.base {
            BaseArg::H1 => BaseHeuristic::H1,
            BaseArg::H2 => BaseHeuristic::H2,
        },
        stopping: args.stop,
        tt_capacity: args.tt_size,
        solved_capacity: args.solved_size,
        round_durations: args.round_durations,
        right_shift: !args.no_right_shift,
        validate: args.validate,
        first_iteration_only: args.first_iteration_only,
        upper_limit: args.upper_limit.unwrap_or(INFINITY),
        max_expansions: args.max_expansions,
        subset_order: match args.subset_order {
            OrderArg::Lexical => SubsetOrder::Lexical,
            OrderArg::Eval => SubsetOrder::EvalDescending,
        },
        keep_log: false,
    };
    let r = match run(&problem, &cfg) {
        Ok(r) => r,
        Err(e @ hmplan::error::PlanError::Config(_)) => {
            eprintln!("{e}");
            return Err(EXIT_INPUT);
        }
        Err(e) => {
            eprintln!("{e}");
            return Err(EXIT_RESOURCE);
        }
    };
    if let Some(path) = &args.trace {
        write_file(path, &trace_to_csv(&r.report.trace))?;
    }
    if let Some(path) = &args.metrics {
        write_file(path, &r.report.to_csv())?;
    }
    let expansions: u64 = r.report.spaces.values().map(|s| s.expansions).sum();
    match &r.verdict {
        Verdict::Solved(plan) => {
            print!("{}", plan.render(&r.problem));
            eprintln!("solved: metric {} ({} expansions)", plan.metric, expansions);
            Ok(EXIT_SOLVED)
        }
        Verdict::Unsolvable => {
            eprintln!("unsolvable");
            Ok(EXIT_NO_PLAN)
        }
        Verdict::NoSolutionWithin { limit, lower_bound } => {
            eprintln!("no plan with metric at most {limit} (lower bound {lower_bound})");
            Ok(EXIT_NO_PLAN)
        }
        Verdict::ResourceLimit { lower_bound } => {
            eprintln!("expansion limit reached after {expansions} expansions (lower bound {lower_bound})");
            Ok(EXIT_RESOURCE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Search recursion can be deep on long plans.
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || match cli.command {
        Command::Plan(args) => plan(args).unwrap_or_else(|code| code),
    });
    let code = match worker {
        Ok(h) => h.join().unwrap_or(EXIT_RESOURCE),
        Err(e) => {
            eprintln!("cannot start planner thread: {e}");
            EXIT_RESOURCE
        }
    };
    ExitCode::from(code)
}
