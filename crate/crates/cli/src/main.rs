use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use deformopt::harness::{
    builtin_example, emit_report_with, format_sig, format_vector, run_benchmark, solve_problem,
    BenchRow, ExampleId, ReportFormat, ReportOptions,
};
use deformopt::{
    brouwer_problem, fixed_point_residual, parse_problem, parse_self_map, Error, PenaltyParams,
    Problem, PsoConfig, SelfMap, SolverConfig, SolverKind,
};

#[derive(Parser)]
#[command(
    name = "deformopt",
    version,
    about = "Constrained minimization through a penalty deformation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print its report row.
    Solve(SolveArgs),
    /// Run the built-in examples and print the result table.
    Bench(BenchArgs),
    /// Search for a fixed point of a self-map of a box.
    Fixpoint(FixpointArgs),
    /// Evaluate the feasibility measure at a point without solving.
    Check(CheckArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ProblemArg {
    /// Problem file.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Built-in example tag, e.g. 5.1.
    #[arg(long)]
    example: Option<ExampleId>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MapArg {
    /// Self-map file (`map` lines instead of objective and constraints).
    #[arg(long)]
    map: Option<PathBuf>,
    /// Built-in fixed-point example: 5.5 or 5.6.
    #[arg(long)]
    example: Option<ExampleId>,
}

#[derive(Args)]
struct Penalty {
    /// Objective shift K.
    #[arg(long = "k", default_value_t = 100.0, allow_hyphen_values = true)]
    k: f64,
    /// Feasibility weight M.
    #[arg(long = "m", default_value_t = 1e4)]
    m: f64,
    /// Deformation parameter t in (0, 1).
    #[arg(long = "t", default_value_t = 0.95)]
    t: f64,
}

impl Penalty {
    fn params(&self) -> anyhow::Result<PenaltyParams> {
        Ok(PenaltyParams::new(self.k, self.m, self.t)?)
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Wall-time column; on by default for markdown, off for csv.
    #[arg(long, value_enum)]
    timing: Option<Switch>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Output {
    fn render(&self, rows: &[BenchRow]) -> String {
        let (format, timing) = match self.format {
            Format::Markdown => (ReportFormat::Markdown, true),
            Format::Csv => (ReportFormat::Csv, false),
        };
        let include_timing = self.timing.map_or(timing, |s| matches!(s, Switch::On));
        emit_report_with(rows, format, ReportOptions { include_timing })
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: ProblemArg,
    #[arg(long, default_value = "pso")]
    solver: SolverKind,
    #[command(flatten)]
    penalty: Penalty,
    /// PSO seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start point for pattern search and descent, e.g. `1,-2.5`.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Largest final feasibility measure counted as a success.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    /// Solvers to run: pso, pattern, descent or all (comma separated).
    #[arg(long, default_value = "all", value_delimiter = ',')]
    solver: Vec<String>,
    #[command(flatten)]
    penalty: Penalty,
    /// PSO seeds, comma separated.
    #[arg(long, default_value = "0", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FixpointArgs {
    #[command(flatten)]
    source: MapArg,
    #[arg(long, default_value = "pso")]
    solver: SolverKind,
    #[command(flatten)]
    penalty: Penalty,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start point; defaults to the centre of the box.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: ProblemArg,
    #[arg(long, allow_hyphen_values = true)]
    start: String,
}

/// Result of a run that read its inputs successfully.
enum Outcome {
    Done,
    Infeasible(f64),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a).map(|()| Outcome::Done),
        Command::Fixpoint(a) => fixpoint(a),
        Command::Check(a) => check(a).map(|()| Outcome::Done),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible(f)) => {
            eprintln!("infeasible result: F = {}", format_sig(f));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parse errors carry `line:column`; prefix them with the file name.
fn located(path: &Path, e: Error) -> anyhow::Error {
    match e {
        Error::Parse(p) => anyhow!("{}:{p}", path.display()),
        other => anyhow!("{}: {other}", path.display()),
    }
}

fn load_problem(arg: &ProblemArg) -> anyhow::Result<(String, Problem, Option<ExampleId>)> {
    match (&arg.problem, arg.example) {
        (Some(path), _) => {
            let problem = parse_problem(&read(path)?).map_err(|e| located(path, e))?;
            let label = path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            Ok((label, problem, None))
        }
        (None, Some(id)) => Ok((id.tag().to_string(), builtin_example(id), Some(id))),
        (None, None) => bail!("one of --problem or --example is required"),
    }
}

fn parse_point(text: &str, dim: usize) -> anyhow::Result<Vec<f64>> {
    let x = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coordinate {s:?} in --start"))
        })
        .collect::<anyhow::Result<Vec<f64>>>()?;
    if x.len() != dim {
        bail!(
            "--start has {} coordinates, the problem has {dim} variables",
            x.len()
        );
    }
    Ok(x)
}

fn config(kind: SolverKind, seed: u64) -> SolverConfig {
    match kind {
        SolverKind::Pso => SolverConfig::Pso(PsoConfig::default().with_seed(seed)),
        other => other.default_config(),
    }
}

fn solve(a: SolveArgs) -> anyhow::Result<Outcome> {
    let (label, problem, builtin) = load_problem(&a.source)?;
    let params = a.penalty.params()?;
    let start = match (&a.start, builtin) {
        (Some(s), _) => Some(parse_point(s, problem.dim())?),
        (None, Some(id)) => Some(id.start_point()),
        (None, None) if a.solver.needs_start() => bail!("--solver {} needs --start", a.solver),
        (None, None) => None,
    };
    let start = start.filter(|_| a.solver.needs_start());
    let config = config(a.solver, a.seed);

    let timer = Instant::now();
    let solution = solve_problem(&problem, params, &config, start.as_deref())?;
    let feasibility = solution.feasibility;
    let row = BenchRow {
        example: label,
        solver: a.solver,
        seed: (a.solver == SolverKind::Pso).then_some(a.seed),
        initial_point: start,
        outcome: Ok(solution),
        wall_time: timer.elapsed(),
    };
    a.output.write(&a.output.render(&[row]))?;
    Ok(if feasibility > a.tol {
        Outcome::Infeasible(feasibility)
    } else {
        Outcome::Done
    })
}

fn bench(a: BenchArgs) -> anyhow::Result<()> {
    let mut kinds = Vec::new();
    for name in &a.solver {
        if name == "all" {
            kinds.extend(SolverKind::ALL);
        } else {
            kinds.push(name.parse::<SolverKind>()?);
        }
    }
    let params = a.penalty.params()?;
    let mut rows = Vec::new();
    for kind in kinds {
        rows.extend(run_benchmark(
            &ExampleId::ALL,
            &kind.default_config(),
            params,
            &a.seeds,
        )?);
    }
    a.output.write(&a.output.render(&rows))
}

fn fixpoint(a: FixpointArgs) -> anyhow::Result<Outcome> {
    let map: SelfMap = match (&a.source.map, a.source.example) {
        (Some(path), _) => parse_self_map(&read(path)?).map_err(|e| located(path, e))?,
        (None, Some(id)) => id
            .self_map()
            .ok_or_else(|| anyhow!("example {id} is not a fixed-point example (use 5.5 or 5.6)"))?,
        (None, None) => bail!("one of --map or --example is required"),
    };
    if let Some(x) = map.find_escape(10_000, a.seed) {
        eprintln!(
            "warning: the map sends {} outside the box; a fixed point is not guaranteed",
            format_vector(&x)
        );
    }
    let problem = brouwer_problem(&map);
    let params = a.penalty.params()?;
    let start = match &a.start {
        Some(s) => parse_point(s, map.dim())?,
        None => {
            let d = map.domain();
            d.lower()
                .iter()
                .zip(d.upper())
                .map(|(lo, hi)| 0.5 * (lo + hi))
                .collect()
        }
    };
    let config = config(a.solver, a.seed);
    let solution = solve_problem(&problem, params, &config, Some(&start))?;
    let residual = fixed_point_residual(&map, &solution.point)?;
    println!("point = {}", format_vector(&solution.point));
    println!("residual = {}", format_sig(residual));
    Ok(if solution.feasibility > a.tol {
        Outcome::Infeasible(solution.feasibility)
    } else {
        Outcome::Done
    })
}

fn check(a: CheckArgs) -> anyhow::Result<()> {
    let (_, problem, _) = load_problem(&a.source)?;
    let x = parse_point(&a.start, problem.dim())?;
    let f = problem.feasibility_measure(&x)?;
    let report = problem.constraint_report(&x)?;
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), format_sig);
    println!("F = {}", format_sig(f));
    println!("max_eq_residual = {}", cell(report.max_eq_residual));
    println!("max_ineq_value = {}", cell(report.max_ineq_value));
    Ok(())
}
