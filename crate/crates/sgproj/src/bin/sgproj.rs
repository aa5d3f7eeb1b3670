//! Batch interface: run single solves, parameter sweeps, performance
//! profiles, and theoretical bound checks, writing CSV artifacts.
//!
//! Options may also come from a plain-text config file of `key=value` lines
//! (same keys as the long flags); command-line flags take precedence.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sgproj::bench::{generate, BenchSpec, ProblemKind};
use sgproj::bounds::{check_theoretical_bounds, BoundCheckInputs};
use sgproj::csvio;
use sgproj::linesearch::LineSearchStrategy;
use sgproj::profile::{performance_profile, ProfileMetric};
use sgproj::solver::{solve, ProjectionMode, SolverConfig};
use sgproj::{estimate_lipschitz_ls, LsRosenbrock};

#[derive(Parser)]
#[command(name = "sgproj", about = "Projected spectral gradient benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write its per-iteration CSV.
    Solve(CommonArgs),
    /// Solve the cartesian product of seeds x forcing parameters x
    /// strategies; write per-run CSVs and a summary table.
    Sweep(CommonArgs),
    /// Tabulate performance profiles from an existing summary CSV.
    Profile(ProfileArgs),
    /// Solve an instance with analytic references and report the
    /// theoretical bound checks.
    CheckBounds(CommonArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// prob1 | prob2 | boxqp
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    /// Single seed (solve / check-bounds).
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated seed list (sweep).
    #[arg(long)]
    seeds: Option<String>,
    /// armijo | max | avg; comma-separated for sweeps.
    #[arg(long)]
    linesearch: Option<String>,
    /// Window size for the max strategy.
    #[arg(long = "M")]
    window: Option<usize>,
    /// Averaging weight for the avg strategy.
    #[arg(long)]
    eta: Option<f64>,
    /// Distance-certified forcing parameter(s).
    #[arg(long)]
    zeta: Option<String>,
    /// Variational-certified forcing parameter(s).
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<u64>,
    /// Output directory for CSV artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plain-text key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Summary CSV produced by `sweep`.
    #[arg(long)]
    summary: PathBuf,
    /// f_evals | outer_iters | proj_work | wall_time
    #[arg(long, default_value = "f_evals")]
    metric: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config_file(path: &Path) -> Result<HashMap<String, String>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => return Err(format!("{}:{}: expected key=value", path.display(), i + 1)),
        }
    }
    Ok(map)
}

macro_rules! fill {
    ($args:ident, $map:ident, $field:ident, $key:expr) => {
        if $args.$field.is_none() {
            if let Some(v) = $map.get($key) {
                $args.$field = Some(v.parse().map_err(|_| {
                    format!("config key '{}': cannot parse '{}'", $key, v)
                })?);
            }
        }
    };
}

fn merge_config(mut args: CommonArgs) -> Result<CommonArgs, String> {
    let map = match &args.config {
        Some(path) => read_config_file(path)?,
        None => return Ok(args),
    };
    fill!(args, map, problem, "problem");
    fill!(args, map, n, "n");
    fill!(args, map, m, "m");
    fill!(args, map, c, "c");
    fill!(args, map, seed, "seed");
    fill!(args, map, seeds, "seeds");
    fill!(args, map, linesearch, "linesearch");
    fill!(args, map, window, "M");
    fill!(args, map, eta, "eta");
    fill!(args, map, zeta, "zeta");
    fill!(args, map, gamma, "gamma");
    fill!(args, map, tol, "tol");
    fill!(args, map, max_iter, "max-iter");
    fill!(args, map, out, "out");
    Ok(args)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| format!("bad {what} entry '{p}'"))
        })
        .collect()
}

fn parse_strategies(
    spec: &str,
    window: usize,
    eta: f64,
) -> Result<Vec<LineSearchStrategy>, String> {
    spec.split(',')
        .map(|s| match s.trim() {
            "armijo" => Ok(LineSearchStrategy::Armijo),
            "max" => Ok(LineSearchStrategy::MaxType { window }),
            "avg" => Ok(LineSearchStrategy::AverageType { eta }),
            other => Err(format!(
                "unknown line search '{other}' (expected armijo|max|avg)"
            )),
        })
        .collect()
}

struct Resolved {
    problem: ProblemKind,
    seeds: Vec<u64>,
    modes: Vec<ProjectionMode>,
    strategies: Vec<LineSearchStrategy>,
    base: SolverConfig,
    out: PathBuf,
}

fn resolve(args: &CommonArgs) -> Result<Resolved, String> {
    let name = args.problem.as_deref().unwrap_or("prob1");
    let n = args.n.unwrap_or(10);
    let m = args.m.unwrap_or(2 * n);
    let problem = match name {
        "prob1" => ProblemKind::Prob1 {
            n,
            m,
            c: args.c.unwrap_or(10.0),
        },
        "prob2" => ProblemKind::Prob2 {
            n,
            m,
            c: args.c.unwrap_or(100.0),
        },
        "boxqp" => ProblemKind::BoxQp { n },
        other => return Err(format!("unknown problem '{other}'")),
    };
    let seeds = match (&args.seeds, args.seed) {
        (Some(list), _) => parse_list::<u64>(list, "seed")?,
        (None, Some(s)) => vec![s],
        (None, None) => vec![1],
    };
    let window = args.window.unwrap_or(5);
    let eta = args.eta.unwrap_or(0.85);
    let strategies = parse_strategies(args.linesearch.as_deref().unwrap_or("armijo"), window, eta)?;

    // Forcing-parameter resolution: explicit gammas select the
    // variational-certified mode, otherwise zetas (default 0.8) select the
    // distance-certified mode. prob2 defaults to gamma 0.4999.
    let modes: Vec<ProjectionMode> = match (&args.zeta, &args.gamma) {
        (Some(_), Some(_)) => {
            return Err("give either --zeta or --gamma, not both".into());
        }
        (None, Some(gs)) => parse_list::<f64>(gs, "gamma")?
            .into_iter()
            .map(|gamma| ProjectionMode::RType { gamma })
            .collect(),
        (Some(zs), None) => parse_list::<f64>(zs, "zeta")?
            .into_iter()
            .map(|zeta| ProjectionMode::PType { zeta })
            .collect(),
        (None, None) => match problem {
            ProblemKind::Prob2 { .. } => vec![ProjectionMode::RType { gamma: 0.4999 }],
            _ => vec![ProjectionMode::PType { zeta: 0.8 }],
        },
    };

    let base = SolverConfig {
        tol: args.tol.unwrap_or(1e-6),
        max_iter: args.max_iter.unwrap_or(20_000),
        mode: modes[0],
        strategy: strategies[0],
        ..SolverConfig::default()
    };
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    Ok(Resolved {
        problem,
        seeds,
        modes,
        strategies,
        base,
        out,
    })
}

fn ensure_dir(path: &Path) -> Result<(), String> {
    std::fs::create_dir_all(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_solve(args: CommonArgs) -> Result<(), String> {
    let r = resolve(&args)?;
    ensure_dir(&r.out)?;
    let gen = generate(r.problem, r.seeds[0]).map_err(|e| e.to_string())?;
    let config = SolverConfig {
        seed: r.seeds[0],
        ..r.base.clone()
    };
    let result = solve(&gen.instance, &gen.x0, &config);
    let path = r.out.join(format!("{}.csv", gen.id));
    csvio::write_iteration_csv(&path, &result.records).map_err(|e| e.to_string())?;
    println!(
        "{}: {} after {} iterations, f = {:.9e}, f_evals = {}, proj_work = {}",
        gen.id,
        result.status.as_str(),
        result.records.len(),
        result.f_final,
        result.total_f_evals,
        result.total_proj_work,
    );
    if let Some(detail) = result.failure_detail {
        println!("  detail: {detail}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep(args: CommonArgs) -> Result<(), String> {
    let r = resolve(&args)?;
    ensure_dir(&r.out)?;
    let spec = BenchSpec {
        problem: r.problem,
        seeds: r.seeds,
        modes: r.modes,
        strategies: r.strategies,
        base: r.base,
    };
    let out = sgproj::run_sweep(&spec).map_err(|e| e.to_string())?;
    for run in &out.runs {
        let path = r.out.join(format!("{}.csv", run.run_id));
        csvio::write_iteration_csv(&path, &run.records).map_err(|e| e.to_string())?;
    }
    let summary_path = r.out.join("summary.csv");
    csvio::write_summary_csv(&summary_path, &out.summaries()).map_err(|e| e.to_string())?;
    println!("{} runs -> {}", out.runs.len(), summary_path.display());
    let works = out.mean_by_mode(|s| s.proj_work as f64);
    for (param, iters) in out.mean_by_mode(|s| s.outer_iters as f64) {
        let work = works
            .iter()
            .find(|(p, _)| *p == param)
            .map(|(_, w)| *w)
            .unwrap_or(f64::NAN);
        println!("  param {param:>10}: mean iters {iters:10.1}, mean proj work {work:12.1}");
    }
    Ok(())
}

fn cmd_profile(args: ProfileArgs) -> Result<(), String> {
    let metric = ProfileMetric::parse(&args.metric).map_err(|e| e.to_string())?;
    let summaries = csvio::read_summary_csv(&args.summary).map_err(|e| e.to_string())?;
    let profile = performance_profile(&summaries, metric, 50).map_err(|e| e.to_string())?;
    let out = args.out.unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&out)?;
    let path = out.join(format!("profile_{}.csv", args.metric));
    csvio::write_profile_csv(&path, &profile).map_err(|e| e.to_string())?;
    println!("wrote {}", path.display());
    for (v, rho) in profile.variants.iter().zip(&profile.rho) {
        println!(
            "  {v}: rho(1) = {:.3}, rho(max) = {:.3}",
            rho[0],
            rho[rho.len() - 1]
        );
    }
    Ok(())
}

fn cmd_check_bounds(args: CommonArgs) -> Result<(), String> {
    let mut r = resolve(&args)?;
    ensure_dir(&r.out)?;
    r.base.record_trajectory = true;
    let gen = generate(r.problem, r.seeds[0]).map_err(|e| e.to_string())?;
    let config = SolverConfig {
        seed: r.seeds[0],
        ..r.base.clone()
    };
    let result = solve(&gen.instance, &gen.x0, &config);
    println!(
        "{}: {} after {} iterations",
        gen.id,
        result.status.as_str(),
        result.records.len()
    );
    // The identity-factor quadratic is the globally Lipschitz case.
    let lipschitz = match r.problem {
        ProblemKind::BoxQp { n } => {
            let eye = sgproj::linalg::Mat::identity(n * n);
            let zeros = sgproj::linalg::Mat::zeros(n * n, n * n);
            estimate_lipschitz_ls(&LsRosenbrock::new(eye, zeros, 0.0).map_err(|e| e.to_string())?)
                .ok()
        }
        _ => None,
    };
    let inputs = BoundCheckInputs {
        lipschitz,
        f_star: gen.instance.f_star,
        x_star: gen.x_star.clone(),
    };
    let report = check_theoretical_bounds(&result, &inputs, &config);
    print!("{report}");
    let ok = report.all_passed_or_skipped();
    println!("bound checks: {}", if ok { "OK" } else { "VIOLATIONS FOUND" });
    if !ok {
        return Err("bound violations".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<(), String> {
        match cli.command {
            Command::Solve(args) => cmd_solve(merge_config(args)?),
            Command::Sweep(args) => cmd_sweep(merge_config(args)?),
            Command::Profile(args) => cmd_profile(args),
            Command::CheckBounds(args) => cmd_check_bounds(merge_config(args)?),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
