//! Benchmark instance generation and parameter sweeps.
//!
//! Two random matrix problems drive the benchmarks: a dominance-constrained
//! least-squares/Rosenbrock problem projected by the cyclic engine, and its
//! trace-one positive-semidefinite counterpart projected by the
//! conditional-gradient engine. A deterministic box-constrained quadratic
//! with a known optimizer rounds out the set for bound checking.

use std::time::Instant;

use crate::linalg::{self, Mat};
use crate::linesearch::LineSearchStrategy;
use crate::model::{LsRosenbrock, ProblemInstance};
use crate::rng::{stream_seed, SplitMix64};
use crate::sets::FeasibleSet;
use crate::solver::{solve, IterationRecord, ProjectionMode, SolverConfig};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemKind {
    /// Dominance cone ∩ {X ≥ 0}; distance-certified projections.
    Prob1 { n: usize, m: usize, c: f64 },
    /// Trace-one PSD matrices; variational-certified projections.
    Prob2 { n: usize, m: usize, c: f64 },
    /// Deterministic box quadratic with analytic optimizer.
    BoxQp { n: usize },
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Prob1 { .. } => "prob1",
            ProblemKind::Prob2 { .. } => "prob2",
            ProblemKind::BoxQp { .. } => "boxqp",
        }
    }
}

/// A generated instance: the problem, a feasible start, and any analytic
/// reference data.
pub struct GeneratedProblem {
    pub instance: ProblemInstance,
    pub x0: Vec<f64>,
    pub x_star: Option<Vec<f64>>,
    pub id: String,
}

fn random_mat(rows: usize, cols: usize, rng: &mut SplitMix64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.uniform(-1.0, 1.0))
}

/// Dominance-constrained instance. A and B are uniform on [-1,1]; the start
/// is a symmetrized uniform [0,1] matrix whose diagonal is lifted to twice
/// the off-diagonal row sum, which is feasible (entries are nonnegative).
pub fn gen_problem1(
    n: usize,
    m: usize,
    c: f64,
    seed: u64,
) -> Result<(ProblemInstance, Vec<f64>), Error> {
    if m < n {
        return Err(Error::InvalidInput(format!("need m >= n, got m={m} n={n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let a = random_mat(m, n, &mut rng);
    let b = random_mat(m, n, &mut rng);
    let mut x0 = vec![0.0; n * n];
    for v in &mut x0 {
        *v = rng.next_f64();
    }
    let x0s = linalg::symmetrize(&x0, n);
    let mut x0 = x0s;
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| x0[i * n + j]).sum();
        x0[i * n + i] = 2.0 * off;
    }
    let set = FeasibleSet::sdd_nonneg(n);
    debug_assert!(set.is_feasible(&x0, 1e-10));
    let p = LsRosenbrock::new(a, b, c)?;
    Ok((ProblemInstance::from_ls_rosenbrock(p, set, None)?, x0))
}

/// Trace-one PSD instance. The start is a normalized Gram matrix of a
/// uniform [-1,1] square factor; a vanishing trace (probability zero)
/// retries with a perturbed seed.
pub fn gen_problem2(
    n: usize,
    m: usize,
    c: f64,
    seed: u64,
) -> Result<(ProblemInstance, Vec<f64>), Error> {
    if m < n {
        return Err(Error::InvalidInput(format!("need m >= n, got m={m} n={n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let a = random_mat(m, n, &mut rng);
    let b = random_mat(m, n, &mut rng);
    let x0 = loop {
        let g: Vec<f64> = (0..n * n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let mut x = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += g[i * n + k] * g[j * n + k];
                }
                x[i * n + j] = s;
            }
        }
        let tr: f64 = (0..n).map(|i| x[i * n + i]).sum();
        if tr > 0.0 {
            x.iter_mut().for_each(|v| *v /= tr);
            break x;
        }
    };
    let set = FeasibleSet::Spectrahedron { n };
    let p = LsRosenbrock::new(a, b, c)?;
    Ok((ProblemInstance::from_ls_rosenbrock(p, set, None)?, x0))
}

/// Box quadratic ½‖X − T‖²_F over [0,1]^{n×n} with T_ij ∈ {2, −1} in a
/// checkerboard pattern; the optimizer is the clamp of T and both the
/// optimizer and optimal value are analytic.
pub fn gen_boxqp(n: usize) -> Result<GeneratedProblem, Error> {
    let dim = n * n;
    let target: Vec<f64> = (0..dim)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if (i + j) % 2 == 0 {
                2.0
            } else {
                -1.0
            }
        })
        .collect();
    let x_star: Vec<f64> = target.iter().map(|&t| t.clamp(0.0, 1.0)).collect();
    // Every entry of T sits at distance 1 from the box.
    let f_star = 0.5 * dim as f64;
    let set = FeasibleSet::boxed(vec![0.0; dim], vec![1.0; dim])?;
    let instance = ProblemInstance::quadratic_distance(target, set, Some(f_star))?;
    Ok(GeneratedProblem {
        instance,
        x0: vec![0.5; dim],
        x_star: Some(x_star),
        id: format!("boxqp-n{n}"),
    })
}

pub fn generate(kind: ProblemKind, seed: u64) -> Result<GeneratedProblem, Error> {
    match kind {
        ProblemKind::Prob1 { n, m, c } => {
            let (instance, x0) = gen_problem1(n, m, c, seed)?;
            Ok(GeneratedProblem {
                instance,
                x0,
                x_star: None,
                id: format!("prob1-n{n}-m{m}-c{c}-s{seed}"),
            })
        }
        ProblemKind::Prob2 { n, m, c } => {
            let (instance, x0) = gen_problem2(n, m, c, seed)?;
            Ok(GeneratedProblem {
                instance,
                x0,
                x_star: None,
                id: format!("prob2-n{n}-m{m}-c{c}-s{seed}"),
            })
        }
        ProblemKind::BoxQp { n } => gen_boxqp(n),
    }
}

/// One row of the sweep summary table.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub instance_id: String,
    pub strategy: String,
    pub mode_param: f64,
    pub status: String,
    pub outer_iters: u64,
    pub f_evals: u64,
    pub proj_work: u64,
    pub wall_time_s: f64,
    pub f_final: f64,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub problem: ProblemKind,
    pub seeds: Vec<u64>,
    pub modes: Vec<ProjectionMode>,
    pub strategies: Vec<LineSearchStrategy>,
    pub base: SolverConfig,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), Error> {
        match self.problem {
            ProblemKind::Prob1 { n, m, .. } | ProblemKind::Prob2 { n, m, .. } if m < n => {
                return Err(Error::InvalidInput(format!("need m >= n, got m={m} n={n}")))
            }
            _ => {}
        }
        let mut seen = std::collections::HashSet::new();
        for &s in &self.seeds {
            if !seen.insert(s) {
                return Err(Error::InvalidInput(format!("duplicate seed {s}")));
            }
        }
        if self.seeds.is_empty() || self.modes.is_empty() || self.strategies.is_empty() {
            return Err(Error::InvalidInput(
                "sweep needs at least one seed, mode, and strategy".into(),
            ));
        }
        Ok(())
    }
}

pub struct SweepRun {
    pub run_id: String,
    pub summary: RunSummary,
    pub records: Vec<IterationRecord>,
}

pub struct SweepOutput {
    pub runs: Vec<SweepRun>,
}

impl SweepOutput {
    pub fn summaries(&self) -> Vec<RunSummary> {
        self.runs.iter().map(|r| r.summary.clone()).collect()
    }

    /// Mean of a per-run metric grouped by mode parameter, sorted by the
    /// parameter value.
    pub fn mean_by_mode<F: Fn(&RunSummary) -> f64>(&self, metric: F) -> Vec<(f64, f64)> {
        let mut groups: Vec<(f64, f64, u64)> = Vec::new();
        for run in &self.runs {
            let key = run.summary.mode_param;
            match groups.iter_mut().find(|(k, _, _)| *k == key) {
                Some((_, sum, count)) => {
                    *sum += metric(&run.summary);
                    *count += 1;
                }
                None => groups.push((key, metric(&run.summary), 1)),
            }
        }
        groups.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        groups
            .into_iter()
            .map(|(k, sum, count)| (k, sum / count as f64))
            .collect()
    }
}

/// Cartesian product of instances × modes × strategies, solved sequentially
/// in a deterministic order. Individual failures are recorded in the status
/// column; the sweep continues.
pub fn run_sweep(spec: &BenchSpec) -> Result<SweepOutput, Error> {
    spec.validate()?;
    let mut runs = Vec::new();
    for (idx, &seed) in spec.seeds.iter().enumerate() {
        let instance_seed = stream_seed(seed, idx as u64);
        let gen = generate(spec.problem, instance_seed)?;
        for &mode in &spec.modes {
            for &strategy in &spec.strategies {
                let config = SolverConfig {
                    mode,
                    strategy,
                    seed,
                    ..spec.base.clone()
                };
                let start = Instant::now();
                let result = solve(&gen.instance, &gen.x0, &config);
                let wall = start.elapsed().as_secs_f64();
                let run_id = format!(
                    "{}-{}-{}",
                    gen.id,
                    strategy.name(),
                    format_mode(mode)
                );
                runs.push(SweepRun {
                    run_id,
                    summary: RunSummary {
                        instance_id: gen.id.clone(),
                        strategy: strategy.name().to_string(),
                        mode_param: mode.parameter(),
                        status: result.status.as_str().to_string(),
                        outer_iters: result.records.len() as u64,
                        f_evals: result.total_f_evals,
                        proj_work: result.total_proj_work,
                        wall_time_s: wall,
                        f_final: result.f_final,
                    },
                    records: result.records,
                });
            }
        }
    }
    Ok(SweepOutput { runs })
}

fn format_mode(mode: ProjectionMode) -> String {
    match mode {
        ProjectionMode::PType { zeta } => format!("z{zeta}"),
        ProjectionMode::RType { gamma } => format!("g{gamma}"),
    }
}
