//! Performance profiles: cumulative distributions of per-problem cost
//! ratios against the best variant.

use crate::bench::RunSummary;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileMetric {
    FEvals,
    OuterIters,
    ProjWork,
    WallTime,
}

impl ProfileMetric {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "f_evals" => Ok(ProfileMetric::FEvals),
            "outer_iters" => Ok(ProfileMetric::OuterIters),
            "proj_work" => Ok(ProfileMetric::ProjWork),
            "wall_time" => Ok(ProfileMetric::WallTime),
            other => Err(Error::InvalidInput(format!(
                "unknown metric '{other}' (expected f_evals|outer_iters|proj_work|wall_time)"
            ))),
        }
    }

    fn cost(&self, s: &RunSummary) -> f64 {
        if s.status != "converged" {
            return f64::INFINITY;
        }
        match self {
            ProfileMetric::FEvals => s.f_evals as f64,
            ProfileMetric::OuterIters => s.outer_iters as f64,
            ProfileMetric::ProjWork => s.proj_work as f64,
            ProfileMetric::WallTime => s.wall_time_s,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerformanceProfile {
    pub thetas: Vec<f64>,
    pub variants: Vec<String>,
    /// rho[variant][theta index].
    pub rho: Vec<Vec<f64>>,
}

impl PerformanceProfile {
    /// Fraction of problems variant `v` solves within ratio `theta`.
    pub fn rho_at(&self, variant: &str, theta: f64) -> Option<f64> {
        let v = self.variants.iter().position(|s| s == variant)?;
        // Step function: the last grid value at or below theta.
        let mut out = 0.0;
        for (t, r) in self.thetas.iter().zip(&self.rho[v]) {
            if *t <= theta + 1e-12 {
                out = *r;
            }
        }
        Some(out)
    }
}

fn variant_label(s: &RunSummary, single_mode: bool) -> String {
    if single_mode {
        s.strategy.clone()
    } else {
        format!("{}-{}", s.strategy, s.mode_param)
    }
}

/// Build the profile table over a log-spaced ratio grid. Failed runs count
/// as infinitely expensive; problems no variant solved contribute zero
/// everywhere.
pub fn performance_profile(
    summaries: &[RunSummary],
    metric: ProfileMetric,
    num_points: usize,
) -> Result<PerformanceProfile, Error> {
    if summaries.is_empty() {
        return Err(Error::InvalidInput("no summaries to profile".into()));
    }
    let mode_params: Vec<f64> = summaries.iter().map(|s| s.mode_param).collect();
    let single_mode = mode_params
        .iter()
        .all(|&p| p == mode_params[0]);

    let mut variants: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for s in summaries {
        let v = variant_label(s, single_mode);
        if !variants.contains(&v) {
            variants.push(v);
        }
        if !problems.contains(&s.instance_id) {
            problems.push(s.instance_id.clone());
        }
    }

    // cost[variant][problem]
    let mut cost = vec![vec![f64::INFINITY; problems.len()]; variants.len()];
    for s in summaries {
        let v = variants
            .iter()
            .position(|x| *x == variant_label(s, single_mode))
            .unwrap();
        let p = problems.iter().position(|x| *x == s.instance_id).unwrap();
        cost[v][p] = cost[v][p].min(metric.cost(s));
    }

    // Ratios to the per-problem best.
    let mut ratios = vec![vec![f64::INFINITY; problems.len()]; variants.len()];
    let mut max_ratio = 1.0f64;
    for p in 0..problems.len() {
        let best = (0..variants.len())
            .map(|v| cost[v][p])
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() || best <= 0.0 {
            // Either nobody solved it, or zero cost: ratio 1 for zero-cost
            // winners, inf for the rest.
            for v in 0..variants.len() {
                ratios[v][p] = if cost[v][p] == best { 1.0 } else { f64::INFINITY };
            }
            continue;
        }
        for v in 0..variants.len() {
            let r = cost[v][p] / best;
            ratios[v][p] = r;
            if r.is_finite() {
                max_ratio = max_ratio.max(r);
            }
        }
    }

    let points = num_points.max(2);
    let mut thetas = Vec::with_capacity(points);
    if max_ratio <= 1.0 {
        thetas.push(1.0);
    } else {
        let log_max = max_ratio.ln();
        for i in 0..points {
            let t = (log_max * i as f64 / (points - 1) as f64).exp();
            thetas.push(t);
        }
        // Guard against rounding shaving the endpoint.
        *thetas.last_mut().unwrap() = max_ratio;
    }

    let n_problems = problems.len() as f64;
    let rho: Vec<Vec<f64>> = (0..variants.len())
        .map(|v| {
            thetas
                .iter()
                .map(|&t| {
                    ratios[v]
                        .iter()
                        .filter(|&&r| r <= t * (1.0 + 1e-12))
                        .count() as f64
                        / n_problems
                })
                .collect()
        })
        .collect();

    Ok(PerformanceProfile {
        thetas,
        variants,
        rho,
    })
}
