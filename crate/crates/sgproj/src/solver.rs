//! Projected spectral gradient driver with certified inexact projections and
//! non-monotone backtracking.
//!
//! Each iteration scales the gradient, forms the pre-point
//! z = x − α D⁻¹ ∇f(x), asks a projection engine for a certified inexact
//! projection w of z relative to x, stops once max|x − w| falls below the
//! tolerance, and otherwise backtracks along d = w − x. The spectral step α
//! comes from the previous iterate/gradient displacement pair, clamped to
//! [α_min, α_max]. Runs are deterministic: identical configuration and seed
//! reproduce the record stream bit for bit.

use crate::certificate::{ProjectionCertificate, ProjectionWork};
use crate::dykstra::{dykstra_project, DykstraError};
use crate::frank_wolfe::{frank_wolfe_project, FrankWolfeError};
use crate::linalg;
use crate::linesearch::{advance_state, backtrack, LineSearchStrategy, NonMonotoneState};
use crate::model::ProblemInstance;
use crate::scaling::ScalingMatrix;
use crate::sets::FeasibleSet;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectionMode {
    /// Distance-certified projections (cyclic engine or wrapped exact
    /// oracles); ζ ∈ (0, 1].
    PType { zeta: f64 },
    /// Variational-inequality-certified projections (conditional-gradient
    /// engine or wrapped exact oracles); γ ∈ [0, ½).
    RType { gamma: f64 },
}

impl ProjectionMode {
    pub fn parameter(&self) -> f64 {
        match self {
            ProjectionMode::PType { zeta } => *zeta,
            ProjectionMode::RType { gamma } => *gamma,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub sigma: f64,
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub mu: f64,
    pub mode: ProjectionMode,
    pub strategy: LineSearchStrategy,
    pub tol: f64,
    pub max_iter: u64,
    pub seed: u64,
    /// Cycle budget per projection (cyclic engine).
    pub dykstra_max_cycles: u64,
    /// Oracle-call budget per projection (conditional-gradient engine).
    pub fw_max_iters: u64,
    /// Optional cumulative projection-work budget for the whole run; the
    /// run fails with ProjectionFailure once exhausted.
    pub proj_work_budget: Option<u64>,
    /// Keep the full iterate trajectory (needed by some bound checks).
    pub record_trajectory: bool,
    /// Scaling matrix D_k, fixed over the run. Identity by default.
    pub scaling: ScalingMatrix,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sigma: 1e-4,
            omega_lo: 0.1,
            omega_hi: 0.9,
            alpha_min: 1e-10,
            alpha_max: 1e10,
            mu: 1.0,
            mode: ProjectionMode::PType { zeta: 0.8 },
            strategy: LineSearchStrategy::Armijo,
            tol: 1e-6,
            max_iter: 20_000,
            seed: 0,
            dykstra_max_cycles: 200_000,
            fw_max_iters: 100_000,
            proj_work_budget: None,
            record_trajectory: false,
            scaling: ScalingMatrix::identity(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(0.0 < self.sigma && self.sigma < 1.0) {
            return Err(Error::InvalidInput("sigma must lie in (0,1)".into()));
        }
        if !(0.0 < self.omega_lo && self.omega_lo < self.omega_hi && self.omega_hi < 1.0) {
            return Err(Error::InvalidInput(
                "need 0 < omega_lo < omega_hi < 1".into(),
            ));
        }
        if !(0.0 < self.alpha_min && self.alpha_min <= self.alpha_max) {
            return Err(Error::InvalidInput(
                "need 0 < alpha_min <= alpha_max".into(),
            ));
        }
        if self.mu < 1.0 {
            return Err(Error::InvalidInput("mu must be at least 1".into()));
        }
        match self.mode {
            ProjectionMode::PType { zeta } => {
                if !(0.0 < zeta && zeta <= 1.0) {
                    return Err(Error::InvalidInput("zeta must lie in (0,1]".into()));
                }
            }
            ProjectionMode::RType { gamma } => {
                if !(0.0 <= gamma && gamma < 0.5) {
                    return Err(Error::InvalidInput("gamma must lie in [0,1/2)".into()));
                }
            }
        }
        if let LineSearchStrategy::AverageType { eta } = self.strategy {
            if !(0.0..1.0).contains(&eta) {
                return Err(Error::InvalidInput("eta must lie in [0,1)".into()));
            }
        }
        Ok(())
    }
}

/// Per-iteration telemetry. `f` and `nu` are the values at the start of
/// iteration k, `tau`/`alpha` the step sizes used, `proj_work` the cost of
/// the iteration's projection, `f_evals` the cumulative objective
/// evaluation count, and `stat_measure` = max|x − w|.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub k: u64,
    pub f: f64,
    pub nu: f64,
    pub tau: f64,
    pub alpha: f64,
    pub proj_work: u64,
    pub f_evals: u64,
    pub stat_measure: f64,
    /// Euclidean length of w − x, used by the complexity bound checks.
    pub dist_wx: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIter,
    LineSearchFailure,
    ProjectionFailure,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::LineSearchFailure => "line_search_failure",
            SolveStatus::ProjectionFailure => "projection_failure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub x_final: Vec<f64>,
    /// Objective value at the final iterate.
    pub f_final: f64,
    pub records: Vec<IterationRecord>,
    pub x0: Vec<f64>,
    /// Objective evaluations including rejected trials.
    pub total_f_evals: u64,
    /// Projection work including failed attempts.
    pub total_proj_work: u64,
    /// Present when the configuration asked for it.
    pub trajectory: Option<Vec<Vec<f64>>>,
    /// Human-readable diagnostics for failure statuses.
    pub failure_detail: Option<String>,
}

/// Spectral step from the displacement pair: ⟨s,s⟩/⟨s,y⟩ clamped into
/// [alpha_min, alpha_max] when the curvature ⟨s,y⟩ is positive, alpha_max
/// otherwise.
pub fn bb_step(s: &[f64], y: &[f64], alpha_min: f64, alpha_max: f64) -> f64 {
    let sy = linalg::dot(s, y);
    if sy > 0.0 {
        (linalg::norm_sq(s) / sy).clamp(alpha_min, alpha_max)
    } else {
        alpha_max
    }
}

/// α₀ = min(α_max, max(α_min, 1/‖g₀‖)); a zero gradient yields α_max.
pub fn initial_alpha(g0: &[f64], alpha_min: f64, alpha_max: f64) -> f64 {
    let n = linalg::norm(g0);
    if n == 0.0 {
        alpha_max
    } else {
        (1.0 / n).clamp(alpha_min, alpha_max)
    }
}

/// max_{i}|x_i − w_i|, the convergence measure.
pub fn stationarity_measure(x: &[f64], w: &[f64]) -> f64 {
    assert_eq!(x.len(), w.len(), "stationarity measure shape mismatch");
    linalg::max_abs_diff(x, w)
}

/// Lower bound on every accepted step size once the gradient is Lipschitz:
/// min{1, ω_lo(1−σ)/(α_max μ L)}.
pub fn tau_min_bound(lipschitz: f64, sigma: f64, omega_lo: f64, alpha_max: f64, mu: f64) -> f64 {
    assert!(lipschitz > 0.0);
    (omega_lo * (1.0 - sigma) / (alpha_max * mu * lipschitz)).min(1.0)
}

enum Engine {
    Cyclic { zeta: f64 },
    ConditionalGradient { gamma: f64 },
    Exact,
}

fn pick_engine(set: &FeasibleSet, mode: ProjectionMode) -> Result<Engine, Error> {
    match (set, mode) {
        (FeasibleSet::SddPlusBox { .. }, ProjectionMode::PType { zeta }) => {
            Ok(Engine::Cyclic { zeta })
        }
        (FeasibleSet::HalfspaceIntersection { .. }, ProjectionMode::PType { zeta }) => {
            Ok(Engine::Cyclic { zeta })
        }
        (FeasibleSet::Simplex { .. }, ProjectionMode::RType { gamma })
        | (FeasibleSet::Spectrahedron { .. }, ProjectionMode::RType { gamma }) => {
            Ok(Engine::ConditionalGradient { gamma })
        }
        // Cheap closed-form oracles are wrapped as trivially certified
        // projections in either mode.
        (FeasibleSet::Box { .. }, _)
        | (FeasibleSet::Simplex { .. }, ProjectionMode::PType { .. })
        | (FeasibleSet::Spectrahedron { .. }, ProjectionMode::PType { .. }) => Ok(Engine::Exact),
        (FeasibleSet::SddPlusBox { .. }, ProjectionMode::RType { .. })
        | (FeasibleSet::HalfspaceIntersection { .. }, ProjectionMode::RType { .. }) => {
            Err(Error::Unsupported(
                "no linear oracle for this set; use the distance-certified mode".into(),
            ))
        }
    }
}

struct ProjectionStep {
    w: Vec<f64>,
    work: ProjectionWork,
    #[allow(dead_code)]
    certificate: ProjectionCertificate,
}

enum ProjectionFailureKind {
    Budget(String),
    Config(String),
}

fn project_step(
    engine: &Engine,
    set: &FeasibleSet,
    v: &[f64],
    u: &[f64],
    config: &SolverConfig,
    work_left: Option<u64>,
) -> Result<ProjectionStep, ProjectionFailureKind> {
    match engine {
        Engine::Cyclic { zeta } => {
            let budget = work_left
                .map_or(config.dykstra_max_cycles, |b| b.min(config.dykstra_max_cycles))
                .max(1);
            match dykstra_project(set, v, u, *zeta, &config.scaling, budget) {
                Ok(out) => Ok(ProjectionStep {
                    w: out.w,
                    work: *out.certificate.work(),
                    certificate: out.certificate,
                }),
                Err(DykstraError::NoCertificate(f)) => {
                    if f.last_movement < 1e-12 {
                        // The cycle has numerically settled: the iterate is an
                        // exact projection to machine precision and certifies
                        // trivially.
                        let work = ProjectionWork {
                            cycles: f.cycles,
                            ..Default::default()
                        };
                        let u_dist = linalg::norm_sq(&linalg::sub(u, v));
                        let lhs = linalg::norm_sq(&linalg::sub(&f.best, v));
                        Ok(ProjectionStep {
                            w: f.best,
                            work,
                            certificate: ProjectionCertificate::PType {
                                zeta: *zeta,
                                c_lower: lhs,
                                lhs,
                                rhs: zeta * lhs + (1.0 - zeta) * u_dist,
                                work,
                            },
                        })
                    } else {
                        Err(ProjectionFailureKind::Budget(f.to_string()))
                    }
                }
                Err(DykstraError::Unsupported(e)) => {
                    Err(ProjectionFailureKind::Config(e.to_string()))
                }
            }
        }
        Engine::ConditionalGradient { gamma } => {
            let budget = work_left
                .map_or(config.fw_max_iters, |b| b.min(config.fw_max_iters))
                .max(1);
            match frank_wolfe_project(set, v, u, *gamma, &config.scaling, None, budget) {
                Ok(out) => Ok(ProjectionStep {
                    w: out.w,
                    work: *out.certificate.work(),
                    certificate: out.certificate,
                }),
                Err(FrankWolfeError::NoCertificate(f)) => {
                    Err(ProjectionFailureKind::Budget(f.to_string()))
                }
                Err(FrankWolfeError::Unsupported(e)) => {
                    Err(ProjectionFailureKind::Config(e.to_string()))
                }
            }
        }
        Engine::Exact => {
            let w = set
                .exact_project(v)
                .map_err(|e| ProjectionFailureKind::Config(e.to_string()))?;
            // A full spectral decomposition costs n eigenpairs; clamp-style
            // oracles are free.
            let work = match set {
                FeasibleSet::Spectrahedron { n } => ProjectionWork {
                    eigenpairs: *n as u64,
                    ..Default::default()
                },
                _ => ProjectionWork::default(),
            };
            let d = &config.scaling;
            let certificate = match config.mode {
                ProjectionMode::PType { zeta } => {
                    let lhs = d.d_norm_sq(&linalg::sub(&w, v));
                    ProjectionCertificate::PType {
                        zeta,
                        c_lower: lhs,
                        lhs,
                        rhs: zeta * lhs + (1.0 - zeta) * d.d_norm_sq(&linalg::sub(u, v)),
                        work,
                    }
                }
                ProjectionMode::RType { gamma } => ProjectionCertificate::RType {
                    gamma,
                    s_star: 0.0,
                    threshold: gamma * d.d_norm_sq(&linalg::sub(&w, u)),
                    work,
                },
            };
            Ok(ProjectionStep {
                w,
                work,
                certificate,
            })
        }
    }
}

/// Run the solver from the feasible point x0.
pub fn solve(problem: &ProblemInstance, x0: &[f64], config: &SolverConfig) -> SolveResult {
    config.validate().expect("invalid solver configuration");
    assert_eq!(x0.len(), problem.dim(), "x0 dimension mismatch");

    let set = &problem.feasible_set;
    let engine = match pick_engine(set, config.mode) {
        Ok(e) => e,
        Err(e) => {
            return SolveResult {
                status: SolveStatus::ProjectionFailure,
                x_final: x0.to_vec(),
                f_final: problem.objective(x0),
                records: Vec::new(),
                x0: x0.to_vec(),
                total_f_evals: 1,
                total_proj_work: 0,
                trajectory: None,
                failure_detail: Some(e.to_string()),
            }
        }
    };

    let mut x = x0.to_vec();
    let mut f = problem.objective(&x);
    let mut f_evals: u64 = 1;
    let mut g = problem.gradient(&x);
    let mut state = NonMonotoneState::new(config.strategy, f);
    let mut alpha = initial_alpha(&g, config.alpha_min, config.alpha_max);
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut trajectory = config.record_trajectory.then(|| vec![x.clone()]);
    let mut total_proj_work: u64 = 0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // (x, g) of previous iterate

    let finish = |status: SolveStatus,
                  x: Vec<f64>,
                  f_final: f64,
                  records: Vec<IterationRecord>,
                  f_evals: u64,
                  total_proj_work: u64,
                  trajectory: Option<Vec<Vec<f64>>>,
                  detail: Option<String>| SolveResult {
        status,
        x_final: x,
        f_final,
        records,
        x0: x0.to_vec(),
        total_f_evals: f_evals,
        total_proj_work,
        trajectory,
        failure_detail: detail,
    };

    for k in 0..config.max_iter {
        if let Some((px, pg)) = &prev {
            let s = linalg::sub(&x, px);
            let y = linalg::sub(&g, pg);
            alpha = bb_step(&s, &y, config.alpha_min, config.alpha_max);
        }

        let scaled = config.scaling.apply_inverse(&g);
        let mut z = x.clone();
        linalg::axpy(-alpha, &scaled, &mut z);

        let work_left = config
            .proj_work_budget
            .map(|b| b.saturating_sub(total_proj_work));
        if work_left == Some(0) {
            return finish(
                SolveStatus::ProjectionFailure,
                x,
                f,
                records,
                f_evals,
                total_proj_work,
                trajectory,
                Some("projection work budget exhausted".into()),
            );
        }
        let step = match project_step(&engine, set, &z, &x, config, work_left) {
            Ok(s) => s,
            Err(kind) => {
                let (detail, extra_work) = match kind {
                    ProjectionFailureKind::Budget(d) => {
                        // Count the work burned by the failed attempt.
                        let spent = work_left.map_or(
                            match engine {
                                Engine::Cyclic { .. } => config.dykstra_max_cycles,
                                Engine::ConditionalGradient { .. } => config.fw_max_iters,
                                Engine::Exact => 0,
                            },
                            |b| {
                                b.min(match engine {
                                    Engine::Cyclic { .. } => config.dykstra_max_cycles,
                                    Engine::ConditionalGradient { .. } => config.fw_max_iters,
                                    Engine::Exact => 0,
                                })
                            },
                        );
                        (d, spent)
                    }
                    ProjectionFailureKind::Config(d) => (d, 0),
                };
                return finish(
                    SolveStatus::ProjectionFailure,
                    x,
                    f,
                    records,
                    f_evals,
                    total_proj_work + extra_work,
                    trajectory,
                    Some(detail),
                );
            }
        };
        let w = step.w;
        total_proj_work += step.work.units();

        let stat = stationarity_measure(&x, &w);
        let dist_wx = linalg::norm(&linalg::sub(&w, &x));

        if stat <= config.tol {
            records.push(IterationRecord {
                k,
                f,
                nu: state.nu,
                tau: 1.0,
                alpha,
                proj_work: step.work.units(),
                f_evals,
                stat_measure: stat,
                dist_wx,
            });
            return finish(
                SolveStatus::Converged,
                x,
                f,
                records,
                f_evals,
                total_proj_work,
                trajectory,
                None,
            );
        }

        let d = linalg::sub(&w, &x);
        let slope = linalg::dot(&g, &d);
        if slope >= 0.0 {
            return finish(
                SolveStatus::LineSearchFailure,
                x,
                f,
                records,
                f_evals,
                total_proj_work,
                trajectory,
                Some(format!(
                    "certified projection produced a non-descent direction (slope {slope:.3e})"
                )),
            );
        }

        let bt = match backtrack(
            |t| {
                let mut xt = x.clone();
                linalg::axpy(t, &d, &mut xt);
                problem.objective(&xt)
            },
            f,
            slope,
            config.sigma,
            state.nu,
            config.omega_lo,
            config.omega_hi,
        ) {
            Ok(b) => b,
            Err(e) => {
                return finish(
                    SolveStatus::LineSearchFailure,
                    x,
                    f,
                    records,
                    f_evals,
                    total_proj_work,
                    trajectory,
                    Some(e.to_string()),
                )
            }
        };
        f_evals += bt.evals;

        records.push(IterationRecord {
            k,
            f,
            nu: state.nu,
            tau: bt.tau,
            alpha,
            proj_work: step.work.units(),
            f_evals,
            stat_measure: stat,
            dist_wx,
        });

        let mut x_next = x.clone();
        linalg::axpy(bt.tau, &d, &mut x_next);
        state = advance_state(config.strategy, &state, f, bt.f_new);
        prev = Some((std::mem::replace(&mut x, x_next), std::mem::take(&mut g)));
        f = bt.f_new;
        g = problem.gradient(&x);
        if let Some(t) = trajectory.as_mut() {
            t.push(x.clone());
        }
    }

    finish(
        SolveStatus::MaxIter,
        x,
        f,
        records,
        f_evals,
        total_proj_work,
        trajectory,
        None,
    )
}
