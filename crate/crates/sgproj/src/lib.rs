//! Scaled gradient projection with certified inexact projections.
//!
//! This crate solves min f(x) over a closed convex set using spectral
//! gradient steps, non-monotone backtracking, and projections that are
//! allowed to be inexact as long as they come with a relative-error
//! certificate:
//!
//! - a cyclic corrected-projection engine ([`dykstra`]) over intersections
//!   of cones, which certifies a bound on the distance to the (unknown)
//!   exact projection through a dual lower bound;
//! - a conditional-gradient engine ([`frank_wolfe`]) over compact sets with
//!   a linear oracle, which certifies a relaxed variational inequality;
//! - verifiers ([`certificate`]) that re-check both certificate kinds
//!   against trusted references or witness sets.
//!
//! The solver ([`solver`]) consumes either engine, records per-iteration
//! telemetry, and [`bounds`] re-checks the recorded run against the
//! method's theoretical guarantees. The [`bench`] and [`profile`] modules
//! generate random benchmark instances, sweep forcing parameters and line
//! search strategies, and tabulate performance profiles; `csvio` fixes the
//! on-disk formats. Everything is deterministic for a fixed seed.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `sgproj` binary for the batch interface.

use std::path::PathBuf;

pub mod bench;
pub mod bounds;
pub mod certificate;
pub mod csvio;
pub mod dykstra;
pub mod eig;
pub mod frank_wolfe;
pub mod linalg;
pub mod linesearch;
pub mod model;
pub mod profile;
pub mod rng;
pub mod scaling;
pub mod sets;
pub mod solver;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("line search failed: {0}")]
    LineSearch(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub use bench::{gen_boxqp, gen_problem1, gen_problem2, run_sweep, BenchSpec, ProblemKind, RunSummary};
pub use bounds::{check_theoretical_bounds, BoundCheckInputs, BoundReport, CheckStatus};
pub use certificate::{verify_p_certificate, verify_r_certificate, ProjectionCertificate, ProjectionWork};
pub use dykstra::{dykstra_exact, dykstra_lower_bound, dykstra_project};
pub use frank_wolfe::frank_wolfe_project;
pub use linesearch::{
    advance_state, armijo_condition, backtrack, delta_min_of, LineSearchStrategy, NonMonotoneState,
};
pub use model::{estimate_lipschitz_ls, gradient_fd_check, LsRosenbrock, ProblemInstance};
pub use profile::{performance_profile, PerformanceProfile, ProfileMetric};
pub use scaling::{clip_to_dmu, ScalingMatrix};
pub use sets::{
    exact_project_box, exact_project_sdd_row, exact_project_spectrahedron, lo_oracle,
    project_simplex, FeasibleSet,
};
pub use solver::{
    bb_step, initial_alpha, solve, stationarity_measure, tau_min_bound, IterationRecord,
    ProjectionMode, SolveResult, SolveStatus, SolverConfig,
};
