//! Optimization problem abstraction and the benchmark objective: a matrix
//! least-squares term coupled with a Rosenbrock-type penalty on the diagonal.

use crate::linalg::{self, Mat};
use crate::sets::FeasibleSet;
use crate::Error;

/// f(X) = ½‖AX−B‖²_F + Σ_{i=1}^{n−1} [ c(X_{i+1,i+1} − X_{i,i}²)² + (1 − X_{i,i})² ]
///
/// A and B are m×n with m ≥ n; X ranges over n×n matrices with the Frobenius
/// inner product. The Rosenbrock coupling acts on the diagonal only. Setting
/// c = 0 selects the pure least-squares objective (the whole coupling sum is
/// dropped), which is the globally Lipschitz configuration.
#[derive(Clone, Debug)]
pub struct LsRosenbrock {
    a: Mat,
    b: Mat,
    c: f64,
}

impl LsRosenbrock {
    pub fn new(a: Mat, b: Mat, c: f64) -> Result<Self, Error> {
        if a.rows != b.rows || a.cols != b.cols {
            return Err(Error::Shape(format!(
                "A is {}x{} but B is {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        if a.rows < a.cols {
            return Err(Error::InvalidInput(format!(
                "need m >= n, got m={} n={}",
                a.rows, a.cols
            )));
        }
        if c < 0.0 {
            return Err(Error::InvalidInput(format!(
                "coupling coefficient must be nonnegative, got {c}"
            )));
        }
        Ok(LsRosenbrock { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.cols
    }

    pub fn m(&self) -> usize {
        self.a.rows
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn coupling(&self) -> f64 {
        self.c
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, Error> {
        let n = self.n();
        let r = {
            let mut ax = self.a.mul_point(x)?;
            for (ri, bi) in ax.iter_mut().zip(&self.b.data) {
                *ri -= bi;
            }
            ax
        };
        let mut f = 0.5 * linalg::norm_sq(&r);
        if self.c > 0.0 {
            for i in 0..n - 1 {
                let xi = x[i * n + i];
                let xj = x[(i + 1) * n + (i + 1)];
                let t = xj - xi * xi;
                f += self.c * t * t + (1.0 - xi) * (1.0 - xi);
            }
        }
        Ok(f)
    }

    /// Analytic gradient: Aᵀ(AX−B) plus the diagonal coupling terms.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        let n = self.n();
        let r = {
            let mut ax = self.a.mul_point(x)?;
            for (ri, bi) in ax.iter_mut().zip(&self.b.data) {
                *ri -= bi;
            }
            ax
        };
        let mut g = self.a.tr_mul_point(&r, n);
        if self.c > 0.0 {
            for i in 0..n - 1 {
                let xi = x[i * n + i];
                let xj = x[(i + 1) * n + (i + 1)];
                let t = xj - xi * xi;
                g[i * n + i] += -4.0 * self.c * xi * t - 2.0 * (1.0 - xi);
                g[(i + 1) * n + (i + 1)] += 2.0 * self.c * t;
            }
        }
        Ok(g)
    }
}

/// A Lipschitz constant for the gradient of the pure least-squares objective
/// (c = 0): the largest eigenvalue of AᵀA, computed by power iteration to
/// relative tolerance 1e-10. The coupled objective has no global constant, so
/// a nonzero coupling is rejected.
pub fn estimate_lipschitz_ls(p: &LsRosenbrock) -> Result<f64, Error> {
    if p.c != 0.0 {
        return Err(Error::Unsupported(format!(
            "gradient is not globally Lipschitz with coupling c={}",
            p.c
        )));
    }
    Ok(linalg::largest_eigenvalue_gram(&p.a, 1e-10))
}

type ObjFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A constrained problem: objective and gradient evaluators over a flat
/// ambient space, a feasible set, and an optional known optimal value.
/// Instances are immutable and shareable across concurrent solver runs.
pub struct ProblemInstance {
    dim: usize,
    objective: Box<ObjFn>,
    gradient: Box<GradFn>,
    pub feasible_set: FeasibleSet,
    pub f_star: Option<f64>,
}

impl ProblemInstance {
    pub fn new(
        dim: usize,
        objective: Box<ObjFn>,
        gradient: Box<GradFn>,
        feasible_set: FeasibleSet,
        f_star: Option<f64>,
    ) -> Result<Self, Error> {
        if feasible_set.dim() != dim {
            return Err(Error::Shape(format!(
                "feasible set lives in dimension {}, problem in {}",
                feasible_set.dim(),
                dim
            )));
        }
        Ok(ProblemInstance {
            dim,
            objective,
            gradient,
            feasible_set,
            f_star,
        })
    }

    pub fn from_ls_rosenbrock(
        p: LsRosenbrock,
        feasible_set: FeasibleSet,
        f_star: Option<f64>,
    ) -> Result<Self, Error> {
        let dim = p.n() * p.n();
        let p2 = p.clone();
        Self::new(
            dim,
            Box::new(move |x| p.value(x).expect("shape checked at construction")),
            Box::new(move |x| p2.gradient(x).expect("shape checked at construction")),
            feasible_set,
            f_star,
        )
    }

    /// ½‖x − target‖² with identity Hessian; the constrained minimizer over a
    /// box is the clamped target.
    pub fn quadratic_distance(
        target: Vec<f64>,
        feasible_set: FeasibleSet,
        f_star: Option<f64>,
    ) -> Result<Self, Error> {
        let dim = target.len();
        let t2 = target.clone();
        Self::new(
            dim,
            Box::new(move |x| 0.5 * linalg::norm_sq(&linalg::sub(x, &target))),
            Box::new(move |x| linalg::sub(x, &t2)),
            feasible_set,
            f_star,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.objective)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (self.gradient)(x)
    }
}

/// Max over coordinates of |analytic − central difference| / (1 + |analytic|)
/// with step h.
pub fn gradient_fd_check(p: &ProblemInstance, x: &[f64], h: f64) -> f64 {
    assert!(h > 0.0, "finite-difference step must be positive");
    let g = p.gradient(x);
    let mut xp = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        let orig = xp[i];
        xp[i] = orig + h;
        let fp = p.objective(&xp);
        xp[i] = orig - h;
        let fm = p.objective(&xp);
        xp[i] = orig;
        let fd = (fp - fm) / (2.0 * h);
        let rel = (g[i] - fd).abs() / (1.0 + g[i].abs());
        worst = worst.max(rel);
    }
    worst
}

/// Step size for the finite-difference contract: h = 1e-5 · (1 + ‖X‖_F).
pub fn fd_step(x: &[f64]) -> f64 {
    1e-5 * (1.0 + linalg::norm(x))
}
