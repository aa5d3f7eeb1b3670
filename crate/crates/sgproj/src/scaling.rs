//! Scaling matrices with spectrum confined to [1/μ, μ], and the norm and
//! inner product they induce.
//!
//! The identity fast path is mandatory: benchmark runs scale with μ = 1, so
//! every identity-kind operation must cost no more than its Euclidean
//! counterpart. Dense scaling exists for property tests and is constructed
//! through eigenvalue clipping.

use crate::eig::{assemble, jacobi_eigh};
use crate::linalg::{self, Mat};
use crate::Error;

#[derive(Clone, Debug)]
enum Kind {
    Identity,
    Dense { m: Mat, chol: Mat },
}

#[derive(Clone, Debug)]
pub struct ScalingMatrix {
    kind: Kind,
    mu: f64,
}

impl ScalingMatrix {
    pub fn identity() -> Self {
        ScalingMatrix {
            kind: Kind::Identity,
            mu: 1.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Dense matrix view; None for the identity kind.
    pub fn dense(&self) -> Option<&Mat> {
        match &self.kind {
            Kind::Identity => None,
            Kind::Dense { m, .. } => Some(m),
        }
    }

    /// ‖d‖_D = √⟨Dd, d⟩.
    pub fn d_norm(&self, d: &[f64]) -> f64 {
        self.d_norm_sq(d).max(0.0).sqrt()
    }

    pub fn d_norm_sq(&self, d: &[f64]) -> f64 {
        match &self.kind {
            Kind::Identity => linalg::norm_sq(d),
            Kind::Dense { m, .. } => quad_form(m, d, d),
        }
    }

    /// ⟨Da, b⟩.
    pub fn d_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        match &self.kind {
            Kind::Identity => linalg::dot(a, b),
            Kind::Dense { m, .. } => quad_form(m, a, b),
        }
    }

    /// D⁻¹ g. The identity kind returns g unchanged.
    pub fn apply_inverse(&self, g: &[f64]) -> Vec<f64> {
        match &self.kind {
            Kind::Identity => g.to_vec(),
            Kind::Dense { chol, .. } => linalg::cholesky_solve(chol, g),
        }
    }

    /// D g, for residual checks.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        match &self.kind {
            Kind::Identity => g.to_vec(),
            Kind::Dense { m, .. } => {
                let n = m.rows;
                let mut out = vec![0.0; n];
                for i in 0..n {
                    out[i] = linalg::dot(&m.data[i * n..(i + 1) * n], g);
                }
                out
            }
        }
    }
}

fn quad_form(m: &Mat, a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), m.rows);
    debug_assert_eq!(b.len(), m.rows);
    let n = m.rows;
    let mut s = 0.0;
    for i in 0..n {
        s += linalg::dot(&m.data[i * n..(i + 1) * n], a) * b[i];
    }
    s
}

/// Eigendecompose a symmetric matrix, clamp each eigenvalue into [1/μ, μ],
/// and reassemble. The result is a valid scaling matrix by construction.
pub fn clip_to_dmu(m: &Mat, mu: f64) -> Result<ScalingMatrix, Error> {
    if m.rows != m.cols {
        return Err(Error::Shape(format!("matrix is {}x{}", m.rows, m.cols)));
    }
    if mu < 1.0 {
        return Err(Error::InvalidInput(format!("mu must be >= 1, got {mu}")));
    }
    let n = m.rows;
    let asym = linalg::asymmetry(&m.data, n);
    if asym > 1e-10 * m.frob_norm().max(1e-300) {
        return Err(Error::InvalidInput(format!(
            "input is not symmetric: skew norm {asym:.3e}"
        )));
    }
    let (mut evals, vecs) = jacobi_eigh(&m.data, n);
    for v in &mut evals {
        *v = v.clamp(1.0 / mu, mu);
    }
    let data = assemble(&evals, &vecs);
    let dense = Mat {
        rows: n,
        cols: n,
        data: linalg::symmetrize(&data, n),
    };
    let chol = linalg::cholesky(&dense)?;
    Ok(ScalingMatrix {
        kind: Kind::Dense { m: dense, chol },
        mu,
    })
}
