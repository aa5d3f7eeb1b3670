//! Dense row-major matrices and the small set of vector kernels used across
//! the crate.
//!
//! Optimization variables are flat `Vec<f64>` points. Matrix-valued points of
//! shape n×n are stored row-major with length n², so the Frobenius inner
//! product `tr(AᵀB)` coincides with the flat dot product and no conversions
//! are needed between the two views.

use crate::Error;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// y += alpha * x
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(alpha: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| alpha * x).collect()
}

/// Componentwise max |a_i - b_i|.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Symmetric part (X + Xᵀ)/2 of a row-major n×n matrix.
pub fn symmetrize(x: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(x.len(), n * n);
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.5 * (x[i * n + j] + x[j * n + i]);
        }
    }
    out
}

/// Frobenius norm of the skew part X - Xᵀ.
pub fn asymmetry(x: &[f64], n: usize) -> f64 {
    debug_assert_eq!(x.len(), n * n);
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = x[i * n + j] - x[j * n + i];
            s += d * d;
        }
    }
    s.sqrt()
}

/// Dense row-major matrix. Used for problem data (the least-squares factors)
/// and for eigenvector stacks; points stay flat slices.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    /// A · X for a flat row-major k×k point with k = self.cols.
    pub fn mul_point(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        let k = self.cols;
        if x.len() != k * k {
            return Err(Error::Shape(format!(
                "expected {}x{} point, got length {}",
                k,
                k,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.rows * k];
        for i in 0..self.rows {
            for l in 0..k {
                let ail = self.get(i, l);
                if ail == 0.0 {
                    continue;
                }
                for j in 0..k {
                    out[i * k + j] += ail * x[l * k + j];
                }
            }
        }
        Ok(out)
    }

    /// Aᵀ · R for a flat row-major (rows × cols-of-R) block; R has `self.rows`
    /// rows and `k` columns.
    pub fn tr_mul_point(&self, r: &[f64], k: usize) -> Vec<f64> {
        debug_assert_eq!(r.len(), self.rows * k);
        let n = self.cols;
        let mut out = vec![0.0; n * k];
        for l in 0..self.rows {
            for i in 0..n {
                let ali = self.get(l, i);
                if ali == 0.0 {
                    continue;
                }
                for j in 0..k {
                    out[i * k + j] += ali * r[l * k + j];
                }
            }
        }
        out
    }

    /// Symmetric n×n Gram matrix AᵀA.
    pub fn gram(&self) -> Mat {
        let n = self.cols;
        let mut g = Mat::zeros(n, n);
        for l in 0..self.rows {
            for i in 0..n {
                let ali = self.get(l, i);
                if ali == 0.0 {
                    continue;
                }
                for j in i..n {
                    g.data[i * n + j] += ali * self.get(l, j);
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.data[i * n + j] = g.data[j * n + i];
            }
        }
        g
    }

    pub fn frob_norm(&self) -> f64 {
        norm(&self.data)
    }
}

/// Largest eigenvalue of AᵀA by power iteration with a deterministic start,
/// iterated to the requested relative tolerance on the Rayleigh quotient.
pub fn largest_eigenvalue_gram(a: &Mat, rel_tol: f64) -> f64 {
    let g = a.gram();
    let n = g.rows;
    if n == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * i as f64).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut lambda = 0.0f64;
    for _ in 0..200_000 {
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += g.get(i, j) * v[j];
            }
            w[i] = s;
        }
        let new_lambda = dot(&v, &w);
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        w.iter_mut().for_each(|x| *x /= nw);
        v = w;
        if (new_lambda - lambda).abs() <= rel_tol * new_lambda.abs().max(1.0) {
            return new_lambda;
        }
        lambda = new_lambda;
    }
    lambda
}

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
pub fn cholesky(a: &Mat) -> Result<Mat, Error> {
    let n = a.rows;
    assert_eq!(a.rows, a.cols);
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::Numerical(
                        "cholesky failed: matrix not positive definite".into(),
                    ));
                }
                l.set(i, j, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solve A x = b given the Cholesky factor L of A.
pub fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::jacobi_eigh;
    use crate::rng::SplitMix64;

    #[test]
    fn matmul_against_hand_product() {
        let a = Mat {
            rows: 2,
            cols: 3,
            data: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        };
        let b = Mat {
            rows: 3,
            cols: 2,
            data: vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0],
        };
        let c = a.matmul(&b);
        assert_eq!(c.data, vec![58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn tr_mul_matches_explicit_transpose() {
        let mut rng = SplitMix64::new(3);
        let a = Mat::from_fn(5, 3, |_, _| rng.uniform(-1.0, 1.0));
        let r: Vec<f64> = (0..5 * 3).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let fast = a.tr_mul_point(&r, 3);
        let slow = a.transpose().matmul(&Mat {
            rows: 5,
            cols: 3,
            data: r,
        });
        for (x, y) in fast.iter().zip(&slow.data) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn power_iteration_matches_dense_eigensolver() {
        let mut rng = SplitMix64::new(11);
        let a = Mat::from_fn(10, 5, |_, _| rng.uniform(-1.0, 1.0));
        let lam = largest_eigenvalue_gram(&a, 1e-12);
        let g = a.gram();
        let (evals, _) = jacobi_eigh(&g.data, 5);
        let lam_ref = evals[4];
        assert!(
            (lam - lam_ref).abs() <= 1e-8 * lam_ref.abs(),
            "power iteration {lam} vs jacobi {lam_ref}"
        );
    }

    #[test]
    fn cholesky_solve_roundtrip() {
        let a = Mat {
            rows: 2,
            cols: 2,
            data: vec![4.0, 1.0, 1.0, 3.0],
        };
        let l = cholesky(&a).unwrap();
        let x = cholesky_solve(&l, &[1.0, 2.0]);
        let b0 = 4.0 * x[0] + x[1];
        let b1 = x[0] + 3.0 * x[1];
        assert!((b0 - 1.0).abs() < 1e-12 && (b1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn symmetrize_and_asymmetry() {
        let x = vec![1.0, 2.0, 0.0, 3.0];
        let s = symmetrize(&x, 2);
        assert_eq!(s, vec![1.0, 1.0, 1.0, 3.0]);
        assert!(asymmetry(&s, 2) < 1e-15);
        assert!(asymmetry(&x, 2) > 0.0);
    }
}
