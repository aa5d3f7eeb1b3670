//! Symmetric eigensolvers: a cyclic Jacobi decomposition for dense work and
//! a Lanczos iteration for extreme eigenpairs.
//!
//! Both are deterministic: Jacobi sweeps rows in a fixed order and Lanczos
//! starts from a fixed vector, so repeated runs produce identical output.

use crate::linalg::{dot, norm, symmetrize, Mat};
use crate::Error;

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the columns of the returned matrix.
pub fn jacobi_eigh(a: &[f64], n: usize) -> (Vec<f64>, Mat) {
    assert_eq!(a.len(), n * n, "jacobi_eigh expects an n*n buffer");
    let mut m = symmetrize(a, n);
    let mut v = Mat::identity(n);
    if n <= 1 {
        return (m.to_vec(), v);
    }
    let scale = norm(&m).max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..200 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/cols p and q of m.
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v.data[k * n + p];
                    let vkq = v.data[k * n + q];
                    v.data[k * n + p] = c * vkp - s * vkq;
                    v.data[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut evals: Vec<(f64, usize)> = (0..n).map(|i| (m[i * n + i], i)).collect();
    evals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let sorted: Vec<f64> = evals.iter().map(|e| e.0).collect();
    let mut vecs = Mat::zeros(n, n);
    for (new_col, (_, old_col)) in evals.iter().enumerate() {
        for k in 0..n {
            vecs.data[k * n + new_col] = v.data[k * n + old_col];
        }
    }
    (sorted, vecs)
}

/// Reassemble Q diag(d) Qᵀ as a flat symmetric matrix.
pub fn assemble(evals: &[f64], vecs: &Mat) -> Vec<f64> {
    let n = vecs.rows;
    let mut out = vec![0.0; n * n];
    for l in 0..n {
        let d = evals[l];
        if d == 0.0 {
            continue;
        }
        for i in 0..n {
            let qil = vecs.data[i * n + l];
            if qil == 0.0 {
                continue;
            }
            for j in i..n {
                out[i * n + j] += d * qil * vecs.data[j * n + l];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            out[i * n + j] = out[j * n + i];
        }
    }
    out
}

fn induced_one_norm(g: &[f64], n: usize) -> f64 {
    let mut best = 0.0f64;
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            s += g[i * n + j].abs();
        }
        best = best.max(s);
    }
    best
}

fn sym_matvec(g: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let mut s = 0.0;
        let row = &g[i * n..(i + 1) * n];
        for j in 0..n {
            s += row[j] * x[j];
        }
        out[i] = s;
    }
}

/// Number of eigenvalues of the symmetric tridiagonal (alphas, betas)
/// strictly below x, via the LDLᵀ Sturm count.
fn sturm_count(alphas: &[f64], betas: &[f64], x: f64, guard: f64) -> usize {
    let mut count = 0usize;
    let mut d = alphas[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..alphas.len() {
        let mut denom = d;
        if denom.abs() < guard {
            denom = if denom < 0.0 { -guard } else { guard };
        }
        d = (alphas[i] - x) - betas[i - 1] * betas[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Top eigenpair of a small symmetric tridiagonal matrix: the largest
/// eigenvalue by Sturm bisection inside the Gershgorin interval, the vector
/// by shifted inverse iteration with a pivoting band solve.
fn tridiag_top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    if k == 1 {
        return (alphas[0], vec![1.0]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let b_prev = if i > 0 { betas[i - 1].abs() } else { 0.0 };
        let b_next = if i < k - 1 { betas[i].abs() } else { 0.0 };
        lo = lo.min(alphas[i] - b_prev - b_next);
        hi = hi.max(alphas[i] + b_prev + b_next);
    }
    let scale = hi.abs().max(lo.abs()).max(1e-300);
    let guard = 1e-300f64.max(f64::EPSILON * scale * scale);
    let mut a = lo;
    let mut b = hi + f64::EPSILON * scale;
    for _ in 0..120 {
        let mid = 0.5 * (a + b);
        if sturm_count(alphas, betas, mid, guard) == k {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    let lambda = 0.5 * (a + b);

    // Inverse iteration on T - shift I with partial pivoting (band width 2).
    let shift = lambda + 1e3 * f64::EPSILON * scale;
    let mut y: Vec<f64> = (0..k).map(|i| 1.0 + 1e-3 * i as f64).collect();
    let ny = norm(&y);
    y.iter_mut().for_each(|v| *v /= ny);
    for _ in 0..3 {
        let sol = solve_tridiag_shifted(alphas, betas, shift, &y);
        let ns = norm(&sol);
        if !ns.is_finite() || ns == 0.0 {
            break;
        }
        y = sol;
        y.iter_mut().for_each(|v| *v /= ns);
    }
    // Rayleigh polish.
    let mut ty = vec![0.0; k];
    for i in 0..k {
        let mut s = alphas[i] * y[i];
        if i > 0 {
            s += betas[i - 1] * y[i - 1];
        }
        if i + 1 < k {
            s += betas[i] * y[i + 1];
        }
        ty[i] = s;
    }
    (dot(&y, &ty), y)
}

/// Solve (T - shift I) x = b for tridiagonal T by Gaussian elimination with
/// partial pivoting; row swaps fill in a second superdiagonal.
fn solve_tridiag_shifted(alphas: &[f64], betas: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let k = alphas.len();
    let mut dd: Vec<f64> = alphas.iter().map(|a| a - shift).collect();
    let mut du: Vec<f64> = betas.to_vec(); // first superdiagonal, len k-1
    let dl: Vec<f64> = betas.to_vec(); // subdiagonal, len k-1
    let mut du2 = vec![0.0; k]; // second superdiagonal after pivoting
    let mut rhs = b.to_vec();
    for i in 0..k - 1 {
        if dl[i].abs() > dd[i].abs() {
            // Pivot: swap rows i and i+1.
            let m = if dl[i] == 0.0 { 0.0 } else { dd[i] / dl[i] };
            let (old_d1, old_u1) = (dd[i + 1], if i + 1 < k - 1 { du[i + 1] } else { 0.0 });
            dd[i] = dl[i];
            let old_u0 = du[i];
            du[i] = old_d1;
            du2[i] = old_u1;
            dd[i + 1] = old_u0 - m * old_d1;
            if i + 1 < k - 1 {
                du[i + 1] = -m * old_u1;
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= m * rhs[i];
        } else {
            let denom = if dd[i] == 0.0 { 1e-300 } else { dd[i] };
            let m = dl[i] / denom;
            dd[i + 1] -= m * du[i];
            du2[i] = 0.0;
            rhs[i + 1] -= m * rhs[i];
        }
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = rhs[i];
        if i + 1 < k {
            s -= du[i] * x[i + 1];
        }
        if i + 2 < k {
            s -= du2[i] * x[i + 2];
        }
        let denom = if dd[i] == 0.0 { 1e-300 } else { dd[i] };
        x[i] = s / denom;
    }
    x
}

/// Smallest eigenpair of a symmetric matrix via Lanczos with full
/// reorthogonalization on the shifted operator `‖G‖₁·I − G` (positive
/// semidefinite by construction, so its top eigenpair is the sought bottom
/// one). Deterministic start vector; residual checked on `G` itself.
pub fn smallest_eigenpair(g: &[f64], n: usize) -> Result<(f64, Vec<f64>), Error> {
    let gs = symmetrize(g, n);
    if n == 1 {
        return Ok((gs[0], vec![1.0]));
    }
    let shift = induced_one_norm(&gs, n);
    if shift == 0.0 {
        let mut q = vec![0.0; n];
        q[0] = 1.0;
        return Ok((0.0, q));
    }
    let tol = 1e-9 * shift.max(1.0);
    let apply_m = |x: &[f64], out: &mut [f64]| {
        sym_matvec(&gs, n, x, out);
        for i in 0..n {
            out[i] = shift * x[i] - out[i];
        }
    };

    let mut q: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * i as f64).collect();
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut best: Option<(f64, Vec<f64>, f64)> = None; // (rayleigh on G, vector, residual)

    let mut w = vec![0.0; n];
    let mut restart_probe = 0usize;
    while basis.len() <= n {
        let qk = basis.last().unwrap().clone();
        apply_m(&qk, &mut w);
        if let Some(b) = betas.last() {
            let prev = &basis[basis.len() - 2];
            for i in 0..n {
                w[i] -= b * prev[i];
            }
        }
        let alpha = dot(&w, &qk);
        for i in 0..n {
            w[i] -= alpha * qk[i];
        }
        alphas.push(alpha);
        // Full reorthogonalization, twice.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for i in 0..n {
                    w[i] -= c * b[i];
                }
            }
        }
        let beta = norm(&w);

        // Current Ritz approximation from the tridiagonal.
        let (_, y) = tridiag_top_ritz(&alphas, &betas);
        let mut x = vec![0.0; n];
        for (c, b) in y.iter().zip(&basis) {
            for i in 0..n {
                x[i] += c * b[i];
            }
        }
        let nx = norm(&x);
        if nx > 0.0 {
            x.iter_mut().for_each(|v| *v /= nx);
            let mut gx = vec![0.0; n];
            sym_matvec(&gs, n, &x, &mut gx);
            let lam = dot(&x, &gx);
            let mut res = 0.0;
            for i in 0..n {
                let r = gx[i] - lam * x[i];
                res += r * r;
            }
            let res = res.sqrt();
            if best.as_ref().map_or(true, |(_, _, r)| res < *r) {
                best = Some((lam, x, res));
            }
            if res <= tol {
                let (lam, x, _) = best.unwrap();
                return Ok((lam, x));
            }
        }

        if beta <= 1e-13 * shift {
            // Krylov space closed; expand with a fresh coordinate direction.
            let mut injected = false;
            while restart_probe < n {
                let mut e = vec![0.0; n];
                e[restart_probe] = 1.0;
                restart_probe += 1;
                for _ in 0..2 {
                    for b in &basis {
                        let c = dot(&e, b);
                        for i in 0..n {
                            e[i] -= c * b[i];
                        }
                    }
                }
                let ne = norm(&e);
                if ne > 1e-8 {
                    e.iter_mut().for_each(|v| *v /= ne);
                    betas.push(0.0);
                    basis.push(e);
                    injected = true;
                    break;
                }
            }
            if !injected {
                break;
            }
        } else {
            betas.push(beta);
            w.iter_mut().for_each(|v| *v /= beta);
            basis.push(w.clone());
        }
    }

    match best {
        Some((lam, x, res)) if res <= 1e-6 * shift.max(1.0) => Ok((lam, x)),
        Some((_, _, res)) => Err(Error::Numerical(format!(
            "lanczos stagnated: residual {res:.3e} after spanning the space"
        ))),
        None => Err(Error::Numerical("lanczos produced no Ritz pair".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_symmetric(n: usize, rng: &mut SplitMix64) -> Vec<f64> {
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.uniform(-1.0, 1.0);
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        g
    }

    #[test]
    fn jacobi_diagonal_matrix() {
        let a = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let (evals, vecs) = jacobi_eigh(&a, 3);
        assert!((evals[0] - 1.0).abs() < 1e-14);
        assert!((evals[1] - 2.0).abs() < 1e-14);
        assert!((evals[2] - 3.0).abs() < 1e-14);
        // Eigenvector for the smallest eigenvalue is ±e2.
        assert!(vecs.get(1, 0).abs() > 0.999);
    }

    #[test]
    fn jacobi_reconstructs_input() {
        let mut rng = SplitMix64::new(5);
        for n in [2usize, 4, 7] {
            let g = random_symmetric(n, &mut rng);
            let (evals, vecs) = jacobi_eigh(&g, n);
            let back = assemble(&evals, &vecs);
            for (x, y) in g.iter().zip(&back) {
                assert!((x - y).abs() < 1e-10, "reconstruction error at n={n}");
            }
        }
    }

    #[test]
    fn lanczos_matches_jacobi_smallest() {
        let mut rng = SplitMix64::new(9);
        for n in [5usize, 20, 50] {
            let g = random_symmetric(n, &mut rng);
            let (lam, q) = smallest_eigenpair(&g, n).unwrap();
            let (evals, _) = jacobi_eigh(&g, n);
            assert!(
                lam <= evals[0] + 1e-8,
                "lanczos {lam} vs jacobi {} at n={n}",
                evals[0]
            );
            assert!((norm(&q) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lanczos_diagonal_case() {
        let g = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let (lam, q) = smallest_eigenpair(&g, 3).unwrap();
        assert!((lam - 1.0).abs() < 1e-9);
        assert!(q[1].abs() > 0.999);
    }

    #[test]
    fn lanczos_handles_multiple_of_identity() {
        let g = vec![2.0, 0.0, 0.0, 2.0];
        let (lam, q) = smallest_eigenpair(&g, 2).unwrap();
        assert!((lam - 2.0).abs() < 1e-9);
        assert!((norm(&q) - 1.0).abs() < 1e-9);
    }
}
