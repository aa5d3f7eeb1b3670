//! Feasible sets and their exact projection / linear-minimization oracles.
//!
//! Matrix-valued sets (the spectrahedron and the diagonally-dominant cone
//! intersection) live inside the symmetric subspace; their points are flat
//! row-major n×n arrays.

use crate::eig::{self, jacobi_eigh};
use crate::linalg::{self};
use crate::rng::SplitMix64;
use crate::Error;

/// Feasibility tolerance used by the projection engines.
pub const FEAS_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug)]
pub enum FeasibleSet {
    /// {x : lower ≤ x ≤ upper}, entries may be ±∞.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// {x ≥ 0, Σx = 1}.
    Simplex { dim: usize },
    /// {X symmetric PSD, tr(X) = 1}, as flat n×n points.
    Spectrahedron { n: usize },
    /// Intersection of the n row dominance cones with a box, as flat n×n
    /// points. Bounds must be symmetric as matrices.
    SddPlusBox {
        n: usize,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// {x : ⟨normal, x⟩ ≤ offset} for each half-space. Test geometry.
    HalfspaceIntersection { halfspaces: Vec<Halfspace> },
}

impl FeasibleSet {
    /// Unconstrained box, useful as a stand-in ambient set.
    pub fn free_box(dim: usize) -> Self {
        FeasibleSet::Box {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, Error> {
        if lower.len() != upper.len() {
            return Err(Error::Shape("box bounds differ in length".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if l > u {
                return Err(Error::InvalidInput(format!("box has L={l} > U={u}")));
            }
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// The feasible set of the dominance-constrained benchmark: row cones
    /// intersected with {X ≥ 0} (no upper bound).
    pub fn sdd_nonneg(n: usize) -> Self {
        FeasibleSet::SddPlusBox {
            n,
            lower: vec![0.0; n * n],
            upper: vec![f64::INFINITY; n * n],
        }
    }

    /// Ambient dimension of the flat representation.
    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Simplex { dim } => *dim,
            FeasibleSet::Spectrahedron { n } => n * n,
            FeasibleSet::SddPlusBox { n, .. } => n * n,
            FeasibleSet::HalfspaceIntersection { halfspaces } => {
                halfspaces.first().map_or(0, |h| h.normal.len())
            }
        }
    }

    /// Side length n for matrix-valued sets.
    pub fn matrix_side(&self) -> Option<usize> {
        match self {
            FeasibleSet::Spectrahedron { n } | FeasibleSet::SddPlusBox { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Worst constraint violation at x (absolute).
    pub fn violation(&self, x: &[f64]) -> f64 {
        match self {
            FeasibleSet::Box { lower, upper } => {
                let mut worst = 0.0f64;
                for i in 0..x.len() {
                    worst = worst.max(lower[i] - x[i]).max(x[i] - upper[i]);
                }
                worst.max(0.0)
            }
            FeasibleSet::Simplex { .. } => {
                let neg = x.iter().fold(0.0f64, |w, &v| w.max(-v));
                let sum: f64 = x.iter().sum();
                neg.max((sum - 1.0).abs())
            }
            FeasibleSet::Spectrahedron { n } => {
                let n = *n;
                let asym = linalg::asymmetry(x, n);
                let trace: f64 = (0..n).map(|i| x[i * n + i]).sum();
                let (evals, _) = jacobi_eigh(x, n);
                asym.max((trace - 1.0).abs()).max(-evals[0]).max(0.0)
            }
            FeasibleSet::SddPlusBox { n, lower, upper } => {
                let n = *n;
                let mut worst = linalg::asymmetry(x, n);
                for i in 0..x.len() {
                    worst = worst.max(lower[i] - x[i]).max(x[i] - upper[i]);
                }
                for i in 0..n {
                    let mut off = 0.0;
                    for j in 0..n {
                        if j != i {
                            off += x[i * n + j].abs();
                        }
                    }
                    worst = worst.max(off - x[i * n + i]);
                }
                worst.max(0.0)
            }
            FeasibleSet::HalfspaceIntersection { halfspaces } => halfspaces
                .iter()
                .map(|h| linalg::dot(&h.normal, x) - h.offset)
                .fold(0.0f64, f64::max),
        }
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Whether the set is compact, i.e. a linear-minimization oracle exists.
    pub fn is_compact(&self) -> bool {
        match self {
            FeasibleSet::Box { lower, upper } => lower
                .iter()
                .chain(upper.iter())
                .all(|v| v.is_finite()),
            FeasibleSet::Simplex { .. } | FeasibleSet::Spectrahedron { .. } => true,
            _ => false,
        }
    }

    /// Exact projection where a closed form or spectral route exists.
    pub fn exact_project(&self, v: &[f64]) -> Result<Vec<f64>, Error> {
        match self {
            FeasibleSet::Box { lower, upper } => exact_project_box(v, lower, upper),
            FeasibleSet::Simplex { .. } => project_simplex(v),
            FeasibleSet::Spectrahedron { n } => Ok(exact_project_spectrahedron(v, *n)),
            FeasibleSet::SddPlusBox { .. } => Err(Error::Unsupported(
                "no closed-form projection onto the cone intersection; use the cyclic engine"
                    .into(),
            )),
            FeasibleSet::HalfspaceIntersection { halfspaces } => {
                if halfspaces.len() == 1 {
                    Ok(project_halfspace(v, &halfspaces[0]))
                } else {
                    Err(Error::Unsupported(
                        "no closed-form projection onto a half-space intersection".into(),
                    ))
                }
            }
        }
    }
}

/// Componentwise clamp; bounds may be infinite.
pub fn exact_project_box(v: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<f64>, Error> {
    if v.len() != lower.len() || v.len() != upper.len() {
        return Err(Error::Shape("box projection dimension mismatch".into()));
    }
    for (l, u) in lower.iter().zip(upper) {
        if l > u {
            return Err(Error::InvalidInput(format!("box has L={l} > U={u}")));
        }
    }
    Ok(v.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&x, (&l, &u))| x.max(l).min(u))
        .collect())
}

/// Euclidean projection onto the unit simplex by sorting and thresholding.
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>, Error> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    let mut rho = 0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
            rho = j + 1;
        }
    }
    debug_assert!(rho > 0);
    Ok(v.iter().map(|&x| (x - theta).max(0.0)).collect())
}

/// Spectral projection onto {X ⪰ 0, tr X = 1}: eigendecompose the symmetric
/// part, project the spectrum onto the unit simplex, reassemble.
pub fn exact_project_spectrahedron(v: &[f64], n: usize) -> Vec<f64> {
    let (evals, vecs) = jacobi_eigh(v, n);
    let lam = project_simplex(&evals).expect("n >= 1");
    linalg::symmetrize(&eig::assemble(&lam, &vecs), n)
}

fn project_halfspace(v: &[f64], h: &Halfspace) -> Vec<f64> {
    let excess = linalg::dot(&h.normal, v) - h.offset;
    if excess <= 0.0 {
        return v.to_vec();
    }
    let nn = linalg::norm_sq(&h.normal);
    let mut out = v.to_vec();
    linalg::axpy(-excess / nn, &h.normal, &mut out);
    out
}

/// Frobenius projection of a symmetric matrix onto the row-i dominance cone
/// {X = Xᵀ, X_ii ≥ Σ_{j≠i} |X_ij|}.
///
/// Only the diagonal entry t = X_ii and the symmetric pairs x_j = X_ij
/// (Frobenius weight 2) move. With multiplier λ the optimality system is
/// t = t₀ + λ, x_j = soft(x₀_j, λ/2), and λ solves the piecewise-linear
/// complementarity equation by a scan over sorted |x₀_j| breakpoints.
pub fn exact_project_sdd_row(v: &[f64], n: usize, i: usize) -> Result<Vec<f64>, Error> {
    if v.len() != n * n {
        return Err(Error::Shape(format!(
            "expected {}x{} point, got length {}",
            n,
            n,
            v.len()
        )));
    }
    if i >= n {
        return Err(Error::InvalidInput(format!("row {i} out of range")));
    }
    let asym = linalg::asymmetry(v, n);
    if asym > 1e-10 * linalg::norm(v).max(1.0) {
        return Err(Error::InvalidInput(format!(
            "input is not symmetric: skew norm {asym:.3e}"
        )));
    }

    let t0 = v[i * n + i];
    let mut abs_off: Vec<f64> = (0..n)
        .filter(|&j| j != i)
        .map(|j| v[i * n + j].abs())
        .collect();
    let sum_abs: f64 = abs_off.iter().sum();
    if t0 >= sum_abs {
        return Ok(v.to_vec());
    }

    // Solve phi(lam) = t0 + lam - sum_j max(|x0_j| - lam/2, 0) = 0 for lam >= 0.
    abs_off.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut active_sum = sum_abs;
    let mut active = abs_off.len();
    let lam;
    loop {
        // With the current active set, phi is linear:
        // t0 + lam - active_sum + active*lam/2 = 0.
        let cand = (active_sum - t0) / (1.0 + active as f64 / 2.0);
        let boundary = if active == 0 {
            f64::INFINITY
        } else {
            2.0 * abs_off[active - 1]
        };
        if cand <= boundary || active == 0 {
            lam = cand.max(0.0);
            break;
        }
        // Smallest active entry hits zero first; deactivate and continue.
        active_sum -= abs_off[active - 1];
        active -= 1;
    }

    let mut out = v.to_vec();
    out[i * n + i] = t0 + lam;
    for j in 0..n {
        if j == i {
            continue;
        }
        let x0 = v[i * n + j];
        let shrunk = x0.signum() * (x0.abs() - lam / 2.0).max(0.0);
        out[i * n + j] = shrunk;
        out[j * n + i] = shrunk;
    }
    Ok(out)
}

/// Answer of a linear-minimization oracle.
#[derive(Clone, Debug)]
pub struct LoAnswer {
    pub z: Vec<f64>,
    pub value: f64,
    /// Extreme eigenpairs computed to produce z (1 for the spectrahedron).
    pub eigenpairs: u64,
}

/// argmin_{z ∈ C} ⟨g, z⟩ for compact sets.
///
/// Simplex: the vertex at the smallest gradient coordinate (ties broken by
/// smallest index). Spectrahedron: qqᵀ for a unit eigenvector q of the
/// smallest eigenvalue of the symmetrized g. Box: only with finite bounds.
pub fn lo_oracle(set: &FeasibleSet, g: &[f64]) -> Result<LoAnswer, Error> {
    match set {
        FeasibleSet::Simplex { dim } => {
            if g.len() != *dim {
                return Err(Error::Shape("oracle dimension mismatch".into()));
            }
            let mut best = 0usize;
            for j in 1..*dim {
                if g[j] < g[best] {
                    best = j;
                }
            }
            let mut z = vec![0.0; *dim];
            z[best] = 1.0;
            Ok(LoAnswer {
                z,
                value: g[best],
                eigenpairs: 0,
            })
        }
        FeasibleSet::Spectrahedron { n } => {
            let (lam, q) = eig::smallest_eigenpair(g, *n)?;
            let n = *n;
            let mut z = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    z[i * n + j] = q[i] * q[j];
                }
            }
            Ok(LoAnswer {
                z,
                value: lam,
                eigenpairs: 1,
            })
        }
        FeasibleSet::Box { lower, upper } => {
            if !set.is_compact() {
                return Err(Error::Unsupported(
                    "linear minimization needs finite box bounds".into(),
                ));
            }
            let z: Vec<f64> = g
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&gi, (&l, &u))| if gi > 0.0 { l } else { u })
                .collect();
            let value = linalg::dot(g, &z);
            Ok(LoAnswer {
                z,
                value,
                eigenpairs: 0,
            })
        }
        _ => Err(Error::Unsupported(
            "set has no linear-minimization oracle".into(),
        )),
    }
}

/// Deterministic random feasible point, for witnesses and test geometry.
pub fn sample_feasible(set: &FeasibleSet, rng: &mut SplitMix64) -> Result<Vec<f64>, Error> {
    match set {
        FeasibleSet::Box { lower, upper } => Ok(lower
            .iter()
            .zip(upper)
            .map(|(&l, &u)| {
                let lo = if l.is_finite() { l } else { -1e3 };
                let hi = if u.is_finite() { u } else { 1e3 };
                rng.uniform(lo, hi)
            })
            .collect()),
        FeasibleSet::Simplex { dim } => {
            // Exponential spacings normalized to the simplex.
            let mut x: Vec<f64> = (0..*dim)
                .map(|_| -(1.0 - rng.next_f64()).ln())
                .collect();
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= s);
            Ok(x)
        }
        FeasibleSet::Spectrahedron { n } => {
            let n = *n;
            // Normalized Gram matrix: PSD with unit trace.
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
            if tr <= 0.0 {
                return Err(Error::Numerical("degenerate Gram sample".into()));
            }
            x.iter_mut().for_each(|v| *v /= tr);
            Ok(x)
        }
        FeasibleSet::SddPlusBox { n, lower, upper } => {
            // Symmetric nonnegative sample with reinforced diagonal, then
            // clamped into the box (bounds 0/∞ in the benchmark geometry).
            let n = *n;
            let mut x = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.next_f64();
                    x[i * n + j] = v;
                    x[j * n + i] = v;
                }
            }
            for i in 0..n {
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| x[i * n + j]).sum();
                x[i * n + i] = 2.0 * off + rng.next_f64();
            }
            for i in 0..x.len() {
                x[i] = x[i].max(lower[i]).min(upper[i]);
            }
            Ok(x)
        }
        FeasibleSet::HalfspaceIntersection { .. } => Err(Error::Unsupported(
            "no generic sampler for half-space intersections".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn box_projection_examples() {
        let w = exact_project_box(&[2.0, -3.0], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(w, vec![1.0, 0.0]);
        let inside = exact_project_box(&[0.3, 0.4], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(inside, vec![0.3, 0.4]);
        assert!(exact_project_box(&[0.0], &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn box_projection_matches_grid_search() {
        let mut rng = SplitMix64::new(61);
        let lower = vec![-0.5, 0.2];
        let upper = vec![0.75, 1.0];
        for _ in 0..20 {
            let v = vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)];
            let w = exact_project_box(&v, &lower, &upper).unwrap();
            // Brute-force nearest grid point with step 1e-3.
            let mut best = (f64::INFINITY, vec![0.0, 0.0]);
            let steps = |l: f64, u: f64| ((u - l) / 1e-3).round() as usize;
            for a in 0..=steps(lower[0], upper[0]) {
                let xa = lower[0] + 1e-3 * a as f64;
                let da = (xa - v[0]).powi(2);
                if da > best.0 {
                    continue;
                }
                for b in 0..=steps(lower[1], upper[1]) {
                    let xb = lower[1] + 1e-3 * b as f64;
                    let d = da + (xb - v[1]).powi(2);
                    if d < best.0 {
                        best = (d, vec![xa, xb]);
                    }
                }
            }
            assert!(linalg::max_abs_diff(&w, &best.1) <= 1e-3 + 1e-12);
        }
    }

    #[test]
    fn box_projection_variational_inequality() {
        let mut rng = SplitMix64::new(67);
        let lower = vec![0.0; 4];
        let upper = vec![1.0; 4];
        let set = FeasibleSet::boxed(lower.clone(), upper.clone()).unwrap();
        for _ in 0..25 {
            let v: Vec<f64> = (0..4).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let w = exact_project_box(&v, &lower, &upper).unwrap();
            for _ in 0..25 {
                let y = sample_feasible(&set, &mut rng).unwrap();
                let lhs = linalg::dot(&linalg::sub(&v, &w), &linalg::sub(&y, &w));
                assert!(lhs <= 1e-8, "characterization violated: {lhs}");
            }
        }
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(project_simplex(&[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(project_simplex(&[2.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let w = project_simplex(&[0.3, 0.3, 0.3]).unwrap();
        for v in &w {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(project_simplex(&[]).is_err());
    }

    #[test]
    fn spectrahedron_projection_examples() {
        let v = vec![2.0, 0.0, 0.0, 0.0];
        let w = exact_project_spectrahedron(&v, 2);
        assert!((w[0] - 1.0).abs() < 1e-10);
        assert!(w[1].abs() < 1e-10 && w[2].abs() < 1e-10 && w[3].abs() < 1e-10);

        let mut rng = SplitMix64::new(71);
        let set = FeasibleSet::Spectrahedron { n: 3 };
        let x = sample_feasible(&set, &mut rng).unwrap();
        let back = exact_project_spectrahedron(&x, 3);
        assert!(linalg::max_abs_diff(&x, &back) < 1e-10, "idempotent on feasible points");
    }

    #[test]
    fn spectrahedron_projection_optimality_sampling() {
        let mut rng = SplitMix64::new(73);
        let n = 6;
        let set = FeasibleSet::Spectrahedron { n };
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let val = rng.uniform(-1.0, 1.0);
                v[i * n + j] = val;
                v[j * n + i] = val;
            }
        }
        let w = exact_project_spectrahedron(&v, n);
        assert!(set.violation(&w) <= 1e-10);
        let d = linalg::sub(&v, &w);
        for _ in 0..100 {
            let y = sample_feasible(&set, &mut rng).unwrap();
            let lhs = linalg::dot(&d, &linalg::sub(&y, &w));
            assert!(lhs <= 1e-8, "optimality violated: {lhs}");
        }
    }

    #[test]
    fn sdd_row_feasible_input_unchanged() {
        // Row 1 already dominant.
        let v = vec![1.0, 0.2, 0.2, 0.9];
        let w = exact_project_sdd_row(&v, 2, 0).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn sdd_row_active_face_2x2() {
        // Projecting ((0,1),(1,0)) onto the row-0 cone: weighted problem
        // min (t-0)^2 + 2(x-1)^2 s.t. t >= |x|, solved on the face t = x
        // gives t* = x* = 2/3.
        let v = vec![0.0, 1.0, 1.0, 0.0];
        let w = exact_project_sdd_row(&v, 2, 0).unwrap();
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-12, "t* = {}", w[0]);
        assert!((w[1] - 2.0 / 3.0).abs() < 1e-12, "x* = {}", w[1]);
        assert!((w[2] - 2.0 / 3.0).abs() < 1e-12);
        // Entry (1,1) untouched.
        assert_eq!(w[3], 0.0);
    }

    /// Make a symmetric matrix row-i feasible without using the projection
    /// under test: lift the diagonal entry to the off-diagonal row sum.
    fn force_row_feasible(y: &mut [f64], n: usize, i: usize) {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| y[i * n + j].abs()).sum();
        if y[i * n + i] < off {
            y[i * n + i] = off;
        }
    }

    #[test]
    fn sdd_row_projection_is_optimal() {
        // Independent optimality check: the projection must be feasible,
        // no farther from v than any sampled feasible point, and satisfy
        // the variational inequality against both global and local probes.
        let mut rng = SplitMix64::new(79);
        let n = 4;
        for case in 0..8 {
            let mut v = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let val = rng.uniform(-1.0, 1.0);
                    v[i * n + j] = val;
                    v[j * n + i] = val;
                }
            }
            let i = (rng.next_u64() % n as u64) as usize;
            let w = exact_project_sdd_row(&v, n, i).unwrap();
            let row_violation = {
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| w[i * n + j].abs()).sum();
                off - w[i * n + i]
            };
            assert!(row_violation <= 1e-12, "case {case}: infeasible output");
            let d = linalg::sub(&v, &w);
            let dist = linalg::norm_sq(&d);
            for probe in 0..500 {
                let mut y = vec![0.0; n * n];
                for a in 0..n {
                    for b in a..n {
                        let scale = if probe % 2 == 0 { 1.0 } else { 1e-3 };
                        let base = if probe % 2 == 0 { 0.0 } else { w[a * n + b] };
                        let val = base + scale * rng.uniform(-1.0, 1.0);
                        y[a * n + b] = val;
                        y[b * n + a] = val;
                    }
                }
                force_row_feasible(&mut y, n, i);
                let lhs = linalg::dot(&d, &linalg::sub(&y, &w));
                assert!(lhs <= 1e-8, "case {case}: variational inequality {lhs}");
                let dy = linalg::norm_sq(&linalg::sub(&v, &y));
                assert!(dist <= dy + 1e-10, "case {case}: sampled point closer to v");
            }
        }
    }

    #[test]
    fn sdd_row_rejects_asymmetric() {
        let v = vec![1.0, 0.5, 0.0, 1.0];
        assert!(exact_project_sdd_row(&v, 2, 0).is_err());
    }

    #[test]
    fn lo_oracle_simplex() {
        let set = FeasibleSet::Simplex { dim: 3 };
        let ans = lo_oracle(&set, &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(ans.z, vec![0.0, 1.0, 0.0]);
        assert_eq!(ans.value, -1.0);
        // Ties break toward the smallest index.
        let tie = lo_oracle(&set, &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(tie.z, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn lo_oracle_spectrahedron_diagonal() {
        let set = FeasibleSet::Spectrahedron { n: 3 };
        let g = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let ans = lo_oracle(&set, &g).unwrap();
        assert!((ans.value - 1.0).abs() < 1e-9);
        assert!((ans.z[4] - 1.0).abs() < 1e-8, "z should be e2 e2^T");
        assert_eq!(ans.eigenpairs, 1);
    }

    #[test]
    fn lo_oracle_spectrahedron_matches_dense_eigensolver() {
        let mut rng = SplitMix64::new(83);
        let n = 50;
        let set = FeasibleSet::Spectrahedron { n };
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.uniform(-1.0, 1.0);
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        let ans = lo_oracle(&set, &g).unwrap();
        let (evals, _) = jacobi_eigh(&g, n);
        assert!(
            ans.value <= evals[0] + 1e-8,
            "oracle value {} vs lambda_min {}",
            ans.value,
            evals[0]
        );
    }

    #[test]
    fn lo_oracle_rejects_unbounded() {
        let set = FeasibleSet::free_box(2);
        assert!(lo_oracle(&set, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn exact_oracles_are_nonexpansive() {
        let mut rng = SplitMix64::new(89);
        let box_set = FeasibleSet::boxed(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let simplex = FeasibleSet::Simplex { dim: 4 };
        let spec = FeasibleSet::Spectrahedron { n: 3 };
        for set in [&box_set, &simplex, &spec] {
            for _ in 0..30 {
                let d = set.dim();
                let v: Vec<f64> = (0..d).map(|_| rng.uniform(-2.0, 2.0)).collect();
                let u: Vec<f64> = (0..d).map(|_| rng.uniform(-2.0, 2.0)).collect();
                let (v, u) = match set {
                    FeasibleSet::Spectrahedron { n } => {
                        (linalg::symmetrize(&v, *n), linalg::symmetrize(&u, *n))
                    }
                    _ => (v, u),
                };
                let pv = set.exact_project(&v).unwrap();
                let pu = set.exact_project(&u).unwrap();
                let lhs = linalg::norm(&linalg::sub(&pv, &pu));
                let rhs = linalg::norm(&linalg::sub(&v, &u));
                assert!(lhs <= rhs + 1e-8, "nonexpansiveness violated");
            }
        }
    }

    proptest! {
        #[test]
        fn simplex_projection_invariants(v in proptest::collection::vec(-10.0f64..10.0, 1..12)) {
            let w = project_simplex(&v).unwrap();
            let sum: f64 = w.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(w.iter().all(|&x| x >= 0.0));
            // Idempotence: projecting the projection changes nothing.
            let w2 = project_simplex(&w).unwrap();
            prop_assert!(linalg::max_abs_diff(&w, &w2) < 1e-12);
        }

        #[test]
        fn box_projection_inside_and_optimal(v in proptest::collection::vec(-5.0f64..5.0, 3)) {
            let lower = vec![-1.0, 0.0, -0.5];
            let upper = vec![1.0, 0.25, 2.0];
            let w = exact_project_box(&v, &lower, &upper).unwrap();
            for i in 0..3 {
                prop_assert!(w[i] >= lower[i] - 1e-15 && w[i] <= upper[i] + 1e-15);
                // Componentwise median.
                let med = v[i].max(lower[i]).min(upper[i]);
                prop_assert_eq!(w[i], med);
            }
        }
    }
}
