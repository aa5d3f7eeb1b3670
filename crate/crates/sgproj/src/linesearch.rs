//! Non-monotone backtracking line search.
//!
//! Acceptance at step τ is the relaxed sufficient-decrease test
//!
//!   f(x + τ d) ≤ f(x) + σ τ ⟨∇f(x), d⟩ + ν,
//!
//! where ν ≥ 0 is a tolerance produced by one of three strategies: plain
//! Armijo (ν ≡ 0), a windowed maximum of recent objective values, or the
//! weighted-average cost sequence q_{k+1} = ηq_k + 1,
//! c_{k+1} = (ηq_k c_k + f_{k+1})/q_{k+1}. All three keep f(x^k) + ν_k
//! non-increasing, and each admits δ_{k+1} ∈ [δ_min, 1] with
//! 0 ≤ ν_{k+1} ≤ (1−δ_{k+1})[f(x^k)+ν_k−f(x^{k+1})].

use std::collections::VecDeque;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineSearchStrategy {
    Armijo,
    /// ν_k = max of the last min(k, window)+1 objective values minus f(x^k).
    MaxType { window: usize },
    /// Weighted-average tolerance with fixed weight η ∈ [0, 1).
    AverageType { eta: f64 },
}

impl LineSearchStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            LineSearchStrategy::Armijo => "armijo",
            LineSearchStrategy::MaxType { .. } => "max",
            LineSearchStrategy::AverageType { .. } => "avg",
        }
    }
}

/// Lower bound on the admissible δ_{k+1} for a strategy; positive values
/// make Σ ν_k finite.
pub fn delta_min_of(strategy: LineSearchStrategy) -> f64 {
    match strategy {
        LineSearchStrategy::Armijo => 1.0,
        LineSearchStrategy::MaxType { .. } => 0.0,
        LineSearchStrategy::AverageType { eta } => 1.0 - eta,
    }
}

/// Per-run tolerance state. ν starts at 0; the window starts holding only
/// f(x⁰); the average recursion starts at q = 1, c = f(x⁰).
#[derive(Clone, Debug)]
pub struct NonMonotoneState {
    pub nu: f64,
    pub delta: f64,
    f_history: VecDeque<f64>,
    pub q: f64,
    pub c: f64,
}

impl NonMonotoneState {
    pub fn new(strategy: LineSearchStrategy, f0: f64) -> Self {
        let mut f_history = VecDeque::new();
        if let LineSearchStrategy::MaxType { window } = strategy {
            f_history = VecDeque::with_capacity(window + 1);
            f_history.push_back(f0);
        }
        NonMonotoneState {
            nu: 0.0,
            delta: 1.0,
            f_history,
            q: 1.0,
            c: f0,
        }
    }

    pub fn window_max(&self) -> Option<f64> {
        self.f_history
            .iter()
            .cloned()
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }
}

/// The acceptance test itself.
pub fn armijo_condition(f_trial: f64, f_k: f64, slope: f64, tau: f64, sigma: f64, nu: f64) -> bool {
    f_trial <= f_k + sigma * tau * slope + nu
}

#[derive(Clone, Copy, Debug)]
pub struct Backtrack {
    pub tau: f64,
    pub f_new: f64,
    /// Number of φ evaluations performed (≥ 1).
    pub evals: u64,
}

/// Backtracking from τ = 1 with safeguarded quadratic interpolation.
///
/// On rejection the next trial is the vertex of the quadratic matching
/// φ(0) = f_k, φ′(0) = slope, and the rejected value, clamped to
/// [ω_lo·τ, ω_hi·τ]; τ/2 when the vertex falls outside that interval.
pub fn backtrack(
    mut phi: impl FnMut(f64) -> f64,
    f_k: f64,
    slope: f64,
    sigma: f64,
    nu: f64,
    omega_lo: f64,
    omega_hi: f64,
) -> Result<Backtrack, Error> {
    debug_assert!(slope < 0.0, "search direction must be a descent direction");
    let mut tau = 1.0;
    let mut evals = 0u64;
    loop {
        let f_trial = phi(tau);
        evals += 1;
        if armijo_condition(f_trial, f_k, slope, tau, sigma, nu) {
            return Ok(Backtrack {
                tau,
                f_new: f_trial,
                evals,
            });
        }
        let denom = f_trial - f_k - slope * tau;
        let vertex = if denom > 0.0 {
            -slope * tau * tau / (2.0 * denom)
        } else {
            f64::NAN
        };
        let lo = omega_lo * tau;
        let hi = omega_hi * tau;
        tau = if vertex.is_finite() && vertex >= lo && vertex <= hi {
            vertex
        } else {
            0.5 * tau
        };
        if tau < 1e-16 {
            return Err(Error::LineSearch(format!(
                "step size underflow after {evals} evaluations; gradient and objective disagree"
            )));
        }
    }
}

/// Advance the tolerance state after an accepted step from f_k to f_next.
pub fn advance_state(
    strategy: LineSearchStrategy,
    state: &NonMonotoneState,
    _f_k: f64,
    f_next: f64,
) -> NonMonotoneState {
    let mut next = state.clone();
    match strategy {
        LineSearchStrategy::Armijo => {
            next.nu = 0.0;
            next.delta = 1.0;
        }
        LineSearchStrategy::MaxType { window } => {
            next.f_history.push_back(f_next);
            while next.f_history.len() > window + 1 {
                next.f_history.pop_front();
            }
            let max = next.window_max().expect("window is never empty");
            next.nu = (max - f_next).max(0.0);
            // The admissible delta interval is not materialized; the window
            // update itself keeps f + nu non-increasing.
            next.delta = 0.0;
        }
        LineSearchStrategy::AverageType { eta } => {
            let q_next = eta * state.q + 1.0;
            let c_next = (eta * state.q * state.c + f_next) / q_next;
            next.q = q_next;
            next.c = c_next;
            next.nu = (c_next - f_next).max(0.0);
            next.delta = 1.0 / q_next;
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn armijo_condition_examples() {
        assert!(armijo_condition(0.0, 0.5, -1.0, 1.0, 1e-4, 0.0));
        assert!(!armijo_condition(0.5, 0.5, -1.0, 1.0, 1e-4, 0.0));
        // Non-monotone acceptance: a worse value passes under a large nu.
        assert!(armijo_condition(5.5, 0.5, -1.0, 1.0, 1e-4, 10.0));
    }

    #[test]
    fn backtrack_accepts_unit_step_on_easy_quadratic() {
        // phi(tau) = 0.5 (1 - tau)^2, moving from x = 1 toward 0.
        let out = backtrack(
            |t| 0.5 * (1.0 - t) * (1.0 - t),
            0.5,
            -1.0,
            1e-4,
            0.0,
            0.1,
            0.9,
        )
        .unwrap();
        assert_eq!(out.tau, 1.0);
        assert_eq!(out.evals, 1);
    }

    #[test]
    fn backtrack_interpolates_to_the_quadratic_vertex() {
        // phi(tau) = 100 (1 - 2 tau)^2: tau = 1 is rejected, the fitted
        // quadratic has its vertex at 0.5, inside [0.1, 0.9], and phi(0.5)=0
        // is accepted. Two evaluations total.
        let out = backtrack(
            |t| 100.0 * (1.0 - 2.0 * t) * (1.0 - 2.0 * t),
            100.0,
            -400.0,
            1e-4,
            0.0,
            0.1,
            0.9,
        )
        .unwrap();
        assert_eq!(out.tau, 0.5);
        assert_eq!(out.f_new, 0.0);
        assert_eq!(out.evals, 2);
    }

    #[test]
    fn huge_tolerance_makes_the_test_vacuous() {
        let out = backtrack(|_| 1e6, 0.0, -1.0, 1e-4, 1e12, 0.1, 0.9).unwrap();
        assert_eq!(out.tau, 1.0);
        assert_eq!(out.evals, 1);
    }

    #[test]
    fn backtrack_underflow_is_an_error() {
        // A function that never satisfies the test (inconsistent slope).
        let res = backtrack(|_| 1.0, 0.0, -1e-12, 1e-4, 0.0, 0.1, 0.9);
        assert!(matches!(res, Err(Error::LineSearch(_))));
    }

    #[test]
    fn delta_min_values() {
        assert_eq!(delta_min_of(LineSearchStrategy::Armijo), 1.0);
        assert_eq!(delta_min_of(LineSearchStrategy::MaxType { window: 5 }), 0.0);
        let d = delta_min_of(LineSearchStrategy::AverageType { eta: 0.85 });
        assert!((d - 0.15).abs() < 1e-15);
    }

    #[test]
    fn average_recurrence_example() {
        let strategy = LineSearchStrategy::AverageType { eta: 0.85 };
        let mut state = NonMonotoneState::new(strategy, 10.0);
        state.q = 1.0;
        state.c = 10.0;
        let next = advance_state(strategy, &state, 10.0, 8.0);
        assert!((next.q - 1.85).abs() < 1e-12);
        assert!((next.c - 16.5 / 1.85).abs() < 1e-12);
        assert!((next.nu - (16.5 / 1.85 - 8.0)).abs() < 1e-12);
        assert!((next.delta - 1.0 / 1.85).abs() < 1e-12);
    }

    #[test]
    fn average_with_zero_eta_reduces_to_armijo() {
        let strategy = LineSearchStrategy::AverageType { eta: 0.0 };
        let state = NonMonotoneState::new(strategy, 3.0);
        let next = advance_state(strategy, &state, 3.0, 2.0);
        assert_eq!(next.q, 1.0);
        assert_eq!(next.c, 2.0);
        assert_eq!(next.nu, 0.0);
    }

    #[test]
    fn max_with_zero_window_keeps_nu_zero() {
        let strategy = LineSearchStrategy::MaxType { window: 0 };
        let state = NonMonotoneState::new(strategy, 5.0);
        let next = advance_state(strategy, &state, 5.0, 4.0);
        assert_eq!(next.nu, 0.0);
    }

    #[test]
    fn max_window_nu_recomputable_from_raw_log() {
        let strategy = LineSearchStrategy::MaxType { window: 3 };
        let fs = [10.0, 9.0, 9.5, 8.0, 8.4, 7.0, 6.5];
        let mut state = NonMonotoneState::new(strategy, fs[0]);
        for k in 1..fs.len() {
            state = advance_state(strategy, &state, fs[k - 1], fs[k]);
            let lo = k.saturating_sub(3);
            let expect = fs[lo..=k].iter().cloned().fold(f64::MIN, f64::max) - fs[k];
            assert!(
                (state.nu - expect).abs() < 1e-15,
                "k={k}: nu {} vs window max {}",
                state.nu,
                expect
            );
        }
    }

    /// Drive each strategy along a synthetic accepted trajectory (bounded,
    /// contracting toward a limit but allowed to overshoot upward within the
    /// tolerance) and check the Lyapunov and step-3 inequalities.
    fn synthetic_trajectory(strategy: LineSearchStrategy, steps: usize) -> Vec<f64> {
        let mut rng = crate::rng::SplitMix64::new(157);
        let f_limit = 1.0;
        let mut f = 50.0;
        let mut state = NonMonotoneState::new(strategy, f);
        let sigma = 1e-4;
        let mut nus = vec![state.nu];
        let mut lyapunov = f + state.nu;
        for _ in 0..steps {
            if f + state.nu - f_limit <= 1e-12 {
                // Converged to rounding: keep advancing with zero-length
                // steps so the tolerance series runs its full length.
                let next = advance_state(strategy, &state, f, f);
                assert!(next.nu <= state.nu + 1e-15);
                state = next;
                nus.push(state.nu);
                continue;
            }
            // Pick the accepted value first, then a slope consistent with it:
            // acceptance needs slope >= (f_next - f - nu) / (sigma * tau).
            let contract = rng.uniform(0.9, 0.995);
            let f_next = f_limit + (f + state.nu - f_limit) * contract;
            let tau = rng.uniform(0.1, 1.0);
            let s_min = (f_next - f - state.nu) / (sigma * tau);
            assert!(s_min < 0.0);
            let slope = s_min * rng.uniform(0.1, 1.0);
            assert!(armijo_condition(f_next, f, slope, tau, sigma, state.nu));
            let next = advance_state(strategy, &state, f, f_next);
            // Step-3 interval: 0 <= nu' <= (1 - delta_min)(f + nu - f_next).
            let budget = f + state.nu - f_next;
            assert!(budget >= -1e-12);
            assert!(next.nu >= 0.0);
            assert!(
                next.nu <= (1.0 - delta_min_of(strategy)) * budget + 1e-12,
                "tolerance exceeded its budget"
            );
            let l_next = f_next + next.nu;
            assert!(l_next <= lyapunov + 1e-12, "f + nu increased");
            lyapunov = l_next;
            f = f_next;
            state = next;
            nus.push(state.nu);
        }
        nus
    }

    #[test]
    fn lyapunov_monotonicity_all_strategies() {
        for strategy in [
            LineSearchStrategy::Armijo,
            LineSearchStrategy::MaxType { window: 5 },
            LineSearchStrategy::AverageType { eta: 0.85 },
        ] {
            synthetic_trajectory(strategy, 2000);
        }
    }

    #[test]
    fn tolerances_are_summable_when_delta_min_positive() {
        for strategy in [
            LineSearchStrategy::Armijo,
            LineSearchStrategy::AverageType { eta: 0.85 },
        ] {
            let nus = synthetic_trajectory(strategy, 10_000);
            let tail_len = nus.len().min(1000);
            let tail: f64 = nus[nus.len() - tail_len..].iter().sum();
            assert!(
                tail < 1e-8,
                "{}: tail of the tolerance series did not vanish: {tail}",
                strategy.name()
            );
        }
    }

    #[test]
    fn average_q_stays_below_geometric_limit() {
        let eta = 0.85;
        let strategy = LineSearchStrategy::AverageType { eta };
        let mut state = NonMonotoneState::new(strategy, 1.0);
        for _ in 0..10_000 {
            state = advance_state(strategy, &state, 1.0, 1.0);
            assert!(state.q <= 1.0 / (1.0 - eta) + 1e-12);
        }
    }
}
