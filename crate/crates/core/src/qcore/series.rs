use std::collections::VecDeque;

use num_complex::Complex64;

use super::ComplexSum;
use crate::{Error, Result};

/// Knobs controlling every truncated sum and quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Target tolerance for terms and tail estimates.
    pub tol: f64,
    /// Hard cap on the number of terms of any single series.
    pub max_outer: usize,
    /// Consecutive small terms required before a series may stop.
    pub stall_window: usize,
    /// Gauss-Legendre points per subinterval.
    pub quad_order: usize,
    /// Number of trailing terms used to estimate the tail.
    pub tail_fit_window: usize,
    /// Upper summation index for families indexed by an integer shift.
    pub n_max: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_outer: 2_000_000,
            stall_window: 8,
            quad_order: 16,
            tail_fit_window: 16,
            n_max: 400,
        }
    }
}

impl TruncationPolicy {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::arg(format!("tolerance must lie in (0, 1), got {}", self.tol)));
        }
        if self.max_outer == 0 || self.stall_window == 0 || self.quad_order == 0 {
            return Err(Error::arg("term caps and quadrature order must be positive"));
        }
        if self.tail_fit_window < 2 {
            return Err(Error::arg("tail_fit_window must be at least 2"));
        }
        Ok(())
    }
}

/// Value of a truncated series together with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SummationResult {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            abs_error_estimate: 0.0,
            terms_used: 0,
            converged: true,
        }
    }
}

/// How the remainder of a series is extrapolated from its last terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// `|a_k| <= C rho^k`; rho is the largest observed ratio in the window.
    Geometric,
    /// `|a_k| <= C k^{-(1+delta)}`; the remainder is bounded by `C N^{-delta} / delta`.
    PowerLaw { delta: f64 },
}

/// What "small" means for the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopScale {
    /// Compare against `tol * max(1, |partial|)` for terms and `tol` for the tail.
    Mixed,
    /// Compare against `tol * |partial|` for both.
    Relative,
}

/// Sum `terms(1) + terms(2) + ...` with the geometric tail model.
pub fn series_sum<F>(policy: &TruncationPolicy, terms: F) -> SummationResult
where
    F: FnMut(usize) -> Complex64,
{
    series_sum_with(policy, TailModel::Geometric, StopScale::Mixed, terms)
}

/// Sum `terms(k)` for `k = 1, 2, ...` until `stall_window` consecutive terms are
/// negligible and the tail estimate is within tolerance, or `max_outer` is hit.
pub fn series_sum_with<F>(
    policy: &TruncationPolicy,
    tail: TailModel,
    scale: StopScale,
    mut terms: F,
) -> SummationResult
where
    F: FnMut(usize) -> Complex64,
{
    let window = policy.tail_fit_window.max(2);
    let mut recent: VecDeque<(usize, f64)> = VecDeque::with_capacity(window + 1);
    let mut acc = ComplexSum::new();
    let mut stalled = 0usize;
    let mut k = 0usize;
    let mut err = f64::INFINITY;
    while k < policy.max_outer {
        k += 1;
        let t = terms(k);
        acc.add(t);
        let mag = t.norm();
        if !mag.is_finite() {
            return SummationResult {
                value: acc.value(),
                abs_error_estimate: f64::INFINITY,
                terms_used: k,
                converged: false,
            };
        }
        if recent.len() == window {
            recent.pop_front();
        }
        recent.push_back((k, mag));
        let partial = acc.value().norm();
        let (term_bound, tail_bound) = match scale {
            StopScale::Mixed => (policy.tol * partial.max(1.0), policy.tol),
            StopScale::Relative => (policy.tol * partial, policy.tol * partial),
        };
        if mag <= term_bound {
            stalled += 1;
        } else {
            stalled = 0;
        }
        if stalled >= policy.stall_window && recent.len() >= 2 {
            err = tail_estimate(&recent, tail);
            if err <= tail_bound {
                return SummationResult {
                    value: acc.value(),
                    abs_error_estimate: err,
                    terms_used: k,
                    converged: true,
                };
            }
        }
    }
    if recent.len() >= 2 {
        err = tail_estimate(&recent, tail);
    }
    SummationResult {
        value: acc.value(),
        abs_error_estimate: err,
        terms_used: k,
        converged: false,
    }
}

fn tail_estimate(recent: &VecDeque<(usize, f64)>, tail: TailModel) -> f64 {
    let &(last_k, last) = recent.back().expect("non-empty window");
    match tail {
        TailModel::Geometric => {
            let rho = recent
                .iter()
                .zip(recent.iter().skip(1))
                .filter(|((_, a), _)| *a > 0.0)
                .map(|((_, a), (_, b))| b / a)
                .fold(0.0f64, f64::max)
                .clamp(0.0, 0.99);
            last * rho / (1.0 - rho)
        }
        TailModel::PowerLaw { delta } => {
            let c = recent
                .iter()
                .map(|&(k, a)| a * (k as f64).powf(1.0 + delta))
                .fold(0.0f64, f64::max);
            c * (last_k as f64).powf(-delta) / delta
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let p = TruncationPolicy::default();
        let r = series_sum(&p, |k| Complex64::new(0.5f64.powi(k as i32), 0.0));
        assert!(r.converged);
        assert!((r.value.re - 1.0).abs() < 1e-15);
        assert!(r.abs_error_estimate <= p.tol);
    }

    #[test]
    fn zero_series_stops_after_window() {
        let p = TruncationPolicy::default();
        let r = series_sum(&p, |_| Complex64::new(0.0, 0.0));
        assert!(r.converged);
        assert_eq!(r.terms_used, p.stall_window);
    }

    #[test]
    fn power_law_tail_reports_remainder() {
        let p = TruncationPolicy {
            tol: 1e-6,
            max_outer: 1000,
            ..TruncationPolicy::default()
        };
        let r = series_sum_with(&p, TailModel::PowerLaw { delta: 1.0 }, StopScale::Mixed, |k| {
            Complex64::new(1.0 / (k as f64 * k as f64), 0.0)
        });
        // Stops at the cap; the tail bound must cover the true remainder 1/1000 roughly.
        assert!(!r.converged);
        let truth = std::f64::consts::PI.powi(2) / 6.0;
        assert!((truth - r.value.re) <= r.abs_error_estimate);
        assert!(r.abs_error_estimate < 2e-3);
    }

    #[test]
    fn nan_terms_abort() {
        let p = TruncationPolicy::default();
        let r = series_sum(&p, |_| Complex64::new(f64::NAN, 0.0));
        assert!(!r.converged);
    }

    #[test]
    fn relative_scale_resolves_small_sums() {
        let p = TruncationPolicy::default();
        let r = series_sum_with(&p, TailModel::Geometric, StopScale::Relative, |k| {
            Complex64::new(1e-30 * 0.5f64.powi(k as i32), 0.0)
        });
        assert!(r.converged);
        assert!((r.value.re - 1e-30).abs() < 1e-44);
    }
}
