//! q-integers, truncation policy and the numerical kernels shared by every
//! evaluator: compensated and log-scaled accumulation, tail-estimated series
//! summation, Gauss-Legendre quadrature and a few complex special functions.

mod accum;
mod fit;
mod quad;
mod series;
mod special;

pub use accum::{ComplexSum, Scaled, ScaledSum};
pub use fit::{fit_log_log, LogLogFit};
pub use quad::GaussRule;
pub use series::{series_sum, series_sum_with, StopScale, SummationResult, TailModel, TruncationPolicy};
pub use special::{beta_fn, cexpm1, ln_gamma};

use crate::{Error, Result};

/// A base `q` with `0 < q < 1`, together with the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam {
    q: f64,
    ln_q: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::arg(format!("q must satisfy 0 < q < 1, got {q}")));
        }
        Ok(Self { q, ln_q: q.ln() })
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.q
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.ln_q
    }

    /// `1 / (1 - q)`, the limit of `[n]_q` as `n` grows.
    #[inline]
    pub fn limit(self) -> f64 {
        1.0 / (1.0 - self.q)
    }

    /// Imaginary period `2 pi / |log q|` of `s -> q^s`.
    #[inline]
    pub fn period(self) -> f64 {
        std::f64::consts::TAU / self.ln_q.abs()
    }

    /// `q^x` for real `x`.
    #[inline]
    pub fn pow(self, x: f64) -> f64 {
        (x * self.ln_q).exp()
    }
}

/// `[m]_q = (1 - q^m) / (1 - q)`, evaluated without cancellation for small `m ln q`.
#[inline]
pub fn q_int(m: f64, q: QParam) -> f64 {
    -(m * q.ln()).exp_m1() / (1.0 - q.get())
}

/// `ln [m]_q` for `m > 0`.
#[inline]
pub fn ln_q_int(m: f64, q: QParam) -> f64 {
    (-(m * q.ln()).exp_m1()).ln() - (-q.get()).ln_1p()
}

/// Logarithm of one factor `q^{(s-1)n} / [n]_q^s`.
#[inline]
pub fn ln_q_term(s: crate::Complex64, n: u64, q: QParam) -> crate::Complex64 {
    let nf = n as f64;
    (s - 1.0) * (nf * q.ln()) - s * ln_q_int(nf, q)
}

/// One factor `q^{(s-1)n} / [n]_q^s` of the defining series.
#[inline]
pub fn q_term(s: crate::Complex64, n: u64, q: QParam) -> crate::Complex64 {
    ln_q_term(s, n, q).exp()
}

/// The q-floor: the index `n` of the largest `[n]_q` not exceeding `x`, for
/// `0 <= x < 1/(1-q)`.
pub fn lbag_index(x: f64, q: QParam) -> Result<u64> {
    if !(x >= 0.0 && x < q.limit()) {
        return Err(Error::arg(format!(
            "q-floor needs 0 <= x < {}, got {x}",
            q.limit()
        )));
    }
    let y = 1.0 - (1.0 - q.get()) * x;
    let guess = (y.ln() / q.ln()).floor().max(0.0);
    let mut n = if guess.is_finite() { guess as u64 } else { 0 };
    // Rounding in the logarithm can be off by one in either direction.
    while q_int((n + 1) as f64, q) <= x {
        n += 1;
    }
    while n > 0 && q_int(n as f64, q) > x {
        n -= 1;
    }
    Ok(n)
}

/// The q-floor value `[n]_q` with `n = lbag_index(x)`.
pub fn lbag(x: f64, q: QParam) -> Result<f64> {
    lbag_index(x, q).map(|n| q_int(n as f64, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn rejects_bad_q() {
        for v in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(QParam::new(v).is_err());
        }
    }

    #[test]
    fn q_integers_small_cases() {
        let q5 = q(0.5);
        assert!((q_int(1.0, q5) - 1.0).abs() < 1e-15);
        assert!((q_int(2.0, q5) - 1.5).abs() < 1e-15);
        assert!((q_int(3.0, q5) - 1.75).abs() < 1e-15);
        assert_eq!(q_int(0.0, q5), 0.0);
        assert!((q_int(200.0, q5) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn q_integer_near_one_matches_n() {
        let qq = q(1.0 - 1e-12);
        assert!((q_int(5.0, qq) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn lbag_examples() {
        let q5 = q(0.5);
        assert_eq!(lbag(1.2, q5).unwrap(), 1.0);
        assert_eq!(lbag(1.5, q5).unwrap(), 1.5);
        assert_eq!(lbag(0.3, q5).unwrap(), 0.0);
        assert!(lbag(2.0, q5).is_err());
        assert!(lbag(-0.1, q5).is_err());
    }

    proptest! {
        #[test]
        fn lbag_brackets_x(qv in 0.05f64..0.95, frac in 0.0f64..0.999_999) {
            let qq = q(qv);
            let x = frac * qq.limit();
            let n = lbag_index(x, qq).unwrap();
            prop_assert!(q_int(n as f64, qq) <= x);
            prop_assert!(x < q_int((n + 1) as f64, qq));
        }

        #[test]
        fn q_term_matches_direct_formula(qv in 0.1f64..0.9, s in 1.1f64..6.0, n in 1u64..60) {
            let qq = q(qv);
            let direct = qv.powf((s - 1.0) * n as f64) / q_int(n as f64, qq).powf(s);
            let got = q_term(crate::Complex64::new(s, 0.0), n, qq).re;
            prop_assert!((got - direct).abs() <= 1e-13 * direct.abs().max(1e-300));
        }
    }
}
