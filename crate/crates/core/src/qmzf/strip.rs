//! Depth-two continuation of `zeta_q(s - alpha, alpha)` through the q-floor
//! integral representation.
//!
//! With `c = 1/(1-q)`, `y = 1 - (1-q) x` and `x` ranging over the pieces
//! `[[n]_q, [n+1]_q)`, the representation reads
//!
//! ```text
//! zeta_q(s - alpha, alpha) = -alpha H1 + zeta_q(s - 1) / (alpha - 1)
//! H1 = sum_m q^{(s-2)m} int_0^c I_m(x) dx
//! I_m(x) = c^{-s} (1-q^m)^{alpha-s} y^{alpha-2} (1 - q^m y)^{-alpha-1} (x - lbag x) / (c - lbag x)
//! ```
//!
//! The `m`-sum only converges for `Re(s) > 2`. Subtracting the pointwise limit
//! `I_inf` (drop both `m`-dependent factors) and summing its `m`-series in closed
//! form extends it to `Re(s) > 1`; `int I_inf dx = c^{1-s} B(alpha)` with
//! `B(a) = 1/(a-1) - (1-q^a) / (a (1-q^{a-1}))`.
//!
//! Integration runs in `tau` with `y = q^tau`: piece `n` is `tau in [n, n+1]`,
//! the ramp is `1 - q^{tau-n}` and the envelope is `q^{tau (alpha-1)}`. Each
//! unit piece is split into equal subintervals so that the envelope decays by
//! at most `e^KAPPA` across any of them.

use num_complex::Complex64;

use super::series2::check_two_cont_args;
use super::zeta_q_one_cont;
use crate::qcore::{cexpm1, series_sum, GaussRule, QParam, SummationResult, TruncationPolicy};
use crate::{Error, Result};

const KAPPA: f64 = 4.0;
const MAX_SUBDIVISIONS: usize = 256;
const MAX_PIECES: usize = 50_000;

/// Which weighted integral the kernel evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flavor {
    /// `int I_m`.
    Plain,
    /// `int L_m I_m` with `L_m = -ln y + ln(1 - q^m y) - ln(1 - q^m)`.
    LogWeighted,
}

struct Node {
    ln_y: f64,
    y: f64,
    weight: Complex64,
}

/// Quadrature table in `tau` shared by every `m`.
pub(crate) struct StripKernel {
    q: QParam,
    s: Complex64,
    alpha: Complex64,
    nodes: Vec<Node>,
    truncated: bool,
}

impl StripKernel {
    pub(crate) fn new(s: Complex64, alpha: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<Self> {
        let lq = q.ln();
        let rule = GaussRule::new(policy.quad_order)?;
        let rate = (alpha.re - 1.0) * lq.abs();
        if rate <= 0.0 {
            return Err(Error::Domain(format!("Re(alpha) must exceed 1, got {alpha}")));
        }
        let subdivisions = ((rate.max(lq.abs()) / KAPPA).ceil() as usize).clamp(1, MAX_SUBDIVISIONS);
        // Past tau_stop the envelope is below tol relative to its peak.
        let tau_stop = ((1.0 / policy.tol).ln() + 2.0) / rate;
        let wanted = tau_stop.ceil().max(1.0) as usize;
        let pieces = wanted.min(MAX_PIECES);
        let ln_c = -(-q.get()).ln_1p();
        let prefactor = ((1.0 - s) * ln_c).exp() * lq.abs();
        let h = 1.0 / subdivisions as f64;
        let mut nodes = Vec::with_capacity(pieces * subdivisions * rule.order());
        for n in 0..pieces {
            for j in 0..subdivisions {
                let lo = j as f64 * h;
                for (w, gw) in rule.mapped(lo, lo + h) {
                    let tau = n as f64 + w;
                    let ln_y = tau * lq;
                    let ramp = -(w * lq).exp_m1();
                    let envelope = ((alpha - 1.0) * ln_y).exp();
                    nodes.push(Node {
                        ln_y,
                        y: ln_y.exp(),
                        weight: prefactor * envelope * (gw * ramp),
                    });
                }
            }
        }
        Ok(Self {
            q,
            s,
            alpha,
            nodes,
            truncated: wanted > MAX_PIECES,
        })
    }

    /// `int_0^c (F I_m - F_inf I_inf) dx` for the chosen flavor `F`.
    pub(crate) fn subtracted_integral(&self, m: usize, flavor: Flavor) -> Complex64 {
        let qm = self.q.pow(m as f64);
        let l_m = (-qm).ln_1p();
        let mut acc = crate::qcore::ComplexSum::new();
        for node in &self.nodes {
            let l_y = (-qm * node.y).ln_1p();
            let e = cexpm1((self.alpha - self.s) * l_m - (self.alpha + 1.0) * l_y);
            let v = match flavor {
                Flavor::Plain => e,
                Flavor::LogWeighted => {
                    let shift = l_y - l_m;
                    (shift - node.ln_y) * e + shift
                }
            };
            acc.add(node.weight * v);
        }
        acc.value()
    }

    /// `sum_m q^{(s-2)m} int (F I_m - F_inf I_inf) dx`.
    pub(crate) fn subtracted_series(&self, flavor: Flavor, policy: &TruncationPolicy) -> SummationResult {
        let lq = self.q.ln();
        let mut r = series_sum(policy, |m| {
            ((self.s - 2.0) * (m as f64 * lq)).exp() * self.subtracted_integral(m, flavor)
        });
        r.converged &= !self.truncated;
        r
    }
}

/// `B(a) = 1/(a-1) - (1-q^a) / (a (1-q^{a-1}))`; `c^{1-s} B` is `int I_inf dx`.
pub(crate) fn limit_integral(alpha: Complex64, q: QParam) -> Complex64 {
    let lq = q.ln();
    let f = -cexpm1(alpha * lq) / (alpha * -cexpm1((alpha - 1.0) * lq));
    1.0 / (alpha - 1.0) - f
}

/// Derivative of [`limit_integral`] in `alpha`.
pub(crate) fn limit_integral_derivative(alpha: Complex64, q: QParam) -> Complex64 {
    let lq = q.ln();
    let qa = (alpha * lq).exp();
    let qa1 = ((alpha - 1.0) * lq).exp();
    let f = -cexpm1(alpha * lq) / (alpha * -cexpm1((alpha - 1.0) * lq));
    let dlog_f = -qa * lq / -cexpm1(alpha * lq) - 1.0 / alpha + qa1 * lq / -cexpm1((alpha - 1.0) * lq);
    -1.0 / ((alpha - 1.0) * (alpha - 1.0)) - f * dlog_f
}

/// `c^{1-s} q^{s-2} / (1 - q^{s-2})`, the `m`-sum of the subtracted limit terms.
fn limit_series_factor(s: Complex64, q: QParam) -> Complex64 {
    let lq = q.ln();
    let ln_c = -(-q.get()).ln_1p();
    ((1.0 - s) * ln_c).exp() * ((s - 2.0) * lq).exp() / -cexpm1((s - 2.0) * lq)
}

/// The continued `H1` and `H2` integrals together with `zeta_q(s - 1)`.
pub(crate) struct StripParts {
    pub h1: SummationResult,
    pub zeta_shift: SummationResult,
}

pub(crate) fn h1_continued(
    kernel: &StripKernel,
    policy: &TruncationPolicy,
) -> SummationResult {
    let mut r = kernel.subtracted_series(Flavor::Plain, policy);
    r.value += limit_integral(kernel.alpha, kernel.q) * limit_series_factor(kernel.s, kernel.q);
    r
}

pub(crate) fn h2_continued(
    kernel: &StripKernel,
    policy: &TruncationPolicy,
) -> SummationResult {
    let mut r = kernel.subtracted_series(Flavor::LogWeighted, policy);
    r.value -= limit_integral_derivative(kernel.alpha, kernel.q) * limit_series_factor(kernel.s, kernel.q);
    r
}

pub(crate) fn strip_parts(
    s: Complex64,
    alpha: Complex64,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<StripParts> {
    policy.validate()?;
    check_two_cont_args(s, alpha, q)?;
    let kernel = StripKernel::new(s, alpha, q, policy)?;
    Ok(StripParts {
        h1: h1_continued(&kernel, policy),
        zeta_shift: zeta_q_one_cont(s - 1.0, q, policy)?,
    })
}

/// `zeta_q(s - alpha, alpha)` for `Re(s) > 1`, `Re(alpha) > 1` by piecewise
/// Gauss-Legendre quadrature of the q-floor representation.
pub fn zeta_q_two_cont(
    s: Complex64,
    alpha: Complex64,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<SummationResult> {
    let parts = strip_parts(s, alpha, q, policy)?;
    let am1 = alpha - 1.0;
    Ok(SummationResult {
        value: -alpha * parts.h1.value + parts.zeta_shift.value / am1,
        abs_error_estimate: alpha.norm() * parts.h1.abs_error_estimate
            + parts.zeta_shift.abs_error_estimate / am1.norm(),
        terms_used: parts.h1.terms_used,
        converged: parts.h1.converged && parts.zeta_shift.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{lbag, StopScale};
    use crate::qmzf::{zeta_q, zeta_q_two_series, MultiIndex};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_direct_series_above_two() {
        let p = TruncationPolicy::default();
        for qv in [0.3, 0.5, 0.8] {
            let q = QParam::new(qv).unwrap();
            for (s, a) in [(c(4.0, 0.0), c(2.5, 0.0)), (c(2.7, 0.8), c(1.5, 0.3)), (c(3.0, 0.0), c(6.0, 0.0))] {
                let direct = zeta_q(&MultiIndex::new(vec![s - a, a]).unwrap(), q, &p).unwrap();
                let cont = zeta_q_two_cont(s, a, q, &p).unwrap();
                assert!(cont.converged);
                assert!((direct.value - cont.value).norm() < 1e-10, "{qv} {s} {a}: {} vs {}", direct.value, cont.value);
            }
        }
    }

    #[test]
    fn matches_double_series_in_strip() {
        let p = TruncationPolicy::default();
        for qv in [0.3, 0.5, 0.8] {
            let q = QParam::new(qv).unwrap();
            for (s, a) in [(c(1.5, 0.0), c(2.0, 0.0)), (c(1.8, 0.5), c(3.5, -1.0)), (c(1.2, 0.0), c(20.0, 0.0))] {
                let series = zeta_q_two_series(s, a, q, &p, StopScale::Mixed).unwrap();
                let cont = zeta_q_two_cont(s, a, q, &p).unwrap();
                assert!((series.value - cont.value).norm() < 1e-10, "{qv} {s} {a}: {} vs {}", series.value, cont.value);
            }
        }
    }

    #[test]
    fn excluded_point() {
        let q = QParam::new(0.5).unwrap();
        assert!(matches!(
            zeta_q_two_cont(c(2.0, 0.0), c(2.0, 0.0), q, &TruncationPolicy::default()),
            Err(Error::PoleProximity { .. })
        ));
    }

    /// Brute-force `int_0^c I_inf dx` directly in `x` with the q-floor.
    fn limit_integral_by_quadrature(s: f64, alpha: f64, q: QParam) -> f64 {
        let rule = GaussRule::new(32).unwrap();
        let cc = q.limit();
        let mut total = 0.0;
        for n in 0..200u64 {
            let lo = crate::qcore::q_int(n as f64, q);
            let hi = crate::qcore::q_int((n + 1) as f64, q);
            if hi >= cc || hi - lo < 1e-17 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if n < 20 {
                assert_eq!(lbag(mid, q).unwrap(), lo);
            }
            total += rule
                .integrate(lo, hi, |x| {
                    let y = 1.0 - (1.0 - q.get()) * x;
                    let f = lo;
                    let v = cc.powf(-s) * y.powf(alpha - 2.0) * (x - f) / (cc - f);
                    Complex64::new(v, 0.0)
                })
                .re;
        }
        total
    }

    #[test]
    fn limit_integral_closed_form() {
        for qv in [0.3, 0.5, 0.8] {
            let q = QParam::new(qv).unwrap();
            for alpha in [2.5, 3.0, 7.0] {
                let s = 1.7;
                let closed = q.limit().powf(1.0 - s) * limit_integral(c(alpha, 0.0), q).re;
                let quad = limit_integral_by_quadrature(s, alpha, q);
                assert!((closed - quad).abs() < 1e-12, "{qv} {alpha}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn limit_integral_derivative_by_difference() {
        let q = QParam::new(0.5).unwrap();
        for a in [c(1.5, 0.0), c(4.0, 1.0)] {
            let h = 1e-5;
            let fd = (limit_integral(a + h, q) - limit_integral(a - h, q)) / (2.0 * h);
            assert!((fd - limit_integral_derivative(a, q)).norm() < 1e-8);
        }
    }
}
