use num_complex::Complex64;

use super::{depth_one_pole_distance, guard, shifted_lattice_distance};
use crate::qcore::{cexpm1, series_sum_with, QParam, StopScale, SummationResult, TailModel, TruncationPolicy};
use crate::{Error, Result};

/// Shared preconditions of the depth-two continuations of `zeta_q(s - alpha, alpha)`.
pub(crate) fn check_two_cont_args(s: Complex64, alpha: Complex64, q: QParam) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("continuation needs Re(s) > 1, got {s}")));
    }
    if alpha.re <= 1.0 {
        return Err(Error::Domain(format!("continuation needs Re(alpha) > 1, got {alpha}")));
    }
    guard(shifted_lattice_distance(s, 2.0, q))?;
    guard(depth_one_pole_distance(s - 1.0, q))
}

/// `zeta_q(s - alpha, alpha)` for `Re(s) > 1`, `Re(alpha) > 1` as a subtracted double series:
///
/// ```text
/// c^{-s} [ sum_{m1 >= 1} sum_{k >= 1} q^{(s-2) m1 + (alpha-1) k}
///            ((1 - q^{m1})^{alpha-s} (1 - q^{m1+k})^{-alpha} - 1)
///          + q^{alpha-1} / (1 - q^{alpha-1}) * q^{s-2} / (1 - q^{s-2}) ]
/// ```
///
/// The subtracted part is summed in closed form, which continues the series into
/// the strip `1 < Re(s) <= 2`. With [`StopScale::Relative`] both levels stop on
/// relative smallness, so tiny values keep their relative precision.
pub fn zeta_q_two_series(
    s: Complex64,
    alpha: Complex64,
    q: QParam,
    policy: &TruncationPolicy,
    scale: StopScale,
) -> Result<SummationResult> {
    policy.validate()?;
    check_two_cont_args(s, alpha, q)?;
    let lq = q.ln();
    let log1p_neg_pow = |m: f64| (-(m * lq).exp()).ln_1p();
    let mut inner_err = 0.0;
    let mut inner_ok = true;
    let outer = series_sum_with(policy, TailModel::Geometric, scale, |m1| {
        let m1f = m1 as f64;
        let head = (alpha - s) * log1p_neg_pow(m1f);
        let base = (s - 2.0) * (m1f * lq);
        let inner = series_sum_with(policy, TailModel::Geometric, scale, |k| {
            let kf = k as f64;
            let a = base + (alpha - 1.0) * (kf * lq);
            let x = head - alpha * log1p_neg_pow(m1f + kf);
            if x.re > 1.0 {
                (a + x).exp() - a.exp()
            } else {
                a.exp() * cexpm1(x)
            }
        });
        inner_err += inner.abs_error_estimate;
        inner_ok &= inner.converged;
        inner.value
    });
    let geo = |z: Complex64| (z * lq).exp() / -cexpm1(z * lq);
    let closed = geo(alpha - 1.0) * geo(s - 2.0);
    let c_pow = (-s * -(-q.get()).ln_1p()).exp();
    Ok(SummationResult {
        value: c_pow * (outer.value + closed),
        abs_error_estimate: c_pow.norm() * (outer.abs_error_estimate + inner_err),
        terms_used: outer.terms_used,
        converged: outer.converged && inner_ok,
    })
}
