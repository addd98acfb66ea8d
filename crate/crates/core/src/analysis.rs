//! Identities and estimates behind the interpolated sum formula: a telescoping
//! identity for reciprocal q-integers, the integral representation of
//! `zeta_q(s - alpha, alpha)` and its `alpha`-derivative, pointwise
//! comparisons with the classical integrand, and log-log decay fits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qcore::{
    fit_log_log, ln_q_int, q_int, series_sum, QParam, SummationResult, TruncationPolicy,
};
use crate::qmzf::strip::{h1_continued, h2_continued, StripKernel};
use crate::qmzf::{check_domain, zeta_q, zeta_q_one_cont, zeta_q_two_cont, MultiIndex, POLE_GUARD};
use crate::sumformula::{interpolated_summand, SumFormulaReport, SummandRoute};
use crate::{Error, Result};

/// `sum_{m > 0} (1/[m] - 1/[m + m1])` against `sum_{j <= m1} 1/[j] - m1 (1 - q)`.
pub fn lemma1_check(m1: u64, q: QParam, policy: &TruncationPolicy) -> Result<SumFormulaReport> {
    if m1 == 0 {
        return Err(Error::arg("m1 must be positive"));
    }
    let qv = q.get();
    let lhs = series_sum(policy, |m| {
        let qm = q.pow(m as f64);
        let qmm = q.pow((m as u64 + m1) as f64);
        // 1/[m] - 1/[m + m1] without cancellation.
        let v = (1.0 - qv) * (qm - qmm) / ((1.0 - qm) * (1.0 - qmm));
        Complex64::new(v, 0.0)
    });
    let mut acc = crate::qcore::ComplexSum::new();
    for j in 1..=m1 {
        acc.add(Complex64::new(1.0 / q_int(j as f64, q), 0.0));
    }
    acc.add(Complex64::new(-(m1 as f64) * (1.0 - qv), 0.0));
    let rhs = SummationResult::exact(acc.value());
    Ok(SumFormulaReport::new(&lhs, &rhs, "telescoping identity for reciprocal q-integers"))
}

fn alpha_pole_guard(alpha: Complex64) -> Result<()> {
    let distance = (alpha - 1.0).norm();
    if distance < POLE_GUARD {
        return Err(Error::PoleProximity {
            distance,
            guard: POLE_GUARD,
        });
    }
    Ok(())
}

/// `int_0^{q^{m2-1}} dt / ([m2]_q - t)^alpha = ([m2-1]^{1-alpha} - [m2]^{1-alpha}) / (alpha - 1)`.
pub fn inner_integral(m2: u64, alpha: Complex64, q: QParam) -> Result<Complex64> {
    if m2 < 2 {
        return Err(Error::arg("inner integral needs m2 >= 2"));
    }
    alpha_pole_guard(alpha)?;
    let e = 1.0 - alpha;
    let lo = (e * ln_q_int((m2 - 1) as f64, q)).exp();
    let hi = (e * ln_q_int(m2 as f64, q)).exp();
    Ok((lo - hi) / (alpha - 1.0))
}

/// `int_{[m2]-1}^{[m2]} u^{-alpha} du`, where `[m2]_q - 1 = q [m2-1]_q`.
pub fn shifted_inner_integral(m2: u64, alpha: Complex64, q: QParam) -> Result<Complex64> {
    if m2 < 2 {
        return Err(Error::arg("inner integral needs m2 >= 2"));
    }
    alpha_pole_guard(alpha)?;
    let e = 1.0 - alpha;
    let lo = (e * (q.ln() + ln_q_int((m2 - 1) as f64, q))).exp();
    let hi = (e * ln_q_int(m2 as f64, q)).exp();
    Ok((lo - hi) / (alpha - 1.0))
}

/// Direct `zeta_q(s - alpha, alpha)` against its integral representation
///
/// ```text
/// sum_{m1} q^{(s-alpha-1) m1} [m1]^{alpha-s}
///     sum_{m2 > m1} q^{(alpha-1) m2} ([m2]^{-alpha} - int_{[m2]-1}^{[m2]} u^{-alpha} du)
///   + zeta_q(s - 1) / (alpha - 1)
/// ```
///
/// valid for `Re(s) > 2`, `Re(alpha) > 1`.
pub fn lemma2_check(s: Complex64, alpha: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<SumFormulaReport> {
    alpha_pole_guard(alpha)?;
    if alpha.re <= 1.0 || s.re <= 2.0 {
        return Err(Error::Domain(format!(
            "integral representation check needs Re(alpha) > 1 and Re(s) > 2, got s = {s}, alpha = {alpha}"
        )));
    }
    let index = MultiIndex::new(vec![s - alpha, alpha])?;
    let lhs = zeta_q(&index, q, policy)?;
    let shift_index = MultiIndex::new(vec![s - 1.0])?;
    check_domain(&shift_index, q)?;
    let zeta_shift = zeta_q(&shift_index, q, policy)?;
    let lq = q.ln();
    let mut inner_err = 0.0;
    let mut inner_ok = true;
    let mut failure = None;
    let outer = series_sum(policy, |m1| {
        let m1f = m1 as f64;
        let weight = ((s - 2.0) * (m1f * lq) + (alpha - s) * ln_q_int(m1f, q)).exp();
        let inner = series_sum(policy, |k| {
            let m2 = (m1 + k) as u64;
            let point = (-alpha * ln_q_int(m2 as f64, q)).exp();
            match shifted_inner_integral(m2, alpha, q) {
                Ok(integral) => ((alpha - 1.0) * (k as f64 * lq)).exp() * (point - integral),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        });
        inner_err += weight.norm() * inner.abs_error_estimate;
        inner_ok &= inner.converged;
        weight * inner.value
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let rhs = SummationResult {
        value: outer.value + zeta_shift.value / (alpha - 1.0),
        abs_error_estimate: outer.abs_error_estimate + inner_err + zeta_shift.abs_error_estimate / (alpha - 1.0).norm(),
        terms_used: outer.terms_used + zeta_shift.terms_used,
        converged: outer.converged && inner_ok && zeta_shift.converged,
    };
    Ok(SumFormulaReport::new(
        &lhs,
        &rhs,
        "q-weighted representation: outer weight q^{(s-alpha-1)m1}, inner integral over [[m2]-1, [m2]] weighted by q^{(alpha-1)m2}",
    ))
}

/// Selector for [`h_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HKind {
    /// `sum_m q^{(s-2)m} int I_m dx`.
    One,
    /// `sum_m q^{(s-2)m} int L_m I_m dx`, equal to `-d/dalpha` of `One`.
    Two,
    /// `zeta_q(s - 1) / (alpha - 1)^2`.
    Three,
}

fn check_h_args(s: Complex64, alpha: Complex64, q: QParam) -> Result<()> {
    // Same preconditions as the continuation itself.
    crate::qmzf::strip_args(s, alpha, q)
}

/// The three pieces of the `alpha`-derivative of `zeta_q(s - alpha, alpha)`:
/// `d/dalpha zeta_q(s - alpha, alpha) = -H1 + alpha H2 - H3`.
pub fn h_function(kind: HKind, s: Complex64, alpha: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    policy.validate()?;
    check_h_args(s, alpha, q)?;
    match kind {
        HKind::Three => {
            let z = zeta_q_one_cont(s - 1.0, q, policy)?;
            let d = (alpha - 1.0) * (alpha - 1.0);
            Ok(SummationResult {
                value: z.value / d,
                abs_error_estimate: z.abs_error_estimate / d.norm(),
                ..z
            })
        }
        HKind::One | HKind::Two => {
            let kernel = StripKernel::new(s, alpha, q, policy)?;
            Ok(if kind == HKind::One {
                h1_continued(&kernel, policy)
            } else {
                h2_continued(&kernel, policy)
            })
        }
    }
}

/// Finite-difference derivative against `-H1 + alpha H2 - H3`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub report: SumFormulaReport,
    /// `|lhs - rhs| / |rhs|`.
    pub relative_diff: f64,
    pub step: f64,
}

/// Central difference of `zeta_q_two_cont(s, .)` at `alpha`, step `1e-4 max(1, |alpha|)`.
pub fn dalpha_zeta_check(s: Complex64, alpha: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<DerivativeReport> {
    let h = 1e-4 * alpha.norm().max(1.0);
    let up = zeta_q_two_cont(s, alpha + h, q, policy)?;
    let down = zeta_q_two_cont(s, alpha - h, q, policy)?;
    let lhs = SummationResult {
        value: (up.value - down.value) / (2.0 * h),
        abs_error_estimate: (up.abs_error_estimate + down.abs_error_estimate) / (2.0 * h),
        terms_used: up.terms_used + down.terms_used,
        converged: up.converged && down.converged,
    };
    let h1 = h_function(HKind::One, s, alpha, q, policy)?;
    let h2 = h_function(HKind::Two, s, alpha, q, policy)?;
    let h3 = h_function(HKind::Three, s, alpha, q, policy)?;
    let rhs = SummationResult {
        value: -h1.value + alpha * h2.value - h3.value,
        abs_error_estimate: h1.abs_error_estimate + alpha.norm() * h2.abs_error_estimate + h3.abs_error_estimate,
        terms_used: h1.terms_used + h2.terms_used + h3.terms_used,
        converged: h1.converged && h2.converged && h3.converged,
    };
    let report = SumFormulaReport::new(&lhs, &rhs, format!("central difference, step {h:.3e}"));
    let relative_diff = report.abs_diff / report.rhs.norm();
    Ok(DerivativeReport {
        report,
        relative_diff,
        step: h,
    })
}

/// Whether the q-integrand is dominated by the classical one at `(m, u)`:
///
/// ```text
/// [m]^{a+1} q^{2(m-1)} / ([m]^{s+1} ([m] + q^{m-1} u)^{a+1}) <= m^{a+1} / (m^{s+1} (m + u)^{a+1})
/// ```
///
/// and the same with the extra factors `log(1 + q^{m-1} u / [m])` and
/// `log(1 + u / m)`. Both comparisons are made in log space.
pub fn check_pointwise_bounds(m: u64, u: f64, alpha: f64, s: f64, q: QParam) -> (bool, bool) {
    const SLACK: f64 = 1e-12;
    let mf = m as f64;
    let lm = ln_q_int(mf, q);
    let lqm1 = (mf - 1.0) * q.ln();
    // ln([m] + q^{m-1} u) - ln [m] and ln(m + u) - ln m.
    let q_ratio = ((lqm1 - lm).exp() * u).ln_1p();
    let c_ratio = (u / mf).ln_1p();
    let lhs = (alpha + 1.0) * lm - (s + 1.0) * lm - (alpha + 1.0) * (lm + q_ratio) + 2.0 * lqm1;
    let rhs = (alpha + 1.0) * mf.ln() - (s + 1.0) * mf.ln() - (alpha + 1.0) * (mf.ln() + c_ratio);
    let plain = lhs <= rhs + SLACK * rhs.abs().max(1.0);
    let logged = if u == 0.0 {
        // Both sides vanish.
        true
    } else {
        let lhs_log = lhs + q_ratio.ln();
        let rhs_log = rhs + c_ratio.ln();
        lhs_log <= rhs_log + SLACK * rhs_log.abs().max(1.0)
    };
    (plain, logged)
}

/// Result of [`pointwise_bound_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundScan {
    pub points: usize,
    pub plain_violations: usize,
    pub log_violations: usize,
    /// `(m, u, alpha, s, q)` of the first failing point, if any.
    pub first_violation: Option<(u64, f64, f64, f64, f64)>,
}

/// Check [`check_pointwise_bounds`] at `points` seeded random samples with
/// `m <= 100`, `u <= 1000`, `alpha in (1, 20]`, `s in (1, 2)`, `q in {0.1, ..., 0.9}`.
pub fn pointwise_bound_scan(points: usize, seed: u64) -> BoundScan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scan = BoundScan {
        points,
        plain_violations: 0,
        log_violations: 0,
        first_violation: None,
    };
    for _ in 0..points {
        let m = rng.random_range(1..=100u64);
        let u = rng.random_range(0.0..=1e3);
        let alpha = 20.0 - rng.random_range(0.0..19.0);
        let s = 1.0 + rng.random_range(f64::EPSILON..1.0);
        let qv = rng.random_range(1..=9u32) as f64 / 10.0;
        let q = QParam::new(qv).expect("grid q is valid");
        let (plain, logged) = check_pointwise_bounds(m, u, alpha, s, q);
        scan.plain_violations += usize::from(!plain);
        scan.log_violations += usize::from(!logged);
        if !(plain && logged) && scan.first_violation.is_none() {
            scan.first_violation = Some((m, u, alpha, s, qv));
        }
    }
    scan
}

/// Quantity whose decay is fitted by [`tail_decay_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayKind {
    /// `|H1(s, alpha)|` against `alpha`.
    H1Alpha,
    /// `|H2(s, alpha)|` against `alpha`.
    H2Alpha,
    /// `|zeta_q(s-n-2, n+2) - zeta_q(-n, s+n)|` against `n`.
    Thm3Terms,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Log-log slope.
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
    /// Sample points `(x, |value|)` used in the fit.
    pub samples: Vec<(f64, f64)>,
}

impl DecayKind {
    /// Largest exponent the asymptotic estimate allows, plus `0.15` for finite-range bias.
    pub fn exponent_ceiling(self, s: Complex64) -> f64 {
        match self {
            DecayKind::H1Alpha => -s.re + 0.15,
            DecayKind::H2Alpha => -(s.re + 1.0) + 0.15,
            DecayKind::Thm3Terms => {
                let delta = (s.re - 1.0).min(1.0) * (1.0 - 1e-3);
                -(1.0 + delta) + 0.15
            }
        }
    }
}

/// Least-squares slope of `ln |quantity|` against `ln x` for every integer `x` in `range`.
pub fn tail_decay_fit(
    kind: DecayKind,
    s: Complex64,
    q: QParam,
    range: (u64, u64),
    policy: &TruncationPolicy,
) -> Result<DecayFit> {
    let (lo, hi) = range;
    if lo < 1 || hi <= lo {
        return Err(Error::arg(format!("decay window must satisfy 1 <= lo < hi, got {lo}..{hi}")));
    }
    match kind {
        DecayKind::H1Alpha | DecayKind::H2Alpha if !(s.im == 0.0 && s.re > 1.0 && s.re < 2.0) => {
            return Err(Error::Domain(format!("alpha-decay fits need real s in (1, 2), got {s}")));
        }
        DecayKind::Thm3Terms if s.im.abs() > 3.0 => {
            return Err(Error::Domain(format!("term-decay fits need |Im s| <= 3, got {s}")));
        }
        _ => {}
    }
    let samples = (lo..=hi)
        .map(|x| {
            let v = match kind {
                DecayKind::H1Alpha => h_function(HKind::One, s, Complex64::new(x as f64, 0.0), q, policy)?.value,
                DecayKind::H2Alpha => h_function(HKind::Two, s, Complex64::new(x as f64, 0.0), q, policy)?.value,
                DecayKind::Thm3Terms => interpolated_summand(s, x, q, policy, SummandRoute::DoubleSeries)?.value,
            };
            Ok((x as f64, v.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_log_log(&samples).ok_or_else(|| Error::arg("decay fit needs two positive samples"))?;
    Ok(DecayFit {
        exponent: fit.slope,
        amplitude: fit.intercept.exp(),
        r_squared: fit.r_squared,
        window: range,
        samples,
    })
}
