//! Multi-indices, the convergence domain and pole set, and the evaluators:
//! the nested series by prefix sums, plus depth-one and depth-two continuations.

mod series2;
pub(crate) mod strip;

use num_complex::Complex64;

use crate::qcore::{
    cexpm1, ln_q_term, series_sum, QParam, Scaled, ScaledSum, StopScale, SummationResult,
    TruncationPolicy,
};
use crate::{Error, Result};

pub(crate) use series2::check_two_cont_args as strip_args;
pub use series2::zeta_q_two_series;
pub use strip::zeta_q_two_cont;

/// Evaluations closer than this to a pole are rejected.
pub const POLE_GUARD: f64 = 1e-6;

/// An ordered tuple `(s_1, ..., s_r)` of finite complex arguments, `r >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndex(Vec<Complex64>);

impl MultiIndex {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::arg("multi-index must have depth at least 1"));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::arg("multi-index entries must be finite"));
        }
        Ok(Self(entries))
    }

    pub fn from_reals(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    /// Positive integers with last entry at least 2.
    pub fn is_admissible_integer(&self) -> bool {
        let int = |z: &Complex64| z.im == 0.0 && z.re >= 1.0 && z.re.fract() == 0.0;
        self.0.iter().all(int) && self.0.last().is_some_and(|z| z.re >= 2.0)
    }

    /// Entries as positive integers, if every entry is one.
    pub fn as_positive_integers(&self) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|z| {
                (z.im == 0.0 && z.re >= 1.0 && z.re.fract() == 0.0 && z.re < u32::MAX as f64)
                    .then_some(z.re as u32)
            })
            .collect()
    }
}

/// Position of an index relative to the convergence domain and the pole set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainReport {
    pub in_domain: bool,
    /// `min_k Re(s_{r-k+1} + ... + s_r) - k`.
    pub margin: f64,
    pub pole_distance: f64,
    pub admissible_integer: bool,
}

pub fn convergence_margin(index: &MultiIndex, q: QParam) -> DomainReport {
    let mut tail = 0.0;
    let mut margin = f64::INFINITY;
    for (k, z) in index.entries().iter().rev().enumerate() {
        tail += z.re;
        margin = margin.min(tail - (k + 1) as f64);
    }
    DomainReport {
        in_domain: margin > 0.0,
        margin,
        pole_distance: pole_distance(index, q),
        admissible_integer: index.is_admissible_integer(),
    }
}

/// Distance from `y` to `period * Z`, or to `period * (Z \ {0})`.
fn imag_lattice_distance(y: f64, period: f64, nonzero: bool) -> f64 {
    let mut k = (y / period).round();
    if nonzero && k == 0.0 {
        k = if y >= 0.0 { 1.0 } else { -1.0 };
    }
    (y - k * period).abs()
}

/// Distance from `x` to the integers not exceeding `top`.
fn integer_ray_distance(x: f64, top: i64) -> f64 {
    let top = top as f64;
    if x >= top {
        x - top
    } else {
        (x - x.round()).abs()
    }
}

/// Distance of `s` to the depth-one pole set `{1 + iPZ} u {Z<=0 + iP(Z\{0})}`.
pub fn depth_one_pole_distance(s: Complex64, q: QParam) -> f64 {
    let p = q.period();
    let at_one = (s.re - 1.0).hypot(imag_lattice_distance(s.im, p, false));
    let ray = integer_ray_distance(s.re, 0).hypot(imag_lattice_distance(s.im, p, true));
    at_one.min(ray)
}

/// Distance of `s` to the lattice `point + iPZ`.
pub fn shifted_lattice_distance(s: Complex64, point: f64, q: QParam) -> f64 {
    (s.re - point).hypot(imag_lattice_distance(s.im, q.period(), false))
}

pub fn pole_distance(index: &MultiIndex, q: QParam) -> f64 {
    let p = q.period();
    let e = index.entries();
    let mut best = depth_one_pole_distance(e[e.len() - 1], q);
    let mut tail = e[e.len() - 1];
    for (k, z) in e.iter().rev().enumerate().skip(1) {
        tail += z;
        let len = (k + 1) as i64;
        let d = integer_ray_distance(tail.re, len).hypot(imag_lattice_distance(tail.im, p, false));
        best = best.min(d);
    }
    best
}

fn guard(distance: f64) -> Result<()> {
    if distance < POLE_GUARD {
        Err(Error::PoleProximity {
            distance,
            guard: POLE_GUARD,
        })
    } else {
        Ok(())
    }
}

/// Reject indices outside the domain or within the pole guard.
pub fn check_domain(index: &MultiIndex, q: QParam) -> Result<DomainReport> {
    let report = convergence_margin(index, q);
    if !report.in_domain {
        return Err(Error::Domain(format!(
            "margin {:.6} <= 0 for index {:?}",
            report.margin,
            index.entries()
        )));
    }
    guard(report.pole_distance)?;
    Ok(report)
}

/// `zeta_q(s_1, ..., s_r)` by prefix sums over the rightmost summation variable.
///
/// Inner partial sums are kept in log-scaled form so that entries with large
/// negative real part (whose inner sums grow like `q^{-nM}`) do not overflow.
pub fn zeta_q(index: &MultiIndex, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    policy.validate()?;
    check_domain(index, q)?;
    Ok(zeta_q_unchecked(index, q, policy, StopScale::Mixed))
}

pub(crate) fn zeta_q_unchecked(
    index: &MultiIndex,
    q: QParam,
    policy: &TruncationPolicy,
    scale: StopScale,
) -> SummationResult {
    let s = index.entries();
    let r = s.len();
    // partial[j] = sum over n_1 < ... < n_j < M of the first j factors.
    let mut partial = vec![ScaledSum::new(); r];
    let value_of = |p: &[ScaledSum], j: usize| if j == 0 { Scaled::ONE } else { p[j].value() };
    crate::qcore::series_sum_with(policy, crate::qcore::TailModel::Geometric, scale, |m| {
        let m = m as u64;
        let last = Scaled::from_ln(ln_q_term(s[r - 1], m, q));
        let inc = last.times(value_of(&partial, r - 1)).to_complex();
        for j in (1..r).rev() {
            let t = Scaled::from_ln(ln_q_term(s[j - 1], m, q));
            let add = t.times(value_of(&partial, j - 1));
            partial[j].add(add);
        }
        inc
    })
}

/// Depth-one `zeta_q(w)` continued to `Re(w) > 0` by subtracting the
/// geometric part: `c^{-w} [sum_m q^{(w-1)m} ((1-q^m)^{-w} - 1) + q^{w-1}/(1-q^{w-1})]`.
pub fn zeta_q_one_cont(w: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    policy.validate()?;
    if w.re <= 0.0 {
        return Err(Error::Domain(format!("depth-one continuation needs Re(w) > 0, got {w}")));
    }
    guard(depth_one_pole_distance(w, q))?;
    let lq = q.ln();
    let ln_c = -(-q.get()).ln_1p();
    let head = series_sum(policy, |m| {
        let mf = m as f64;
        let l1 = (-(mf * lq).exp()).ln_1p();
        ((w - 1.0) * mf * lq).exp() * cexpm1(-w * l1)
    });
    let qw1 = ((w - 1.0) * lq).exp();
    let geometric = qw1 / -cexpm1((w - 1.0) * lq);
    let scale = (-w * ln_c).exp();
    Ok(SummationResult {
        value: scale * (head.value + geometric),
        abs_error_estimate: scale.norm() * head.abs_error_estimate,
        terms_used: head.terms_used,
        converged: head.converged,
    })
}
