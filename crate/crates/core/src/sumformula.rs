//! Weighted sum formulas: the integer identity over `I_0(k, r)`, the
//! interpolated depth-two family
//! `sum_n zeta_q(s-n-2, n+2) - zeta_q(-n, s+n) = zeta_q(s)`, and its
//! generalisation `G^{(a,b)}`, evaluated both by its defining recursion and in
//! closed form through weakly increasing chain sums.

use num_complex::Complex64;

use crate::chain::{chain_sums, chain_weight};
use crate::qcore::{
    fit_log_log, ln_q_int, ln_q_term, series_sum, series_sum_with, QParam, Scaled, StopScale,
    SummationResult, TailModel, TruncationPolicy,
};
use crate::qmzf::{
    check_domain, shifted_lattice_distance, zeta_q, zeta_q_two_cont, zeta_q_two_series, MultiIndex,
    POLE_GUARD,
};
use crate::{Error, Result};

/// Outcome of comparing two evaluations of the same quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SumFormulaReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs - rhs|`.
    pub abs_diff: f64,
    pub terms_used: usize,
    /// Combined truncation error estimate of both sides.
    pub tail_estimate: f64,
    pub convention_note: String,
    /// Both sides met their stopping rule.
    pub converged: bool,
    /// Disagreement with an independent second evaluation, where one exists.
    pub cross_check_diff: Option<f64>,
}

impl SumFormulaReport {
    pub fn new(lhs: &SummationResult, rhs: &SummationResult, note: impl Into<String>) -> Self {
        Self {
            lhs: lhs.value,
            rhs: rhs.value,
            abs_diff: (lhs.value - rhs.value).norm(),
            terms_used: lhs.terms_used + rhs.terms_used,
            tail_estimate: lhs.abs_error_estimate + rhs.abs_error_estimate,
            convention_note: note.into(),
            converged: lhs.converged && rhs.converged,
            cross_check_diff: None,
        }
    }
}

/// Compositions of `k` into `r` positive parts with last part at least 2, in
/// lexicographic order.
pub fn enumerate_i0(k: u32, r: u32) -> Result<Vec<MultiIndex>> {
    if r < 1 || r + 1 > k {
        return Err(Error::arg(format!("need 1 <= r <= k - 1, got k = {k}, r = {r}")));
    }
    fn rec(remaining: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            if remaining >= 2 {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        // Leave at least 1 for each later slot and 2 for the last one.
        for part in 1..=remaining.saturating_sub(slots) {
            cur.push(part);
            rec(remaining - part, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, r, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|v| MultiIndex::from_reals(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()))
        .collect()
}

fn sum_results(parts: impl IntoIterator<Item = SummationResult>) -> SummationResult {
    let mut acc = crate::qcore::ComplexSum::new();
    let mut out = SummationResult::exact(Complex64::new(0.0, 0.0));
    for p in parts {
        acc.add(p.value);
        out.abs_error_estimate += p.abs_error_estimate;
        out.terms_used += p.terms_used;
        out.converged &= p.converged;
    }
    out.value = acc.value();
    out
}

/// `sum_{k in I_0(k, r)} zeta_q(k)` against `zeta_q(k)`.
pub fn check_sum_formula_qmzv(
    k: u32,
    r: u32,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<SumFormulaReport> {
    let indices = enumerate_i0(k, r)?;
    let lhs = sum_results(
        indices
            .iter()
            .map(|idx| zeta_q(idx, q, policy))
            .collect::<Result<Vec<_>>>()?,
    );
    let rhs = zeta_q(&MultiIndex::from_reals(&[k as f64])?, q, policy)?;
    Ok(SumFormulaReport::new(
        &lhs,
        &rhs,
        format!("sum over {} admissible indices of weight {k}, depth {r}", indices.len()),
    ))
}

fn interpolation_delta(s: Complex64, shift: f64) -> f64 {
    (s.re - shift).min(1.0) * (1.0 - 1e-3)
}

fn check_interpolation_args(s: Complex64, q: QParam) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("interpolated sum needs Re(s) > 1, got {s}")));
    }
    let distance = shifted_lattice_distance(s, 2.0, q);
    if distance < POLE_GUARD {
        return Err(Error::PoleProximity {
            distance,
            guard: POLE_GUARD,
        });
    }
    Ok(())
}

/// How the summands of the interpolated family are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandRoute {
    /// Direct nested series for `Re(s) > 2`, q-floor quadrature otherwise.
    Default,
    /// Subtracted double series with relative stopping, for any `Re(s) > 1`.
    DoubleSeries,
}

/// The `n`-th summand `zeta_q(s-n-2, n+2) - zeta_q(-n, s+n)`.
pub fn interpolated_summand(
    s: Complex64,
    n: u64,
    q: QParam,
    policy: &TruncationPolicy,
    route: SummandRoute,
) -> Result<SummationResult> {
    check_interpolation_args(s, q)?;
    let nf = n as f64;
    let first = Complex64::new(nf + 2.0, 0.0);
    let second = s + nf;
    let (a, b) = match route {
        SummandRoute::Default if s.re > 2.0 => (
            zeta_q(&MultiIndex::new(vec![s - first, first])?, q, policy)?,
            zeta_q(&MultiIndex::new(vec![Complex64::new(-nf, 0.0), second])?, q, policy)?,
        ),
        SummandRoute::Default => (
            zeta_q_two_cont(s, first, q, policy)?,
            zeta_q_two_cont(s, second, q, policy)?,
        ),
        SummandRoute::DoubleSeries => (
            zeta_q_two_series(s, first, q, policy, StopScale::Relative)?,
            zeta_q_two_series(s, second, q, policy, StopScale::Relative)?,
        ),
    };
    Ok(SummationResult {
        value: a.value - b.value,
        abs_error_estimate: a.abs_error_estimate + b.abs_error_estimate,
        terms_used: a.terms_used + b.terms_used,
        converged: a.converged && b.converged,
    })
}

/// Interpolated sum with its summands and the fitted tail exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatedSum {
    pub result: SummationResult,
    /// Summands in order `n = 0, 1, ...`.
    pub summands: Vec<Complex64>,
    /// Log-log slope of `|summand|` against `n` over the last `tail_fit_window` terms.
    pub fitted_exponent: Option<f64>,
}

/// `sum_{n >= 0} zeta_q(s-n-2, n+2) - zeta_q(-n, s+n)`, which equals `zeta_q(s)`.
pub fn interpolated_sum_depth2(
    s: Complex64,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<SummationResult> {
    interpolated_sum_detailed(s, q, policy).map(|r| r.result)
}

/// [`interpolated_sum_depth2`] keeping the individual summands.
pub fn interpolated_sum_detailed(
    s: Complex64,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<InterpolatedSum> {
    policy.validate()?;
    check_interpolation_args(s, q)?;
    let delta = interpolation_delta(s, 1.0);
    let capped = TruncationPolicy {
        max_outer: policy.n_max + 1,
        ..*policy
    };
    let mut summands = Vec::new();
    let mut inner_err = 0.0;
    let mut inner_ok = true;
    let mut failure = None;
    // Summands inside their own error bar are added here and shown to the
    // stopping rule as zero: their size says nothing about the tail.
    let mut below_noise = crate::qcore::ComplexSum::new();
    let mut outer = series_sum_with(&capped, TailModel::PowerLaw { delta }, StopScale::Mixed, |k| {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        match interpolated_summand(s, (k - 1) as u64, q, policy, SummandRoute::Default) {
            Ok(r) => {
                inner_err += r.abs_error_estimate;
                inner_ok &= r.converged;
                summands.push(r.value);
                if r.value.norm() <= r.abs_error_estimate {
                    below_noise.add(r.value);
                    Complex64::new(0.0, 0.0)
                } else {
                    r.value
                }
            }
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    outer.value += below_noise.value();
    outer.abs_error_estimate += inner_err;
    outer.converged &= inner_ok;
    let window = policy.tail_fit_window.min(summands.len());
    let tail: Vec<(f64, f64)> = summands
        .iter()
        .enumerate()
        .skip(summands.len() - window)
        .filter(|(n, _)| *n >= 1)
        .map(|(n, v)| (n as f64, v.norm()))
        .collect();
    Ok(InterpolatedSum {
        result: outer,
        summands,
        fitted_exponent: fit_log_log(&tail).map(|f| f.slope),
    })
}

/// For integer `s = k >= 3`: the first half of summand `n >= k-2` equals the
/// second half of summand `n-k+2`. Returns one report per `n` in `k-2..=n_upto`;
/// the left side comes from the nested series, the right from the double series.
pub fn check_telescoping(
    k: u32,
    n_upto: u64,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<Vec<(u64, SumFormulaReport)>> {
    if k < 3 {
        return Err(Error::arg("telescoping needs integer s >= 3"));
    }
    let kf = k as f64;
    let s = Complex64::new(kf, 0.0);
    (k as u64 - 2..=n_upto)
        .map(|n| {
            let m = n + 2 - k as u64;
            let left = zeta_q(&MultiIndex::from_reals(&[kf - n as f64 - 2.0, n as f64 + 2.0])?, q, policy)?;
            let right = zeta_q_two_series(s, Complex64::new(kf + m as f64, 0.0), q, policy, StopScale::Mixed)?;
            Ok((n, SumFormulaReport::new(&left, &right, format!("summand {n} against summand {m}"))))
        })
        .collect()
}

/// Arguments of `G^{(a,b)}(s_1, ..., s_a; s)`; `a` is the prefix length.
#[derive(Debug, Clone, PartialEq)]
pub struct GSpec {
    pub b: u32,
    pub prefix: Vec<Complex64>,
    pub s: Complex64,
}

impl GSpec {
    pub fn new(b: u32, prefix: Vec<Complex64>, s: Complex64) -> Self {
        Self { b, prefix, s }
    }

    pub fn a(&self) -> usize {
        self.prefix.len()
    }

    /// `Re(s) > b` and `Re(s + s_{a-k+1} + ... + s_a) > k + b`.
    pub fn validate(&self) -> Result<()> {
        if self.b < 1 {
            return Err(Error::arg("b must be positive"));
        }
        let bf = self.b as f64;
        if self.s.re <= bf {
            return Err(Error::Domain(format!("need Re(s) > b = {}, got {}", self.b, self.s)));
        }
        let mut tail = self.s;
        for (k, z) in self.prefix.iter().rev().enumerate() {
            tail += z;
            if tail.re <= (k + 1) as f64 + bf {
                return Err(Error::Domain(format!(
                    "partial sum {} must exceed {}",
                    tail,
                    (k + 1) as f64 + bf
                )));
            }
        }
        Ok(())
    }

    fn extended(&self, last: Complex64, b: u32, s: Complex64) -> GSpec {
        let mut prefix = self.prefix.clone();
        prefix.push(last);
        GSpec { b, prefix, s }
    }
}

/// The recursion is only a cross-check; each level adds an infinite sum.
pub const G_RECURSION_MAX_B: u32 = 3;

/// `G^{(a,b)}` by its defining recursion:
/// `G^{(a,1)} = zeta_q(s_1, ..., s_a, s)` and
/// `G^{(a,b)} = sum_n G^{(a+1,b-1)}(.., s-n-b; n+b) - G^{(a+1,b-1)}(.., -n; s+n)`.
pub fn g_value_recursive(spec: &GSpec, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    if spec.b > G_RECURSION_MAX_B {
        return Err(Error::CostGuard(format!(
            "recursive G is limited to b <= {G_RECURSION_MAX_B}, got {}",
            spec.b
        )));
    }
    policy.validate()?;
    spec.validate()?;
    g_recursive_unchecked(spec, q, policy)
}

fn g_recursive_unchecked(spec: &GSpec, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    if spec.b == 1 {
        let mut entries = spec.prefix.clone();
        entries.push(spec.s);
        return zeta_q(&MultiIndex::new(entries)?, q, policy);
    }
    let b = spec.b;
    let bf = b as f64;
    let delta = interpolation_delta(spec.s, bf - 1.0);
    let capped = TruncationPolicy {
        max_outer: policy.n_max + 1,
        ..*policy
    };
    let mut inner_err = 0.0;
    let mut inner_ok = true;
    let mut failure = None;
    let mut outer = series_sum_with(&capped, TailModel::PowerLaw { delta }, StopScale::Mixed, |k| {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let nf = (k - 1) as f64;
        let first = spec.extended(spec.s - nf - bf, b - 1, Complex64::new(nf + bf, 0.0));
        let second = spec.extended(Complex64::new(-nf, 0.0), b - 1, spec.s + nf);
        match (g_recursive_unchecked(&first, q, policy), g_recursive_unchecked(&second, q, policy)) {
            (Ok(x), Ok(y)) => {
                inner_err += x.abs_error_estimate + y.abs_error_estimate;
                inner_ok &= x.converged && y.converged;
                x.value - y.value
            }
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    outer.abs_error_estimate += inner_err;
    outer.converged &= inner_ok;
    Ok(outer)
}

/// Length of the weakly increasing chain in the closed form of `G^{(a,b)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLength {
    /// `L = b - 1`; reproduces the recursion and collapses to `zeta_q(s)` at `a = 0`.
    Full,
    /// `L = b - 2`; kept for comparison only.
    Short,
}

impl ChainLength {
    pub fn length(self, b: u32) -> usize {
        match self {
            ChainLength::Full => b as usize - 1,
            ChainLength::Short => (b as usize).saturating_sub(2),
        }
    }
}

/// Closed form of `G^{(a,b)}`:
///
/// ```text
/// sum_{0 < m_1 < ... < m_a < m} prod_j q^{(s_j-1) m_j} / [m_j]^{s_j}
///     * q^{(s-b) m} / [m]^{s-b+1} * C_L(m - m_a, m)
/// ```
///
/// with `m - m_a` read as `m` when `a = 0` and `C_L` the chain sum of length `L = b - 1`.
pub fn g_closed_form(spec: &GSpec, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    g_closed_form_with(spec, ChainLength::Full, q, policy)
}

pub fn g_closed_form_with(
    spec: &GSpec,
    chain: ChainLength,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<SummationResult> {
    policy.validate()?;
    spec.validate()?;
    let len = chain.length(spec.b);
    let a = spec.a();
    let shift = spec.s - spec.b as f64;
    // weights[j] = sum over m_1 < ... < m_a = j + 1 of the prefix factors.
    let mut partial = vec![crate::qcore::ScaledSum::new(); a.max(1)];
    let mut weights: Vec<Scaled> = Vec::new();
    let lq = q.ln();
    let r = series_sum(policy, |m| {
        let m_u = m as u64;
        let mf = m as f64;
        let head = Scaled::from_ln(shift * (mf * lq) - (shift + 1.0) * ln_q_int(mf, q));
        let value = if a == 0 {
            head.times(Scaled::from_ln(Complex64::new(len as f64 * chain_weight(m_u, q).ln(), 0.0)))
                .to_complex()
        } else {
            let chains = chain_sums(1, m_u, len, q);
            let mut acc = crate::qcore::ScaledSum::new();
            for (j, w) in weights.iter().enumerate() {
                // m_a = j + 1, lower chain bound m - m_a.
                let c = chains[m - (j + 1) - 1];
                acc.add(w.times(Scaled::from_ln(Complex64::new(c.ln(), 0.0))));
            }
            head.times(acc.value()).to_complex()
        };
        if a > 0 {
            // Extend the prefix sums with m as the newest candidate for m_a.
            let mut level = Scaled::ONE;
            let mut fresh = Vec::with_capacity(a);
            for j in 0..a {
                let t = Scaled::from_ln(ln_q_term(spec.prefix[j], m_u, q));
                let below = if j == 0 { Scaled::ONE } else { partial[j - 1].value() };
                level = t.times(below);
                fresh.push(level);
            }
            for (j, f) in fresh.iter().enumerate().take(a - 1) {
                partial[j].add(*f);
            }
            weights.push(level);
        }
        value
    });
    Ok(r)
}

/// `G^{(0,b)}(s)` in closed form against `zeta_q(s)`, cross-checked against the
/// recursion when `b <= 3`.
pub fn check_theorem4(b: u32, s: Complex64, q: QParam, policy: &TruncationPolicy) -> Result<SumFormulaReport> {
    let spec = GSpec::new(b, Vec::new(), s);
    let lhs = g_closed_form(&spec, q, policy)?;
    let rhs_index = MultiIndex::new(vec![s])?;
    check_domain(&rhs_index, q)?;
    let rhs = zeta_q(&rhs_index, q, policy)?;
    let mut report = SumFormulaReport::new(
        &lhs,
        &rhs,
        format!("closed form with chain length L = b - 1 = {}", b - 1),
    );
    if b <= G_RECURSION_MAX_B {
        let rec = g_value_recursive(&spec, q, policy)?;
        report.cross_check_diff = Some((rec.value - lhs.value).norm());
        report.tail_estimate = report.tail_estimate.max(rec.abs_error_estimate + lhs.abs_error_estimate);
    }
    Ok(report)
}
