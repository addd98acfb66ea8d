//! The auxiliary series `F^{(i)}(D; s; d)`, `i = 0..=3`, built from weakly
//! increasing chain sums, and the shift identity relating them.
//!
//! With `w(x) = q^x / [x]_q` and `C_d(lo, hi)` the chain sum of length `d`:
//!
//! ```text
//! F0 = sum_{m > D} q^{(s-d-1)m} / [m]^{s-d} C_d(m-D, m)
//! F1 = sum_{t > D} q^{(s-d-2)t} / [t]^{s-d-1} sum_{m > t} w(m-t) C_d(m-t, m)
//! F2 = sum_{t > D} q^{(s-d-2)t} / [t]^{s-d-1} sum_{m > t} w(m)   C_d(m-t, m)
//! F3 = sum_{m > D+1} q^{(s-d-2)m} / [m]^{s-d-1} sum_{D < t < m} w(m-t) C_d(m-t, m)
//! ```
//!
//! These satisfy `F0(D; s; d+1) = F1(D; s; d) - F2(D; s; d) - F3(D; s; d)`.

use num_complex::Complex64;

use crate::chain::{chain_sum, chain_sums, chain_weight};
use crate::qcore::{ln_q_int, series_sum, QParam, SummationResult, TruncationPolicy};
use crate::sumformula::SumFormulaReport;
use crate::{Error, Result};

/// Residual threshold below which a convention counts as satisfied.
pub const F_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FKind {
    Zero,
    One,
    Two,
    Three,
}

impl FKind {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            0 => Ok(FKind::Zero),
            1 => Ok(FKind::One),
            2 => Ok(FKind::Two),
            3 => Ok(FKind::Three),
            _ => Err(Error::arg(format!("F-series selector must be 0..=3, got {i}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSpec {
    pub kind: FKind,
    /// Lower cutoff `D`.
    pub cutoff: u64,
    pub s: Complex64,
    /// Chain length `d >= 1`.
    pub d: u32,
}

impl FSpec {
    pub fn new(kind: FKind, cutoff: u64, s: Complex64, d: u32) -> Self {
        Self { kind, cutoff, s, d }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::arg("chain length d must be positive"));
        }
        let need = match self.kind {
            FKind::Zero => 1.0,
            _ => self.d as f64 + 2.0,
        };
        if self.s.re <= need {
            return Err(Error::Domain(format!(
                "F-series {:?} with d = {} needs Re(s) > {need}, got {}",
                self.kind, self.d, self.s
            )));
        }
        Ok(())
    }
}

/// `exp(a m ln q - b ln [m])`.
fn power_factor(a: Complex64, b: Complex64, m: u64, q: QParam) -> Complex64 {
    let mf = m as f64;
    (a * (mf * q.ln()) - b * ln_q_int(mf, q)).exp()
}

/// Outer series whose terms are `prefactor(k) * inner(k)` with an inner infinite sum.
fn nested<P, I>(policy: &TruncationPolicy, mut prefactor: P, mut inner: I) -> SummationResult
where
    P: FnMut(usize) -> Complex64,
    I: FnMut(usize) -> SummationResult,
{
    let mut inner_err = 0.0;
    let mut inner_ok = true;
    let mut r = series_sum(policy, |k| {
        let p = prefactor(k);
        let i = inner(k);
        inner_err += p.norm() * i.abs_error_estimate;
        inner_ok &= i.converged;
        p * i.value
    });
    r.abs_error_estimate += inner_err;
    r.converged &= inner_ok;
    r
}

fn real_series<F: FnMut(usize) -> f64>(policy: &TruncationPolicy, mut f: F) -> SummationResult {
    series_sum(policy, |k| Complex64::new(f(k), 0.0))
}

/// Evaluate one of the four F-series.
pub fn f_series(spec: &FSpec, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    policy.validate()?;
    spec.validate()?;
    let FSpec { kind, cutoff, s, d } = *spec;
    let len = d as usize;
    let sd = s - d as f64;
    Ok(match kind {
        FKind::Zero => series_sum(policy, |k| {
            let m = cutoff + k as u64;
            power_factor(sd - 1.0, sd, m, q) * chain_sum(m - cutoff, m, len, q)
        }),
        FKind::One => nested(
            policy,
            |k| power_factor(sd - 2.0, sd - 1.0, cutoff + k as u64, q),
            |k| {
                let t = cutoff + k as u64;
                real_series(policy, |j| {
                    let j = j as u64;
                    chain_weight(j, q) * chain_sum(j, t + j, len, q)
                })
            },
        ),
        FKind::Two => nested(
            policy,
            |k| power_factor(sd - 2.0, sd - 1.0, cutoff + k as u64, q),
            |k| {
                let t = cutoff + k as u64;
                real_series(policy, |j| {
                    let j = j as u64;
                    chain_weight(t + j, q) * chain_sum(j, t + j, len, q)
                })
            },
        ),
        FKind::Three => series_sum(policy, |k| {
            let m = cutoff + 1 + k as u64;
            let chains = chain_sums(1, m, len, q);
            let inner: f64 = (1..m - cutoff)
                .map(|lo| chain_weight(lo, q) * chains[lo as usize - 1])
                .sum();
            power_factor(sd - 2.0, sd - 1.0, m, q) * inner
        }),
    })
}

/// `F2` with the power of `q` attached to the inner variable `m` instead of `t`:
/// `sum_{t > D} [t]^{-(s-d-1)} sum_{m > t} q^{(s-d-2)m} w(m) C_d(m-t, m)`.
/// Only used to show that this reading breaks the shift identity.
pub fn f_two_inner_power(cutoff: u64, s: Complex64, d: u32, q: QParam, policy: &TruncationPolicy) -> Result<SummationResult> {
    policy.validate()?;
    FSpec::new(FKind::Two, cutoff, s, d).validate()?;
    let len = d as usize;
    let sd = s - d as f64;
    Ok(nested(
        policy,
        |k| power_factor(Complex64::new(0.0, 0.0), sd - 1.0, cutoff + k as u64, q),
        |k| {
            let t = cutoff + k as u64;
            series_sum(policy, |j| {
                let m = t + j as u64;
                power_factor(sd - 2.0, Complex64::new(0.0, 0.0), m, q)
                    * (chain_weight(m, q) * chain_sum(j as u64, m, len, q))
            })
        },
    ))
}

/// Candidate readings of the shift identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FConvention {
    /// `F0(D;s;d) = F1(D;s;d) - F2(D;s;d) - F3(D;s;d)`.
    SameDepth,
    /// `F0(D;s;d+1) = F1(D;s;d+1) - F2(D;s;d) - F3(D;s;d)`.
    MixedDepth,
    /// `F0(D;s;d+1) = F1(D;s;d) - F2(D;s;d) - F3(D;s;d)`.
    Shifted,
}

impl FConvention {
    pub const ALL: [FConvention; 3] = [FConvention::SameDepth, FConvention::MixedDepth, FConvention::Shifted];

    pub fn label(self) -> &'static str {
        match self {
            FConvention::SameDepth => "F0(d) = F1(d) - F2(d) - F3(d)",
            FConvention::MixedDepth => "F0(d+1) = F1(d+1) - F2(d) - F3(d)",
            FConvention::Shifted => "F0(d+1) = F1(d) - F2(d) - F3(d)",
        }
    }
}

/// Residuals of every convention at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct FIdentityReport {
    /// `lhs`/`rhs` of the [`FConvention::Shifted`] reading.
    pub report: SumFormulaReport,
    /// Residual of each convention with the standard `F2`.
    pub residuals: Vec<(FConvention, f64)>,
    /// Residual of each convention with [`f_two_inner_power`] in place of `F2`.
    pub residuals_inner_power: Vec<(FConvention, f64)>,
    /// Conventions whose residual is below [`F_IDENTITY_TOL`].
    pub satisfied: Vec<FConvention>,
}

/// Evaluate every reading of the shift identity at `(D, s, d)`.
pub fn check_f_identity(
    cutoff: u64,
    s: Complex64,
    d: u32,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<FIdentityReport> {
    if s.re <= d as f64 + 3.0 {
        return Err(Error::Domain(format!("identity check needs Re(s) > d + 3, got {s}")));
    }
    let f = |kind, depth| f_series(&FSpec::new(kind, cutoff, s, depth), q, policy);
    let f0 = f(FKind::Zero, d)?;
    let f0_up = f(FKind::Zero, d + 1)?;
    let f1 = f(FKind::One, d)?;
    let f1_up = f(FKind::One, d + 1)?;
    let f2 = f(FKind::Two, d)?;
    let f2_inner = f_two_inner_power(cutoff, s, d, q, policy)?;
    let f3 = f(FKind::Three, d)?;

    let combine = |a: &SummationResult, b: &SummationResult, c: &SummationResult| SummationResult {
        value: a.value - b.value - c.value,
        abs_error_estimate: a.abs_error_estimate + b.abs_error_estimate + c.abs_error_estimate,
        terms_used: a.terms_used + b.terms_used + c.terms_used,
        converged: a.converged && b.converged && c.converged,
    };
    let residuals_for = |two: &SummationResult| {
        FConvention::ALL
            .iter()
            .map(|&conv| {
                let (lhs, rhs) = match conv {
                    FConvention::SameDepth => (&f0, combine(&f1, two, &f3)),
                    FConvention::MixedDepth => (&f0_up, combine(&f1_up, two, &f3)),
                    FConvention::Shifted => (&f0_up, combine(&f1, two, &f3)),
                };
                (conv, (lhs.value - rhs.value).norm())
            })
            .collect::<Vec<_>>()
    };
    let residuals = residuals_for(&f2);
    let residuals_inner_power = residuals_for(&f2_inner);
    let satisfied: Vec<FConvention> = residuals
        .iter()
        .filter(|(_, r)| *r < F_IDENTITY_TOL)
        .map(|(c, _)| *c)
        .collect();
    let rhs = combine(&f1, &f2, &f3);
    let mut note = format!(
        "satisfied: [{}]; residuals: {}",
        satisfied.iter().map(|c| c.label()).collect::<Vec<_>>().join(", "),
        residuals
            .iter()
            .map(|(c, r)| format!("{} -> {r:.3e}", c.label()))
            .collect::<Vec<_>>()
            .join("; ")
    );
    if cutoff == 0 {
        note.push_str("; at D = 0, F0(D;s;d) = zeta_q(s) for every d, so the first and third readings coincide");
    }
    Ok(FIdentityReport {
        report: SumFormulaReport::new(&f0_up, &rhs, note),
        residuals,
        residuals_inner_power,
        satisfied,
    })
}

/// Ratio `max_{i=1,2,3} |F^{(i)}(D;s;d)|` to the majorant
/// `sum_{t > D} q^{(sigma-d-2)t} (ln t)^{d+1} / [t]^{sigma-d-1}`, with the
/// `t = 1` term replaced by the `t = 2` term.
pub fn check_f_bound(cutoff: u64, s: Complex64, d: u32, q: QParam) -> Result<f64> {
    let policy = TruncationPolicy::default();
    let mut top: f64 = 0.0;
    for kind in [FKind::One, FKind::Two, FKind::Three] {
        top = top.max(f_series(&FSpec::new(kind, cutoff, s, d), q, &policy)?.value.norm());
    }
    let sigma = s.re;
    let a = sigma - d as f64 - 2.0;
    let term = |t: u64| {
        let tf = t as f64;
        (a * tf * q.ln() - (a + 1.0) * ln_q_int(tf, q)).exp() * tf.ln().powi(d as i32 + 1)
    };
    let majorant = real_series(&policy, |k| {
        let t = cutoff + k as u64;
        term(t.max(2))
    });
    Ok(top / majorant.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    /// Nested loops over every index up to `cap`.
    fn naive(spec: &FSpec, qq: QParam, cap: u64) -> Complex64 {
        let FSpec { kind, cutoff, s, d } = *spec;
        let len = d as usize;
        let sd = s - d as f64;
        let w = |x| chain_weight(x, qq);
        let ch = |lo, hi| chain_sum(lo, hi, len, qq);
        let mut total = Complex64::new(0.0, 0.0);
        match kind {
            FKind::Zero => {
                for m in cutoff + 1..cap {
                    total += power_factor(sd - 1.0, sd, m, qq) * ch(m - cutoff, m);
                }
            }
            FKind::One | FKind::Two => {
                for t in cutoff + 1..cap {
                    for m in t + 1..cap {
                        let inner = if kind == FKind::One { w(m - t) } else { w(m) };
                        total += power_factor(sd - 2.0, sd - 1.0, t, qq) * (inner * ch(m - t, m));
                    }
                }
            }
            FKind::Three => {
                for m in cutoff + 2..cap {
                    for t in cutoff + 1..m {
                        total += power_factor(sd - 2.0, sd - 1.0, m, qq) * (w(m - t) * ch(m - t, m));
                    }
                }
            }
        }
        total
    }

    #[test]
    fn matches_naive_loops() {
        let p = TruncationPolicy::default();
        let cases = [
            FSpec::new(FKind::Zero, 0, c(4.0, 0.0), 1),
            FSpec::new(FKind::Zero, 3, c(3.0, 1.0), 2),
            FSpec::new(FKind::One, 1, c(6.0, 0.0), 1),
            FSpec::new(FKind::Two, 0, c(5.5, 0.0), 2),
            FSpec::new(FKind::Three, 2, c(6.0, -0.5), 2),
        ];
        for spec in cases {
            let got = f_series(&spec, q(0.3), &p).unwrap().value;
            let want = naive(&spec, q(0.3), 60);
            assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{spec:?}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_cutoff_collapses_chain() {
        let p = TruncationPolicy::default();
        let v = f_series(&FSpec::new(FKind::Zero, 0, c(4.0, 0.0), 1), q(0.5), &p).unwrap();
        let z = crate::qmzf::zeta_q(&crate::MultiIndex::from_reals(&[4.0]).unwrap(), q(0.5), &p).unwrap();
        assert!((v.value - z.value).norm() < 1e-15);
    }

    #[test]
    fn shifted_convention_is_the_one_that_holds() {
        let p = TruncationPolicy::default();
        for (cutoff, s, d, qv) in [(1, c(6.0, 0.0), 1, 0.5), (0, c(7.0, 0.0), 2, 0.3), (3, c(6.5, 0.5), 1, 0.8)] {
            let r = check_f_identity(cutoff, s, d, q(qv), &p).unwrap();
            assert!(r.satisfied.contains(&FConvention::Shifted), "{r:?}");
            assert!(!r.satisfied.contains(&FConvention::MixedDepth));
            if cutoff > 0 {
                assert_eq!(r.satisfied, vec![FConvention::Shifted]);
            }
            for (_, res) in &r.residuals_inner_power {
                assert!(*res > 1e-9);
            }
        }
    }

    #[test]
    fn domain_checks() {
        let p = TruncationPolicy::default();
        assert!(f_series(&FSpec::new(FKind::One, 0, c(3.0, 0.0), 1), q(0.5), &p).is_err());
        assert!(f_series(&FSpec::new(FKind::Zero, 0, c(1.0, 0.0), 1), q(0.5), &p).is_err());
        assert!(check_f_identity(0, c(4.0, 0.0), 1, q(0.5), &p).is_err());
        assert!(FKind::from_index(4).is_err());
    }

    #[test]
    fn positivity_and_monotonicity() {
        let p = TruncationPolicy::default();
        for kind in [FKind::Zero, FKind::One, FKind::Two, FKind::Three] {
            let mut prev = f64::INFINITY;
            for cutoff in 0..5 {
                let v = f_series(&FSpec::new(kind, cutoff, c(5.5, 0.0), 2), q(0.5), &p).unwrap().value;
                assert!(v.re > 0.0 && v.im == 0.0);
                assert!(v.re <= prev);
                prev = v.re;
            }
            let real = f_series(&FSpec::new(kind, 1, c(5.5, 0.0), 2), q(0.5), &p).unwrap().value;
            let cplx = f_series(&FSpec::new(kind, 1, c(5.5, 1.3), 2), q(0.5), &p).unwrap().value;
            assert!(cplx.norm() <= real.re * (1.0 + 1e-14));
        }
    }

    #[test]
    fn bound_ratio_is_uniform_on_spot_checks() {
        let r1 = check_f_bound(1, c(6.0, 0.0), 1, q(0.5)).unwrap();
        assert!(r1.is_finite() && r1 > 0.0);
        assert!(check_f_bound(10, c(6.0, 0.0), 1, q(0.5)).unwrap() <= 2.0 * r1);
        assert!(check_f_bound(1, c(8.0, 0.0), 1, q(0.5)).unwrap() <= 2.0 * r1);
    }
}
