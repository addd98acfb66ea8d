//! The classical limit `q -> 1`: polynomial extrapolation in `1 - q` of
//! `zeta_q` values and a plain nested-sum evaluator for classical multiple
//! zeta values to compare against.

use num_complex::Complex64;

use crate::qcore::{ComplexSum, QParam, TruncationPolicy};
use crate::qmzf::{zeta_q, MultiIndex};
use crate::{Error, Result};

/// Largest `q` accepted for extrapolation; closer to 1 the series need
/// `O(1/(1-q))` terms and lose precision.
pub const Q_MAX: f64 = 1.0 - 1.0 / 1024.0;

/// Extrapolation is flagged as unreliable below this observed order.
pub const MIN_RELIABLE_ORDER: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationReport {
    /// `(q, zeta_q(index))`, increasing in `q`.
    pub estimates: Vec<(f64, Complex64)>,
    pub extrapolated: Complex64,
    /// Convergence order in `1 - q` measured from the last successive differences.
    pub observed_order: f64,
    /// Classical value for admissible integer indices.
    pub reference: Option<Complex64>,
    pub warning: Option<String>,
}

/// `q_j = 1 - 2^{-j}` for `j = 3..=10`.
pub fn default_q_grid() -> Vec<QParam> {
    (3..=10)
        .map(|j| QParam::new(1.0 - 2f64.powi(-j)).expect("grid point lies in (0, 1)"))
        .collect()
}

/// Terms used for the classical reference inside [`q_to_1_extrapolate`].
pub const REFERENCE_TERMS: u64 = 1_000_000;

/// Evaluate `zeta_q(index)` on `q_grid` and extrapolate to `q = 1` with
/// Neville's scheme on the polynomial in `1 - q` through all points.
pub fn q_to_1_extrapolate(
    index: &MultiIndex,
    q_grid: &[QParam],
    policy: &TruncationPolicy,
) -> Result<ExtrapolationReport> {
    if let Some(bad) = q_grid.iter().find(|q| q.get() > Q_MAX) {
        return Err(Error::arg(format!("q = {} exceeds the extrapolation cap {Q_MAX}", bad.get())));
    }
    let mut grid = q_grid.to_vec();
    grid.sort_by(|a, b| a.get().total_cmp(&b.get()));
    grid.dedup();
    if grid.len() < 3 {
        return Err(Error::arg("extrapolation needs at least three distinct q values"));
    }
    let estimates = grid
        .iter()
        .map(|&q| Ok((q.get(), zeta_q(index, q, policy)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = estimates.iter().map(|(q, _)| 1.0 - q).collect();
    let vals: Vec<Complex64> = estimates.iter().map(|(_, v)| *v).collect();
    let extrapolated = neville_at_zero(&eps, &vals);
    let n = vals.len();
    let d_prev = (vals[n - 2] - vals[n - 3]).norm();
    let d_last = (vals[n - 1] - vals[n - 2]).norm();
    let observed_order = (d_prev / d_last).ln() / ((eps[n - 3] - eps[n - 2]) / (eps[n - 2] - eps[n - 1])).ln();
    let reliable = observed_order >= MIN_RELIABLE_ORDER;
    let warning = (!reliable).then(|| format!("observed order {observed_order:.3} below {MIN_RELIABLE_ORDER}; extrapolation unreliable"));
    let reference = if index.is_admissible_integer() {
        Some(mzv_reference(index, REFERENCE_TERMS)?)
    } else {
        None
    };
    Ok(ExtrapolationReport {
        estimates,
        extrapolated,
        observed_order,
        reference,
        warning,
    })
}

/// Value at `x = 0` of the interpolating polynomial through `(xs[i], ys[i])`.
fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

/// Classical `zeta(k_1, ..., k_r)` by nested summation over `n_r <= terms`,
/// with the outer tail approximated by `S_{r-1}(N) (N + 1/2)^{1-k_r} / (k_r - 1)`.
pub fn mzv_reference(index: &MultiIndex, terms: u64) -> Result<Complex64> {
    if !index.is_admissible_integer() {
        return Err(Error::arg("classical reference needs positive integers with last entry >= 2"));
    }
    if terms == 0 {
        return Err(Error::arg("need at least one term"));
    }
    let ks = index.as_positive_integers().expect("admissible indices are integers");
    let r = ks.len();
    let mut partial = vec![ComplexSum::new(); r];
    let mut total = ComplexSum::new();
    for n in 1..=terms {
        let nf = n as f64;
        let below = |p: &[ComplexSum], j: usize| if j == 0 { 1.0 } else { p[j].value().re };
        total.add(Complex64::new(nf.powi(-(ks[r - 1] as i32)) * below(&partial, r - 1), 0.0));
        for j in (1..r).rev() {
            let add = nf.powi(-(ks[j - 1] as i32)) * below(&partial, j - 1);
            partial[j].add(Complex64::new(add, 0.0));
        }
    }
    let last = ks[r - 1] as f64;
    let inner = if r == 1 { 1.0 } else { partial[r - 1].value().re };
    let tail = inner * (terms as f64 + 0.5).powf(1.0 - last) / (last - 1.0);
    total.add(Complex64::new(tail, 0.0));
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn idx(v: &[f64]) -> MultiIndex {
        MultiIndex::from_reals(v).unwrap()
    }

    #[test]
    fn classical_references() {
        assert!((mzv_reference(&idx(&[2.0]), 1_000_000).unwrap().re - PI * PI / 6.0).abs() < 1e-9);
        assert!((mzv_reference(&idx(&[4.0]), 100_000).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-9);
        // Euler: zeta(1, 2) = zeta(3).
        let z3 = mzv_reference(&idx(&[3.0]), 100_000).unwrap().re;
        assert!((mzv_reference(&idx(&[1.0, 2.0]), 1_000_000).unwrap().re - z3).abs() < 1e-5);
        assert!(mzv_reference(&idx(&[1.0, 1.0]), 10).is_err());
        assert!(mzv_reference(&idx(&[2.5]), 10).is_err());
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let ys: Vec<Complex64> = xs.iter().map(|x| Complex64::new(3.0 - 2.0 * x + x * x * x, 0.0)).collect();
        assert!((neville_at_zero(&xs, &ys).re - 3.0).abs() < 1e-13);
    }

    #[test]
    fn grid_checks() {
        let p = TruncationPolicy::default();
        let grid = default_q_grid();
        assert_eq!(grid.len(), 8);
        assert!((grid[7].get() - Q_MAX).abs() < 1e-16);
        let too_close = vec![QParam::new(0.999).unwrap(); 3];
        assert!(q_to_1_extrapolate(&idx(&[2.0]), &too_close, &p).is_err());
        assert!(q_to_1_extrapolate(&idx(&[2.0]), &grid[..2], &p).is_err());
    }

    #[test]
    fn zeta_two_limit() {
        let p = TruncationPolicy::default();
        let r = q_to_1_extrapolate(&idx(&[2.0]), &default_q_grid(), &p).unwrap();
        assert!((r.extrapolated.re - PI * PI / 6.0).abs() < 1e-4);
        assert!(r.warning.is_none());
        assert!(r.observed_order > 0.5);
        assert!(r.estimates.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
