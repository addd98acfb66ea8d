//! Weakly increasing chain sums
//! `C_L(lo, hi) = sum_{lo <= x_1 <= ... <= x_L <= hi} prod_j q^{x_j} / [x_j]_q`.

use crate::qcore::{ln_q_int, QParam};

/// Chain weight `q^x / [x]_q`.
#[inline]
pub fn chain_weight(x: u64, q: QParam) -> f64 {
    let xf = x as f64;
    (xf * q.ln() - ln_q_int(xf, q)).exp()
}

/// `C_len(lo, hi)` for every `lo` in `lo_min..=hi`, indexed by `lo - lo_min`.
///
/// Uses the suffix recursion `C_l(lo) = w(lo) C_{l-1}(lo) + C_l(lo + 1)` in
/// `O(len * (hi - lo_min))`.
pub fn chain_sums(lo_min: u64, hi: u64, len: usize, q: QParam) -> Vec<f64> {
    assert!(lo_min >= 1, "chain variables are positive");
    if hi < lo_min {
        return Vec::new();
    }
    let width = (hi - lo_min + 1) as usize;
    let weights: Vec<f64> = (lo_min..=hi).map(|x| chain_weight(x, q)).collect();
    let mut level = vec![1.0; width];
    for _ in 0..len {
        let mut suffix = 0.0;
        for i in (0..width).rev() {
            suffix += weights[i] * level[i];
            level[i] = suffix;
        }
    }
    level
}

/// Single chain sum `C_len(lo, hi)`; `1` for `len = 0`, `0` for an empty range.
pub fn chain_sum(lo: u64, hi: u64, len: usize, q: QParam) -> f64 {
    if len == 0 {
        return 1.0;
    }
    chain_sums(lo, hi, len, q).first().copied().unwrap_or(0.0)
}
