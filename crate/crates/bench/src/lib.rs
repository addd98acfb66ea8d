//! Shared inputs for the benchmarks.

use qzeta_core::{Complex64, MultiIndex, QParam};

pub fn q(v: f64) -> QParam {
    QParam::new(v).expect("q in (0, 1)")
}

pub fn index(entries: &[f64]) -> MultiIndex {
    MultiIndex::from_reals(entries).expect("finite entries")
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Indices of growing depth, all of weight 8.
pub fn weight_eight() -> Vec<(&'static str, MultiIndex)> {
    vec![
        ("depth1", index(&[8.0])),
        ("depth2", index(&[3.0, 5.0])),
        ("depth4", index(&[1.0, 2.0, 2.0, 3.0])),
        ("depth6", index(&[1.0, 1.0, 1.0, 1.0, 2.0, 2.0])),
    ]
}
