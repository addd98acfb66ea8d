use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, mapped onto subintervals on demand.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn new(order: usize) -> Result<Self> {
        let n = NonZeroUsize::new(order)
            .filter(|n| n.get() >= 2)
            .ok_or_else(|| Error::arg("quadrature order must be at least 2"))?;
        let rule = GaussLegendre::new(n);
        let mut pairs = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights for `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `pieces` equal subintervals of `[a, b]`.
    pub fn integrate_composite<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        pieces: usize,
        mut f: F,
    ) -> Complex64 {
        let h = (b - a) / pieces as f64;
        (0..pieces)
            .map(|i| {
                let lo = a + h * i as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let g = GaussRule::new(8).unwrap();
        let v = g.integrate(0.0, 2.0, |x| Complex64::new(x.powi(15), 0.0));
        assert!((v.re - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn composite_smooth_function() {
        let g = GaussRule::new(16).unwrap();
        let v = g.integrate_composite(0.0, 10.0, 4, |x| Complex64::new((-x).exp(), 0.0));
        assert!((v.re - (1.0 - (-10f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn rejects_order_one() {
        assert!(GaussRule::new(1).is_err());
    }
}
