use num_complex::Complex64;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn two_sum(acc: f64, comp: &mut f64, x: f64) -> f64 {
    let t = acc + x;
    if acc.abs() >= x.abs() {
        *comp += (acc - t) + x;
    } else {
        *comp += (x - t) + acc;
    }
    t
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = two_sum(self.sum.im, &mut self.comp.im, x.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    fn scale(&mut self, f: f64) {
        self.sum *= f;
        self.comp *= f;
    }
}

/// A complex number stored as `mantissa * exp(log_scale)`, so that factors like
/// `q^{-nM}` can be multiplied without overflowing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: Complex64::new(0.0, 0.0),
        log_scale: 0.0,
    };
    pub const ONE: Scaled = Scaled {
        mantissa: Complex64::new(1.0, 0.0),
        log_scale: 0.0,
    };

    /// `exp(l)` kept in scaled form.
    #[inline]
    pub fn from_ln(l: Complex64) -> Self {
        Self {
            mantissa: Complex64::from_polar(1.0, l.im),
            log_scale: l.re,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// Natural log of the modulus; `-inf` for zero.
    #[inline]
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }

    #[inline]
    pub fn times(self, other: Scaled) -> Scaled {
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
        .normalized()
    }

    fn normalized(self) -> Scaled {
        let n = self.mantissa.norm();
        if n == 0.0 || !n.is_finite() || (1e-100..=1e100).contains(&n) {
            return self;
        }
        Scaled {
            mantissa: self.mantissa / n,
            log_scale: self.log_scale + n.ln(),
        }
    }

    /// Convert back to an ordinary complex number (may over/underflow).
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return self.mantissa;
        }
        let n = self.mantissa.norm();
        (self.mantissa / n) * (self.log_scale + n.ln()).exp()
    }
}

/// Compensated sum of [`Scaled`] terms sharing one running scale.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScaledSum {
    acc: ComplexSum,
    log_scale: f64,
    started: bool,
}

const RESCALE_GAP: f64 = 40.0;

impl ScaledSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Scaled) {
        if x.is_zero() {
            return;
        }
        let x_level = x.ln_abs();
        if !self.started {
            self.started = true;
            self.log_scale = x_level;
        } else if x_level > self.log_scale + RESCALE_GAP {
            self.acc.scale((self.log_scale - x_level).exp());
            self.log_scale = x_level;
        }
        self.acc.add(x.mantissa * (x.log_scale - self.log_scale).exp());
    }

    pub fn value(&self) -> Scaled {
        if !self.started {
            return Scaled::ZERO;
        }
        Scaled {
            mantissa: self.acc.value(),
            log_scale: self.log_scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let mut s = ComplexSum::new();
        s.add(Complex64::new(1.0, 0.0));
        for _ in 0..10 {
            s.add(Complex64::new(1e-16, 0.0));
        }
        s.add(Complex64::new(-1.0, 0.0));
        assert!((s.value().re - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn scaled_product_survives_overflow() {
        let big = Scaled::from_ln(Complex64::new(600.0, 0.3));
        let small = Scaled::from_ln(Complex64::new(-650.0, -0.3));
        let z = big.times(big).times(small).times(small).to_complex();
        assert!((z - Complex64::new((-100.0f64).exp(), 0.0)).norm() < 1e-55);
    }

    #[test]
    fn scaled_sum_handles_growing_terms() {
        let mut s = ScaledSum::new();
        let mut expect = 0.0f64;
        for k in 0..50 {
            let l = 30.0 * k as f64;
            s.add(Scaled::from_ln(Complex64::new(l, 0.0)));
            expect = expect.max(l);
        }
        let v = s.value();
        assert!((v.ln_abs() - expect).abs() < 1e-12);
    }
}
