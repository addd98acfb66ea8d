use num_complex::Complex64;

use crate::{Error, Result};

/// `exp(z) - 1` without cancellation for small `|z|`.
#[inline]
pub fn cexpm1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half_sin = (0.5 * b).sin();
    Complex64::new(
        a.exp_m1() * b.cos() - 2.0 * half_sin * half_sin,
        a.exp() * b.sin(),
    )
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex log-gamma (principal branch up to multiples of `2 pi i`).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.re < 0.5 {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        return Complex64::new(PI.ln(), 0.0) - (z * PI).sin().ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Euler beta function `B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)`.
pub fn beta_fn(x: Complex64, y: Complex64) -> Result<Complex64> {
    for (name, v) in [("x", x), ("y", y)] {
        if is_nonpositive_integer(v) {
            return Err(Error::arg(format!("beta function pole at {name} = {v}")));
        }
    }
    if is_nonpositive_integer(x + y) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}
