//! Parsing of complex literals (`a`, `a+bi`, `a-bi`) and comma lists.

use qzeta_core::Complex64;

fn parse_real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let numeric = !t.is_empty()
        && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
        && t.chars().any(|c| c.is_ascii_digit());
    match t.parse::<f64>() {
        Ok(v) if numeric && v.is_finite() => Ok(v),
        _ => Err(format!("'{text}' is not a finite decimal number")),
    }
}

/// Parses `a`, `a+bi` or `a-bi` with decimal components.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(t).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format!("'{text}' is not of the form a, a+bi or a-bi"))?;
    let re = parse_real(&body[..split])?;
    let im = parse_real(&body[split..]).map_err(|_| format!("'{text}' has no valid imaginary coefficient"))?;
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

/// Comma-separated real numbers.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(parse_real).collect()
}

/// Non-negative integer given as a number (grid values arrive as floats).
pub fn as_count(value: f64, key: &str) -> Result<u64, String> {
    if value >= 0.0 && (value - value.round()).abs() < 1e-9 {
        Ok(value.round() as u64)
    } else {
        Err(format!("{key} must be a non-negative integer, got {value}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_forms() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("4+0.5i").unwrap(), Complex64::new(4.0, 0.5));
        assert_eq!(parse_complex("3-1i").unwrap(), Complex64::new(3.0, -1.0));
        assert_eq!(parse_complex("-1.5e-3+2e+1i").unwrap(), Complex64::new(-1.5e-3, 20.0));
        assert_eq!(parse_complex(" 1.0 ").unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn malformed_literals() {
        for bad in ["", "i", "2i", "1+i", "1+2j", "nan", "inf", "1+infi", "1,2", "a+bi", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        let v = parse_complex_list("0.5,0.4+1i").unwrap();
        assert_eq!(v, vec![Complex64::new(0.5, 0.0), Complex64::new(0.4, 1.0)]);
        assert_eq!(parse_real_list("0.3,0.5").unwrap(), vec![0.3, 0.5]);
        assert!(parse_real_list("0.3,,0.5").is_err());
        assert_eq!(as_count(3.0, "k").unwrap(), 3);
        assert!(as_count(2.5, "k").is_err());
        assert!(as_count(-1.0, "k").is_err());
    }
}
