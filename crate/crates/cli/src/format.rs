//! Number formatting for CSV output.

/// Significant digits of CSV floats.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed, "nan" for NaN.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= SIG_DIGITS as i32 {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_percent_g() {
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.399123963307144), "0.399123963307");
        assert_eq!(sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig(1.5e-7), "1.5e-7");
        assert_eq!(sig(123456.0), "123456");
        assert_eq!(sig(f64::NAN), "nan");
        assert_eq!(sig(-0.25), "-0.25");
    }

    #[test]
    fn rounds_to_twelve_digits() {
        let s = sig(std::f64::consts::PI);
        assert_eq!(s, "3.14159265359");
    }
}
