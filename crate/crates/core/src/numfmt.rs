//! Deterministic number formatting for the CSV outputs: 12 significant
//! digits, `%g`-style (fixed notation in a sane exponent window, scientific
//! outside it, trailing zeros trimmed), and the literal `inf` for diverged
//! entries.

const SIG_DIGITS: usize = 12;

/// Formats with 12 significant digits. Infinities map to `inf`/`-inf`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Rust's `{:.*e}` gives "d.ddd…e±exp" with an unpadded exponent.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp_str) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp_str.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), SIG_DIGITS);

    let body = if (-4..SIG_DIGITS as i32).contains(&exp) {
        let point = exp + 1; // digits before the decimal point
        let mut s = String::new();
        if point <= 0 {
            s.push_str("0.");
            for _ in 0..-point {
                s.push('0');
            }
            s.push_str(&digits);
        } else {
            let p = point as usize;
            s.push_str(&digits[..p.min(digits.len())]);
            if p < digits.len() {
                s.push('.');
                s.push_str(&digits[p..]);
            }
        }
        trim_fraction(s)
    } else {
        let mut s = String::new();
        s.push_str(&digits[..1]);
        s.push('.');
        s.push_str(&digits[1..]);
        let trimmed = trim_fraction(s);
        format!("{trimmed}e{exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reference_values() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-1.5), "-1.5");
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(123.456), "123.456");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(1e15), "1e15");
        assert_eq!(fmt_sig(1.23e-7), "1.23e-7");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_sig(-0.000123456789012), "-0.000123456789012");
    }

    #[test]
    fn twelve_digit_round_trip_is_stable() {
        for &x in &[
            0.825424623105,
            2.354937889296,
            1.868551121099,
            9.87654321e-3,
            6.02214076e23,
            -4.2e-17,
        ] {
            let s = fmt_sig(x);
            let back: f64 = s.parse().unwrap();
            assert!(
                ((back - x) / x).abs() < 1e-11,
                "{x} -> {s} -> {back} lost digits"
            );
            assert_eq!(fmt_sig(back), s, "formatting must be idempotent");
        }
    }
}
