//! Deterministic output formatting: a C-style %.12g float formatter and the
//! fixed-header CSV row emitter. All user-facing numbers go through fmt_g so
//! that repeated runs are byte-identical and locale-independent.

use std::fmt::Write as _;

const SIG_DIGITS: i32 = 12;

/// Formats like C's printf("%.12g", x): 12 significant digits, trailing
/// zeros stripped, scientific notation when the exponent falls outside
/// [-4, 12).
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".to_string() } else { "inf".to_string() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".to_string() } else { "0".to_string() };
    }

    // round to 12 significant digits first so the exponent choice sees the
    // rounded value (e.g. 9.9999...e-5 must print as 0.0001)
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent");

    if exp < -4 || exp >= SIG_DIGITS {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }

    let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}"))
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

pub const CSV_HEADER: &str = "param,lhs,rhs,slack,verdict";

/// One CSV row under CSV_HEADER.
pub fn csv_row(param: f64, lhs: f64, rhs: f64, slack: f64, verdict: &str) -> String {
    let mut s = String::new();
    write!(
        s,
        "{},{},{},{},{verdict}",
        fmt_g(param),
        fmt_g(lhs),
        fmt_g(rhs),
        fmt_g(slack)
    )
    .expect("string write");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_printf_g() {
        // reference strings from printf("%.12g", ...)
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-1.5), "-1.5");
        assert_eq!(fmt_g(0.1), "0.1");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_g(1e-4), "0.0001");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_g(9.99999999999999e-5), "0.0001");
        assert_eq!(fmt_g(-2.5e-30), "-2.5e-30");
        assert_eq!(fmt_g(f64::NAN), "nan");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
        assert_eq!(fmt_g(0.152380952381), "0.152380952381");
    }

    #[test]
    fn csv_row_shape() {
        assert_eq!(csv_row(0.5, 1.0, 2.0, 1.0, "HOLDS"), "0.5,1,2,1,HOLDS");
        assert_eq!(CSV_HEADER.split(',').count(), 5);
    }
}
