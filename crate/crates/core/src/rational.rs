//! Exact rational scalars and their interchange format.
//!
//! Every coordinate, coefficient, and tolerance in this crate is a
//! `Rational`: an arbitrary-precision fraction, always reduced, with a
//! positive denominator. Serialized form is the string `"num/den"`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

/// `rat(n, d)` builds `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    Empty,
    BadInteger(String),
    ZeroDenominator,
}

impl std::fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseRationalError::Empty => write!(f, "empty rational literal"),
            ParseRationalError::BadInteger(s) => write!(f, "bad integer part {s:?}"),
            ParseRationalError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(num).map_err(|_| ParseRationalError::BadInteger(num.to_string()))?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| ParseRationalError::BadInteger(d.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator);
    }
    Ok(Rational::new(n, d))
}

/// Canonical string form `"num/den"`, reduced, denominator positive.
/// Integers are written `"n/1"` so that output is uniform and round-trips
/// byte-identically.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range big ratio; fall back to a quotient of truncated parts.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Decimal approximation with `sig` significant digits, for display only.
/// Deterministic: computed from the exact value, not via `f64`.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Find exp with 10^exp <= a < 10^(exp+1).
    let ten = Rational::from_integer(BigInt::from(10));
    let mut exp: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled /= &ten;
        exp += 1;
    }
    while scaled < Rational::one() {
        scaled *= &ten;
        exp -= 1;
    }
    // Round a / 10^exp * 10^(sig-1) to nearest integer.
    let shift = sig as i64 - 1 - exp;
    let mut scaled = a;
    if shift >= 0 {
        for _ in 0..shift {
            scaled *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            scaled /= &ten;
        }
    }
    let digits = (scaled + rat(1, 2)).floor().to_integer().to_string();
    // digits has `sig` digits (or sig+1 after a rounding carry).
    let digits_len = digits.len() as i64;
    let point = digits_len - shift; // digits * 10^-shift; decimal point after `point` digits
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if point >= digits_len {
        out.push_str(&digits);
        for _ in 0..(point - digits_len) {
            out.push('0');
        }
    } else {
        let (int, frac) = digits.split_at(point as usize);
        out.push_str(int);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    if out == "-0" {
        out = "0".to_string();
    }
    out
}
