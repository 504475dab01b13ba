//! Small helpers around `BigRational`: construction, parsing of `p/q`
//! strings, rising factorials and lossy conversion to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Canonical `p/q` text (`p` when the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fallback for huge numerators/denominators: scale by bit length.
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
    if shift <= 0 {
        return f64::NAN;
    }
    let ns = (n.abs() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let ds = (d >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let v = ns / ds;
    if n.is_negative() {
        -v
    } else {
        v
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Exact rational from a finite `f64` (binary expansion is exact).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-3/4"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational(" 6/4 ").unwrap(), frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rising_factorial() {
        assert_eq!(pochhammer(&frac(1, 2), 0), int(1));
        assert_eq!(pochhammer(&frac(1, 2), 3), frac(15, 8));
        assert_eq!(pochhammer(&int(1), 4), int(24));
    }

    #[test]
    fn float_conversion_of_huge_values() {
        let big = Rational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
