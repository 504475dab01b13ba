//! Canonical text form: `c * x1^a1 * x3^a3 + ...` with `p/q` coefficients,
//! terms in descending graded order, `0` for the zero polynomial.

use std::fmt;

use num_traits::{One, Zero};

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            f.write_str(&format_rational(c))?;
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    write!(f, " * x{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    /// Parses the canonical form. Also accepts bare variables (`x2`),
    /// omitted exponents and omitted unit coefficients.
    pub fn parse(text: &str, dim: usize) -> Result<MultiPoly> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MultiPoly::zero(dim);
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let mut coeff = Rational::one();
            let mut exps = vec![0u32; dim];
            for factor in term.split('*') {
                let factor = factor.trim();
                let (negated, body) = match factor.strip_prefix('-') {
                    Some(rest) if rest.trim_start().starts_with('x') => (true, rest.trim_start()),
                    _ => (false, factor),
                };
                if let Some(var) = body.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.trim()),
                        None => (var, "1"),
                    };
                    let idx: usize =
                        idx.trim().parse().map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > dim {
                        return Err(Error::Parse(format!("variable x{idx} out of range for dimension {dim}")));
                    }
                    let pow: u32 = pow.parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    exps[idx - 1] += pow;
                    if negated {
                        coeff = -coeff;
                    }
                } else {
                    coeff *= parse_rational(body)?;
                }
            }
            if !coeff.is_zero() {
                out.add_term(Monomial(exps), coeff);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn prints_canonically() {
        let f = MultiPoly::var(2, 0).pow(2).scale(&frac(3, 2)) - MultiPoly::var(2, 1) + MultiPoly::one(2);
        assert_eq!(f.to_string(), "3/2 * x1^2 + -1 * x2^1 + 1");
        assert_eq!(MultiPoly::zero(3).to_string(), "0");
    }

    #[test]
    fn round_trips() {
        let f =
            MultiPoly::from_terms(3, [(vec![1, 0, 2], frac(-7, 3)), (vec![0, 0, 0], int(4)), (vec![0, 5, 0], int(1))]);
        assert_eq!(MultiPoly::parse(&f.to_string(), 3).unwrap(), f);
        assert!(MultiPoly::parse("0", 2).unwrap().is_zero());
    }

    #[test]
    fn lenient_forms() {
        let f = MultiPoly::parse("x1^2 + -x2 + 2 * x1 * x1", 2).unwrap();
        assert_eq!(f.to_string(), "3 * x1^2 + -1 * x2^1");
        assert!(MultiPoly::parse("x3", 2).is_err());
        assert!(MultiPoly::parse("1/0 * x1", 2).is_err());
    }
}
