use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// A polynomial restricted to the unit sphere, stored as its normal form
/// modulo `||x||^2 - 1`: every term has degree at most one in the last
/// variable. Equality of restrictions is equality of normal forms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SphereFunction {
    rep: MultiPoly,
}

impl MultiPoly {
    /// Normal form modulo `x1^2 + ... + xd^2 - 1` with `x_d` leading.
    pub fn reduce_mod_sphere(&self) -> Result<SphereFunction> {
        let d = self.dim;
        if d < 2 {
            return Err(Error::InvalidParameter(format!("sphere reduction needs dimension >= 2, got {d}")));
        }
        let last = d - 1;
        if self.degree_in(last).unwrap_or(0) <= 1 {
            return Ok(SphereFunction { rep: self.clone() });
        }
        // x_d^2 = 1 - (x_1^2 + ... + x_{d-1}^2)
        let mut tail = MultiPoly::one(d);
        for i in 0..last {
            let mut e = vec![0; d];
            e[i] = 2;
            tail.add_term(Monomial(e), -Rational::one());
        }
        let mut tail_powers = vec![MultiPoly::one(d), tail.clone()];
        let mut out = MultiPoly::zero(d);
        for (m, c) in &self.terms {
            let k = m.0[last];
            if k <= 1 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let half = (k / 2) as usize;
            while tail_powers.len() <= half {
                let next = tail_powers.last().unwrap() * &tail;
                tail_powers.push(next);
            }
            let mut e = m.0.clone();
            e[last] = k % 2;
            let base = Monomial(e);
            for (tm, tc) in &tail_powers[half].terms {
                out.add_term(base.mul(tm), c * tc);
            }
        }
        Ok(SphereFunction { rep: out })
    }
}

impl SphereFunction {
    pub fn zero(dim: usize) -> Self {
        Self { rep: MultiPoly::zero(dim) }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self { rep: MultiPoly::constant(dim, c) }
    }

    pub fn representative(&self) -> &MultiPoly {
        &self.rep
    }

    pub fn into_representative(self) -> MultiPoly {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rep: self.rep.scale(c) }
    }

    /// `xi_i * f`.
    pub fn mul_coordinate(&self, i: usize) -> Self {
        reduce(&self.rep.mul_var(i))
    }

    pub fn compose_linear(&self, m: &Matrix) -> Result<Self> {
        self.rep.compose_linear(m)?.reduce_mod_sphere()
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64> {
        self.rep.evaluate_f64(x)
    }
}

fn reduce(p: &MultiPoly) -> SphereFunction {
    p.reduce_mod_sphere().expect("sphere functions live in dimension >= 2")
}

impl Add<&SphereFunction> for &SphereFunction {
    type Output = SphereFunction;
    fn add(self, rhs: &SphereFunction) -> SphereFunction {
        SphereFunction { rep: &self.rep + &rhs.rep }
    }
}

impl Sub<&SphereFunction> for &SphereFunction {
    type Output = SphereFunction;
    fn sub(self, rhs: &SphereFunction) -> SphereFunction {
        SphereFunction { rep: &self.rep - &rhs.rep }
    }
}

impl Mul<&SphereFunction> for &SphereFunction {
    type Output = SphereFunction;
    fn mul(self, rhs: &SphereFunction) -> SphereFunction {
        reduce(&(&self.rep * &rhs.rep))
    }
}

impl Neg for &SphereFunction {
    type Output = SphereFunction;
    fn neg(self) -> SphereFunction {
        SphereFunction { rep: -&self.rep }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<SphereFunction> for SphereFunction {
            type Output = SphereFunction;
            fn $method(self, rhs: SphereFunction) -> SphereFunction {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn norm_reduces_to_one() {
        for d in 2..5 {
            let s = MultiPoly::norm_sq(d).reduce_mod_sphere().unwrap();
            assert_eq!(s, SphereFunction::constant(d, int(1)));
        }
    }

    #[test]
    fn last_square_single_step() {
        let f = MultiPoly::var(3, 2).pow(2).reduce_mod_sphere().unwrap();
        let want = MultiPoly::one(3) - MultiPoly::var(3, 0).pow(2) - MultiPoly::var(3, 1).pow(2);
        assert_eq!(f.representative(), &want);
    }

    #[test]
    fn reduced_input_is_fixed() {
        let f = MultiPoly::var(3, 0).pow(3) * MultiPoly::var(3, 2) + MultiPoly::var(3, 1);
        assert_eq!(f.reduce_mod_sphere().unwrap().representative(), &f);
    }

    #[test]
    fn one_dimension_rejected() {
        assert!(MultiPoly::var(1, 0).reduce_mod_sphere().is_err());
    }
}
