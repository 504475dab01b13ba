//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Besides ring arithmetic this module carries the two primitives the
//! difference operators rely on: exact division by a linear form and the
//! canonical normal form modulo `x1^2 + ... + xd^2 - 1`.

mod sphere;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{int, to_f64, Rational};

pub use sphere::SphereFunction;

/// Exponent multi-index. Ordered graded-lexicographically with the last
/// variable most significant, so iteration runs from low to high degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dimension {dim}");
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, e, Rational::one())
    }

    pub fn monomial(dim: usize, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), dim, "exponent length must equal dimension");
        let mut p = Self::zero(dim);
        p.add_term(Monomial(exponents), c);
        p
    }

    /// `<x, v> = v_1 x_1 + ... + v_d x_d`.
    pub fn linear_form(v: &[Rational]) -> Self {
        let dim = v.len();
        let mut p = Self::zero(dim);
        for (i, c) in v.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// `||x||^2`.
    pub fn norm_sq(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 2;
            p.add_term(Monomial(e), Rational::one());
        }
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must equal dimension");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.dim])
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other.dim)?;
        let mut out = MultiPoly::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.dim);
        }
        MultiPoly { dim: self.dim, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.dim);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `x_i * f`.
    pub fn mul_var(&self, i: usize) -> MultiPoly {
        assert!(i < self.dim);
        MultiPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[i] += 1;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Partial derivative along axis `i` (0-based).
    pub fn differentiate(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dimension: self.dim });
        }
        let mut out = MultiPoly::zero(self.dim);
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.add_term(Monomial(e), c * int(k as i64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.dim).map(|i| self.differentiate(i).expect("axis in range")).collect()
    }

    /// Euler operator `x . grad f`; multiplies each degree-n part by n.
    pub fn euler(&self) -> MultiPoly {
        MultiPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() > 0)
                .map(|(m, c)| (m.clone(), c * int(m.degree() as i64)))
                .collect(),
        }
    }

    /// Classical Laplacian.
    pub fn laplacian(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.dim);
        for i in 0..self.dim {
            let d = self.differentiate(i).and_then(|p| p.differentiate(i)).expect("axis in range");
            out = &out + &d;
        }
        out
    }

    /// `f(x M)` for a square matrix acting on row vectors.
    pub fn compose_linear(&self, m: &Matrix) -> Result<MultiPoly> {
        self.check_dim(m.size())?;
        let d = self.dim;
        if m.is_monomial() {
            // x_j -> c_j x_{p(j)}: each monomial maps to a single monomial.
            let images: Vec<Option<(usize, Rational)>> =
                (0..d).map(|j| (0..d).find(|&i| !m.get(i, j).is_zero()).map(|i| (i, m.get(i, j).clone()))).collect();
            let mut out = MultiPoly::zero(d);
            for (mono, c) in &self.terms {
                let mut e = vec![0u32; d];
                let mut coeff = c.clone();
                let mut vanished = false;
                for (j, &k) in mono.0.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    match &images[j] {
                        Some((i, s)) => {
                            e[*i] += k;
                            coeff *= num_traits::pow(s.clone(), k as usize);
                        }
                        None => {
                            vanished = true;
                            break;
                        }
                    }
                }
                if !vanished {
                    out.add_term(Monomial(e), coeff);
                }
            }
            return Ok(out);
        }

        let forms: Vec<MultiPoly> = (0..d).map(|j| MultiPoly::linear_form(&m.column(j))).collect();
        let mut powers: Vec<Vec<MultiPoly>> = forms.iter().map(|f| vec![MultiPoly::one(d), f.clone()]).collect();
        let mut out = MultiPoly::zero(d);
        for (mono, c) in &self.terms {
            let mut prod = MultiPoly::constant(d, c.clone());
            for (j, &k) in mono.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap() * &forms[j];
                    powers[j].push(next);
                }
                prod = &prod * &powers[j][k as usize];
            }
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Exact quotient `f / <x, v>`. Fails when the linear form does not
    /// divide `f`.
    pub fn divide_by_linear_form(&self, v: &[Rational]) -> Result<MultiPoly> {
        self.check_dim(v.len())?;
        let d = self.dim;
        let pivot = (0..d).rev().find(|&k| !v[k].is_zero()).ok_or_else(|| Error::InvalidRoot("zero vector".into()))?;
        let vk = &v[pivot];
        let not_divisible = || Error::NotDivisible(MultiPoly::linear_form(v).to_string());

        let single = v.iter().filter(|c| !c.is_zero()).count() == 1;
        if single {
            let mut q = MultiPoly::zero(d);
            for (m, c) in &self.terms {
                if m.0[pivot] == 0 {
                    return Err(not_divisible());
                }
                let mut e = m.0.clone();
                e[pivot] -= 1;
                q.add_term(Monomial(e), c / vk);
            }
            return Ok(q);
        }

        // Synthetic division treating f as a polynomial in x_pivot.
        let mut rest_v = v.to_vec();
        rest_v[pivot] = Rational::zero();
        let rest = MultiPoly::linear_form(&rest_v);
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(d);
        let top = rem.degree_in(pivot).unwrap_or(0);
        for level in (1..=top).rev() {
            let mut part = MultiPoly::zero(d);
            let keys: Vec<Monomial> = rem.terms.keys().filter(|m| m.0[pivot] == level).cloned().collect();
            for m in keys {
                let c = rem.terms.remove(&m).expect("key present");
                let mut e = m.0;
                e[pivot] -= 1;
                part.add_term(Monomial(e), c / vk);
            }
            if part.is_zero() {
                continue;
            }
            let correction = &part * &rest;
            rem = &rem - &correction;
            q = &q + &part;
        }
        if !rem.is_zero() {
            return Err(not_divisible());
        }
        Ok(q)
    }

    /// Splits `f` into homogeneous parts, ascending by degree.
    pub fn homogeneous_decompose(&self) -> Vec<(u32, MultiPoly)> {
        let mut parts: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts.entry(m.degree()).or_insert_with(|| MultiPoly::zero(self.dim)).add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn homogeneous_part(&self, n: u32) -> MultiPoly {
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == n).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&m.0) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(x).fold(to_f64(c), |acc, (&k, xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) })
            })
            .sum())
    }

    /// Appends `extra` variables that the polynomial does not depend on.
    pub fn embed(&self, new_dim: usize) -> MultiPoly {
        assert!(new_dim >= self.dim);
        MultiPoly {
            dim: new_dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(new_dim, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables; fails if the polynomial depends on them.
    pub fn restrict(&self, new_dim: usize) -> Result<MultiPoly> {
        assert!(new_dim <= self.dim);
        let mut out = MultiPoly::zero(new_dim);
        for (m, c) in &self.terms {
            if m.0[new_dim..].iter().any(|&k| k > 0) {
                return Err(Error::InvalidParameter(format!("polynomial depends on variables beyond x{new_dim}")));
            }
            out.add_term(Monomial(m.0[..new_dim].to_vec()), c.clone());
        }
        Ok(out)
    }

    /// Multiplies every exponent by `k` (substitution `x_i -> x_i^k`).
    pub fn inflate_exponents(&self, k: u32) -> MultiPoly {
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (Monomial(m.0.iter().map(|e| e * k).collect()), c.clone())).collect(),
        }
    }

    /// True when every exponent of every term is even.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|e| e % 2 == 0))
    }

    /// Largest coefficient magnitude; zero for the zero polynomial.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("polynomial dimensions must agree")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        let mut iter = iter.peekable();
        let dim = iter.peek().map(MultiPoly::dim).unwrap_or(0);
        iter.fold(MultiPoly::zero(dim), |acc, p| if acc.is_zero() && acc.dim != p.dim { p } else { acc + p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn x(d: usize, i: usize) -> MultiPoly {
        MultiPoly::var(d, i)
    }

    #[test]
    fn ring_examples() {
        let d = 2;
        let p = (&x(d, 0) + &x(d, 1)) * (&x(d, 0) - &x(d, 1));
        let want = x(d, 0).pow(2) - x(d, 1).pow(2);
        assert_eq!(p, want);
        assert_eq!(&p + &MultiPoly::zero(d), p);
        let z = p.scale(&Rational::zero());
        assert!(z.is_zero() && z.num_terms() == 0);
        assert!(x(2, 0).checked_add(&x(3, 0)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let f = x(2, 0).pow(2) * x(2, 1);
        assert_eq!(f.differentiate(0).unwrap(), (x(2, 0) * x(2, 1)).scale(&int(2)));
        assert!(x(2, 0).pow(3).differentiate(1).unwrap().is_zero());
        assert!(matches!(f.differentiate(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn compose_examples() {
        let sigma = Matrix::from_rows(vec![vec![int(-1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert_eq!(x(2, 0).compose_linear(&sigma).unwrap(), -x(2, 0));
        let r = Matrix::from_rows(vec![vec![frac(3, 5), frac(4, 5)], vec![frac(-4, 5), frac(3, 5)]]).unwrap();
        assert_eq!(MultiPoly::norm_sq(2).compose_linear(&r).unwrap(), MultiPoly::norm_sq(2));
        let f = x(2, 0).pow(3) + x(2, 1).scale(&frac(1, 2));
        assert_eq!(f.compose_linear(&Matrix::identity(2)).unwrap(), f);
    }

    #[test]
    fn linear_division_examples() {
        let f = x(2, 0).pow(2) - x(2, 1).pow(2);
        let q = f.divide_by_linear_form(&[int(1), int(-1)]).unwrap();
        assert_eq!(q, x(2, 0) + x(2, 1));
        let g = x(2, 0) + MultiPoly::one(2);
        assert!(matches!(g.divide_by_linear_form(&[int(1), int(0)]), Err(Error::NotDivisible(_))));
        assert!(matches!(g.divide_by_linear_form(&[int(0), int(0)]), Err(Error::InvalidRoot(_))));
    }

    #[test]
    fn homogeneous_parts() {
        let f = MultiPoly::one(2) + x(2, 0) + x(2, 0) * x(2, 1);
        let parts = f.homogeneous_decompose();
        assert_eq!(parts.iter().map(|(n, _)| *n).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(parts.into_iter().map(|(_, p)| p).sum::<MultiPoly>(), f);
        assert!(MultiPoly::zero(3).homogeneous_decompose().is_empty());
        assert_eq!(x(3, 2).pow(4).homogeneous_decompose().len(), 1);
    }

    #[test]
    fn evaluation_examples() {
        let f = x(2, 0).pow(2) + x(2, 1);
        assert_eq!(f.evaluate(&[int(2), int(3)]).unwrap(), int(7));
        let g = f.clone() + MultiPoly::constant(2, frac(5, 2));
        assert_eq!(g.evaluate(&[int(0), int(0)]).unwrap(), frac(5, 2));
        let u = [0.6_f64, 0.8];
        assert!((MultiPoly::norm_sq(2).evaluate_f64(&u).unwrap() - 1.0).abs() < 1e-12);
        assert!(f.evaluate(&[int(1)]).is_err());
    }
}
