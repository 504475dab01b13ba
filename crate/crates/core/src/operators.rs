//! Dunkl operators, the h-Laplacian, angular operators and their spherical
//! parts, all acting exactly on polynomials.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{DerivedConstants, RootSystem};
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, SphereFunction};
use crate::rational::{int, Rational};

#[derive(Clone, Debug)]
pub struct OperatorContext {
    rs: RootSystem,
    constants: DerivedConstants,
    reflections: Vec<Matrix>,
}

impl OperatorContext {
    pub fn new(rs: RootSystem) -> Self {
        let constants = rs.derived_constants();
        let reflections = rs.reflections();
        Self { rs, constants, reflections }
    }

    /// The unweighted case, where every operator is classical.
    pub fn classical(dim: usize) -> Self {
        Self::new(RootSystem::trivial(dim))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.rs.dim()
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn lambda(&self) -> &Rational {
        &self.constants.lambda_kappa
    }

    /// Indices of roots with nonzero multiplicity.
    fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rs.roots().len()).filter(|&k| !self.rs.roots()[k].multiplicity().is_zero())
    }

    fn check(&self, f: &MultiPoly) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.dim() });
        }
        Ok(())
    }

    fn check_axis(&self, i: usize) -> Result<()> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dimension: self.dim() });
        }
        Ok(())
    }

    /// `f o sigma_v` for root `k`.
    pub fn reflect_poly(&self, k: usize, f: &MultiPoly) -> Result<MultiPoly> {
        f.compose_linear(&self.reflections[k])
    }

    /// `E_v f = (f - f o sigma_v) / <x, v>` for root `k`.
    pub fn difference_e(&self, k: usize, f: &MultiPoly) -> Result<MultiPoly> {
        self.check(f)?;
        let num = f - &self.reflect_poly(k, f)?;
        num.divide_by_linear_form(self.rs.roots()[k].vector()).map_err(|e| match e {
            Error::NotDivisible(s) => Error::Internal(format!("difference quotient not exact: {s}")),
            other => other,
        })
    }

    /// `sum_v kappa_v E_v f v`, the difference part of the h-gradient.
    fn difference_vector(&self, f: &MultiPoly) -> Result<Vec<MultiPoly>> {
        let d = self.dim();
        let mut out = vec![MultiPoly::zero(d); d];
        for k in self.active() {
            let root = &self.rs.roots()[k];
            let e = self.difference_e(k, f)?.scale(root.multiplicity());
            if e.is_zero() {
                continue;
            }
            for (j, vj) in root.vector().iter().enumerate() {
                if !vj.is_zero() {
                    out[j] = &out[j] + &e.scale(vj);
                }
            }
        }
        Ok(out)
    }

    /// `D_j f = d_j f + sum_v kappa_v v_j E_v f`.
    pub fn dunkl(&self, j: usize, f: &MultiPoly) -> Result<MultiPoly> {
        self.check(f)?;
        self.check_axis(j)?;
        let mut out = f.differentiate(j)?;
        for k in self.active() {
            let root = &self.rs.roots()[k];
            let vj = &root.vector()[j];
            if vj.is_zero() {
                continue;
            }
            let e = self.difference_e(k, f)?;
            out = &out + &e.scale(&(root.multiplicity() * vj));
        }
        Ok(out)
    }

    /// `(D_1 f, ..., D_d f)`.
    pub fn h_gradient(&self, f: &MultiPoly) -> Result<Vec<MultiPoly>> {
        self.check(f)?;
        let diff = self.difference_vector(f)?;
        Ok(f.gradient().into_iter().zip(diff).map(|(a, b)| a + b).collect())
    }

    /// `Delta_h f = sum_i D_i D_i f`.
    pub fn h_laplacian(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let grad = self.h_gradient(f)?;
        let mut out = MultiPoly::zero(self.dim());
        for (i, g) in grad.iter().enumerate() {
            out = out + self.dunkl(i, g)?;
        }
        Ok(out)
    }

    /// `Delta f + sum_v kappa_v (2 v.grad f / <x,v> - |v|^2 (f - f o sigma_v) / <x,v>^2)`,
    /// each root term combined over `<x,v>^2` before the exact divisions.
    pub fn h_laplacian_explicit(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.check(f)?;
        let mut out = f.laplacian();
        let grad = f.gradient();
        for k in self.active() {
            let root = &self.rs.roots()[k];
            let v = root.vector();
            let ell = MultiPoly::linear_form(v);
            let v_grad: MultiPoly = grad
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(g, c)| g.scale(c))
                .fold(MultiPoly::zero(self.dim()), |a, b| a + b);
            let diff = f - &self.reflect_poly(k, f)?;
            let num = (ell * v_grad).scale(&int(2)) - diff.scale(&root.norm_sq());
            let q = num
                .divide_by_linear_form(v)
                .and_then(|p| p.divide_by_linear_form(v))
                .map_err(|e| Error::Internal(format!("explicit h-Laplacian: {e}")))?;
            out = out + q.scale(root.multiplicity());
        }
        Ok(out)
    }

    /// `D_{i,j} f = x_i D_j f - x_j D_i f`.
    pub fn angular_dunkl(&self, i: usize, j: usize, f: &MultiPoly) -> Result<MultiPoly> {
        if i == j {
            return Err(Error::EqualAxes(i));
        }
        Ok(self.dunkl(j, f)?.mul_var(i) - self.dunkl(i, f)?.mul_var(j))
    }

    /// `E_{i,j} f = sum_v kappa_v (x_i v_j - x_j v_i) E_v f`.
    pub fn angular_difference(&self, i: usize, j: usize, f: &MultiPoly) -> Result<MultiPoly> {
        if i == j {
            return Err(Error::EqualAxes(i));
        }
        self.check(f)?;
        self.check_axis(i)?;
        self.check_axis(j)?;
        let d = self.dim();
        let mut out = MultiPoly::zero(d);
        for k in self.active() {
            let root = &self.rs.roots()[k];
            let v = root.vector();
            if v[i].is_zero() && v[j].is_zero() {
                continue;
            }
            let e = self.difference_e(k, f)?;
            let factor = MultiPoly::var(d, i).scale(&v[j]) - MultiPoly::var(d, j).scale(&v[i]);
            out = out + (factor * e).scale(root.multiplicity());
        }
        Ok(out)
    }

    /// Spherical part of the h-gradient. With `P = sum P_n`,
    /// `(grad_{h,0} f)_j = (D_j P - x_j sum n P_n)` restricted to the sphere.
    pub fn spherical_gradient(&self, f: &SphereFunction) -> Result<Vec<SphereFunction>> {
        let p = f.representative();
        let radial = p.euler();
        self.h_gradient(p)?.into_iter().enumerate().map(|(j, g)| (g - radial.mul_var(j)).reduce_mod_sphere()).collect()
    }

    /// `xi . grad_{h,0} f = sum_v kappa_v (f - f o sigma_v)`.
    pub fn xi_dot_gradient(&self, f: &SphereFunction) -> Result<SphereFunction> {
        let mut out = SphereFunction::zero(self.dim());
        for k in self.active() {
            let t = self.i_minus_sigma(k, f)?;
            out = &out + &t.scale(self.rs.roots()[k].multiplicity());
        }
        Ok(out)
    }

    /// `(I - sigma_v) f` for root `k`.
    pub fn i_minus_sigma(&self, k: usize, f: &SphereFunction) -> Result<SphereFunction> {
        Ok(f - &f.compose_linear(&self.reflections[k])?)
    }

    /// `Delta_{h,0}`: on a degree-n part, `Delta_h P_n - n(n + 2 lambda) P_n`.
    pub fn laplace_beltrami(&self, f: &SphereFunction) -> Result<SphereFunction> {
        let p = f.representative();
        let e1 = p.euler();
        let e2 = e1.euler();
        let two_lambda = self.lambda() * int(2);
        (self.h_laplacian(p)? - e2 - e1.scale(&two_lambda)).reduce_mod_sphere()
    }

    /// `D_{i,j}` on a sphere function; it preserves the sphere ideal.
    pub fn angular_dunkl_sphere(&self, i: usize, j: usize, f: &SphereFunction) -> Result<SphereFunction> {
        self.angular_dunkl(i, j, f.representative())?.reduce_mod_sphere()
    }

    pub fn is_invariant(&self, f: &MultiPoly) -> Result<bool> {
        for m in &self.reflections {
            if f.compose_linear(m)? != *f {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `D_{i,j} f = x_i d_j f - x_j d_i f`.
pub fn angular_classical(i: usize, j: usize, f: &MultiPoly) -> Result<MultiPoly> {
    if i == j {
        return Err(Error::EqualAxes(i));
    }
    Ok(f.differentiate(j)?.mul_var(i) - f.differentiate(i)?.mul_var(j))
}

/// Pointwise dot product of two vectors of sphere functions.
pub fn dot_sphere(a: &[SphereFunction], b: &[SphereFunction]) -> SphereFunction {
    assert_eq!(a.len(), b.len());
    let dim = a.first().map(SphereFunction::dim).unwrap_or(2);
    a.iter().zip(b).fold(SphereFunction::zero(dim), |acc, (x, y)| &acc + &(x * y))
}

/// `sum_j xi_j F_j`.
pub fn xi_dot(v: &[SphereFunction]) -> SphereFunction {
    let dim = v.first().map(SphereFunction::dim).unwrap_or(2);
    v.iter().enumerate().fold(SphereFunction::zero(dim), |acc, (j, c)| &acc + &c.mul_coordinate(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Root;
    use crate::rational::frac;

    fn x(d: usize, i: usize) -> MultiPoly {
        MultiPoly::var(d, i)
    }

    fn z2(k1: Rational, k2: Rational) -> OperatorContext {
        OperatorContext::new(RootSystem::z2d(&[k1, k2]).unwrap())
    }

    fn a1() -> OperatorContext {
        let r = Root::new(vec![int(1), int(-1)], int(1)).unwrap();
        OperatorContext::new(RootSystem::new(2, vec![r]).unwrap())
    }

    #[test]
    fn difference_examples() {
        let ctx = z2(int(1), int(0));
        assert_eq!(ctx.difference_e(0, &x(2, 0)).unwrap(), MultiPoly::constant(2, int(2)));
        assert!(ctx.difference_e(0, &MultiPoly::norm_sq(2)).unwrap().is_zero());
        let ctx = a1();
        assert_eq!(ctx.difference_e(0, &x(2, 0).pow(2)).unwrap(), x(2, 0) + x(2, 1));
    }

    #[test]
    fn dunkl_examples() {
        let k1 = frac(3, 7);
        let ctx = z2(k1.clone(), int(2));
        let want = MultiPoly::constant(2, int(1) + int(2) * k1);
        assert_eq!(ctx.dunkl(0, &x(2, 0)).unwrap(), want);
        assert!(ctx.dunkl(1, &MultiPoly::constant(2, int(5))).unwrap().is_zero());
        assert!(ctx.dunkl(0, &x(2, 1)).unwrap().is_zero());
        assert!(ctx.dunkl(2, &x(2, 1)).is_err());
    }

    #[test]
    fn h_laplacian_examples() {
        let ctx = z2(frac(1, 3), int(2));
        let lam = ctx.lambda().clone();
        let want = MultiPoly::constant(2, int(4) * (lam + int(1)));
        assert_eq!(ctx.h_laplacian(&MultiPoly::norm_sq(2)).unwrap(), want);
        let c = OperatorContext::classical(3);
        assert!(c.h_laplacian(&(x(3, 0) * x(3, 1))).unwrap().is_zero());
        assert!(ctx.h_laplacian(&MultiPoly::one(2)).unwrap().is_zero());
        let f = x(2, 0).pow(3) * x(2, 1) + x(2, 1).pow(4);
        assert_eq!(ctx.h_laplacian(&f).unwrap(), ctx.h_laplacian_explicit(&f).unwrap());
        let g = a1();
        assert_eq!(g.h_laplacian(&f).unwrap(), g.h_laplacian_explicit(&f).unwrap());
    }

    #[test]
    fn angular_examples() {
        assert_eq!(angular_classical(0, 1, &x(2, 0)).unwrap(), -x(2, 1));
        assert!(angular_classical(0, 1, &MultiPoly::norm_sq(2)).unwrap().is_zero());
        assert!(matches!(angular_classical(1, 1, &x(2, 0)), Err(Error::EqualAxes(1))));
        let k2 = frac(5, 2);
        let ctx = z2(int(1), k2.clone());
        let want = x(2, 0).scale(&(int(1) + int(2) * k2));
        assert_eq!(ctx.angular_dunkl(0, 1, &x(2, 1)).unwrap(), want);
    }

    #[test]
    fn spherical_examples() {
        let c = OperatorContext::classical(3);
        let f = x(3, 2).reduce_mod_sphere().unwrap();
        let g = c.spherical_gradient(&f).unwrap();
        let want = [-(x(3, 0) * x(3, 2)), -(x(3, 1) * x(3, 2)), MultiPoly::one(3) - x(3, 2).pow(2)];
        for (gi, wi) in g.iter().zip(want) {
            assert_eq!(gi, &wi.reduce_mod_sphere().unwrap());
        }
        let one = SphereFunction::constant(3, int(1));
        assert!(c.spherical_gradient(&one).unwrap().iter().all(SphereFunction::is_zero));

        let ctx = z2(int(1), int(0));
        let s = x(2, 0).reduce_mod_sphere().unwrap();
        assert_eq!(ctx.xi_dot_gradient(&s).unwrap(), s.scale(&int(2)));

        let h = (x(3, 0) * x(3, 1)).reduce_mod_sphere().unwrap();
        assert_eq!(c.laplace_beltrami(&h).unwrap(), h.scale(&int(-6)));
        assert!(c.laplace_beltrami(&one).unwrap().is_zero());
    }
}
