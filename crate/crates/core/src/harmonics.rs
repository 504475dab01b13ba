//! h-harmonic decomposition, projections onto the eigenspaces of the
//! h-Laplace-Beltrami operator, and functions of that operator.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::OperatorContext;
use crate::poly::{MultiPoly, SphereFunction};
use crate::quadrature::WeightedDomain;
use crate::rational::{int, is_integer, Rational};

pub const DEFAULT_DEGREE_CAP: u32 = 10;

/// Degree-indexed h-harmonic components of a sphere function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicExpansion {
    pub components: BTreeMap<u32, MultiPoly>,
}

impl HarmonicExpansion {
    pub fn component(&self, n: u32) -> Option<&MultiPoly> {
        self.components.get(&n)
    }

    pub fn sum(&self, dim: usize) -> MultiPoly {
        self.components.values().fold(MultiPoly::zero(dim), |a, b| a + b)
    }
}

/// Matrix of `g -> Delta_h(|x|^2 g)` on homogeneous polynomials of one degree.
struct LiftSystem {
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    rows: Vec<Vec<Rational>>,
}

pub struct Harmonics {
    ctx: OperatorContext,
    sphere: WeightedDomain,
    degree_cap: u32,
    systems: Mutex<HashMap<u32, Arc<LiftSystem>>>,
}

fn monomials(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == dim - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(dim, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
    out
}

impl Harmonics {
    pub fn new(ctx: OperatorContext) -> Self {
        let sphere = WeightedDomain::sphere(ctx.root_system().clone());
        Self { ctx, sphere, degree_cap: DEFAULT_DEGREE_CAP, systems: Mutex::new(HashMap::new()) }
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn context(&self) -> &OperatorContext {
        &self.ctx
    }

    pub fn sphere(&self) -> &WeightedDomain {
        &self.sphere
    }

    fn system(&self, m: u32) -> Result<Arc<LiftSystem>> {
        if let Some(s) = self.systems.lock().expect("system cache poisoned").get(&m) {
            return Ok(s.clone());
        }
        let d = self.ctx.dim();
        let basis = monomials(d, m);
        let index: HashMap<Vec<u32>, usize> = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let n = basis.len();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        let r2 = MultiPoly::norm_sq(d);
        for (col, e) in basis.iter().enumerate() {
            let g = MultiPoly::monomial(d, e.clone(), int(1));
            let image = self.ctx.h_laplacian(&(&r2 * &g))?;
            for (mono, c) in image.terms() {
                let row = index[mono.exponents()];
                rows[row][col] = c.clone();
            }
        }
        let sys = Arc::new(LiftSystem { basis, index, rows });
        self.systems.lock().expect("system cache poisoned").insert(m, sys.clone());
        Ok(sys)
    }

    /// Writes homogeneous `P` of degree `n` as `sum_j |x|^{2j} P_{n-2j}` with
    /// every `P_{n-2j}` h-harmonic. Returns `(j, P_{n-2j})` for nonzero parts.
    pub fn harmonic_decompose(&self, p: &MultiPoly) -> Result<Vec<(u32, MultiPoly)>> {
        if !p.is_homogeneous() {
            return Err(Error::InvalidParameter("harmonic decomposition needs a homogeneous polynomial".into()));
        }
        let Some(n) = p.degree() else {
            return Ok(Vec::new());
        };
        if n > self.degree_cap {
            return Err(Error::InvalidParameter(format!(
                "degree {n} exceeds the decomposition cap {}",
                self.degree_cap
            )));
        }
        let d = self.ctx.dim();
        let r2 = MultiPoly::norm_sq(d);
        let mut out = Vec::new();
        let mut cur = p.clone();
        let mut j = 0;
        while !cur.is_zero() {
            let lap = self.ctx.h_laplacian(&cur)?;
            if lap.is_zero() {
                out.push((j, cur));
                break;
            }
            let m = cur.degree().expect("nonzero") - 2;
            let sys = self.system(m)?;
            let mut rhs = vec![Rational::zero(); sys.basis.len()];
            for (mono, c) in lap.terms() {
                rhs[sys.index[mono.exponents()]] = c.clone();
            }
            let sol = linalg::solve(&sys.rows, &rhs)?;
            let g = MultiPoly::from_terms(d, sys.basis.iter().cloned().zip(sol).filter(|(_, c)| !c.is_zero()));
            let y = &cur - &(&r2 * &g);
            if !self.ctx.h_laplacian(&y)?.is_zero() {
                return Err(Error::Internal(format!("harmonic part of degree {} is not harmonic", m + 2)));
            }
            if !y.is_zero() {
                out.push((j, y));
            }
            cur = g;
            j += 1;
        }
        Ok(out)
    }

    pub fn expand(&self, f: &SphereFunction) -> Result<HarmonicExpansion> {
        let mut components: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        let d = self.ctx.dim();
        for (m, part) in f.representative().homogeneous_decompose() {
            for (j, y) in self.harmonic_decompose(&part)? {
                let deg = m - 2 * j;
                let slot = components.entry(deg).or_insert_with(|| MultiPoly::zero(d));
                *slot = &*slot + &y;
            }
        }
        components.retain(|_, y| !y.is_zero());
        Ok(HarmonicExpansion { components })
    }

    /// `proj_n f`.
    pub fn proj(&self, f: &SphereFunction, n: u32) -> Result<MultiPoly> {
        Ok(self.expand(f)?.components.remove(&n).unwrap_or_else(|| MultiPoly::zero(self.ctx.dim())))
    }

    /// `n (n + 2 lambda)`.
    pub fn eigenvalue(&self, n: u32) -> Rational {
        let n = int(n as i64);
        &n * (&n + self.ctx.lambda() * int(2))
    }

    /// `sum_{n >= 1} (n(n + 2 lambda))^r proj_n f`, for integer `r`.
    pub fn neg_laplacian_power(&self, f: &SphereFunction, r: &Rational) -> Result<SphereFunction> {
        if !is_integer(r) {
            return Err(Error::InvalidParameter(format!(
                "fractional power {r} has irrational eigenvalues; use sobolev_half_norm_sq for r = 1/2"
            )));
        }
        let k: i32 =
            r.to_integer().try_into().map_err(|_| Error::InvalidParameter(format!("power {r} out of range")))?;
        let d = self.ctx.dim();
        let mut out = MultiPoly::zero(d);
        for (n, y) in self.expand(f)?.components {
            if n == 0 {
                continue;
            }
            let ev = num_traits::pow::pow(self.eigenvalue(n), k.unsigned_abs() as usize);
            let c = if k >= 0 { ev } else { num_traits::Inv::inv(ev) };
            out = out + y.scale(&c);
        }
        out.reduce_mod_sphere()
    }

    /// `||(-Delta_{h,0})^{1/2} f||^2 = sum_n n(n + 2 lambda) ||proj_n f||^2`.
    pub fn sobolev_half_norm_sq(&self, f: &SphereFunction) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (n, y) in self.expand(f)?.components {
            if n > 0 {
                acc += self.eigenvalue(n) * self.sphere.norm_sq(&y)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::RootSystem;
    use crate::rational::frac;

    fn x(d: usize, i: usize) -> MultiPoly {
        MultiPoly::var(d, i)
    }

    #[test]
    fn classical_decompositions() {
        let h = Harmonics::new(OperatorContext::classical(3));
        let parts = h.harmonic_decompose(&MultiPoly::norm_sq(3)).unwrap();
        assert_eq!(parts, vec![(1, MultiPoly::one(3))]);

        let parts = h.harmonic_decompose(&x(3, 0).pow(2)).unwrap();
        let y = x(3, 0).pow(2) - MultiPoly::norm_sq(3).scale(&frac(1, 3));
        assert_eq!(parts, vec![(0, y), (1, MultiPoly::constant(3, frac(1, 3)))]);

        let harm = x(3, 0) * x(3, 1);
        assert_eq!(h.harmonic_decompose(&harm).unwrap(), vec![(0, harm)]);
    }

    #[test]
    fn projections() {
        let h = Harmonics::new(OperatorContext::classical(3));
        let c = SphereFunction::constant(3, frac(5, 2));
        assert_eq!(h.proj(&c, 0).unwrap(), MultiPoly::constant(3, frac(5, 2)));
        assert!(h.proj(&c, 1).unwrap().is_zero());
        let f = x(3, 0).pow(2).reduce_mod_sphere().unwrap();
        assert_eq!(h.proj(&f, 0).unwrap(), MultiPoly::constant(3, frac(1, 3)));
        let want = x(3, 0).pow(2) - MultiPoly::norm_sq(3).scale(&frac(1, 3));
        assert_eq!(h.proj(&f, 2).unwrap(), want);
    }

    #[test]
    fn powers_and_sobolev() {
        let rs = RootSystem::z2d(&[frac(1, 2), int(1), int(0)]).unwrap();
        let h = Harmonics::new(OperatorContext::new(rs));
        let y = h.harmonic_decompose(&(x(3, 0) * x(3, 1))).unwrap().remove(0).1;
        let ys = y.reduce_mod_sphere().unwrap();
        let ev = h.eigenvalue(2);
        assert_eq!(h.neg_laplacian_power(&ys, &int(1)).unwrap(), ys.scale(&ev));
        assert_eq!(h.neg_laplacian_power(&ys, &int(0)).unwrap(), ys);
        assert!(h.neg_laplacian_power(&ys, &frac(1, 2)).is_err());
        let ns = h.sphere().norm_sq(&y).unwrap();
        assert_eq!(h.sobolev_half_norm_sq(&ys).unwrap(), ev * ns);
        assert!(h.sobolev_half_norm_sq(&SphereFunction::constant(3, int(4))).unwrap().is_zero());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 4).len(), 35);
        assert_eq!(monomials(2, 0), vec![vec![0, 0]]);
    }
}
