//! Normalized integration against `h_kappa^2 dsigma` on the sphere and the
//! induced weights on the ball and simplex.
//!
//! All three domains reduce to one computation: a sphere integral in `D`
//! variables against `P(x) prod |x_i|^{2 a_i}`, where `P` collects the
//! non-axis roots. Monomial moments of the diagonal part are Pochhammer
//! ratios, so the normalized integral is a ratio of two exact sums.

mod mc;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::groups::{RootSystem, WeightFactors};
use crate::poly::MultiPoly;
use crate::rational::{frac, is_integer, pochhammer, to_f64, Rational};

pub use mc::{mc_integrate, mc_integrate_fn, McEstimate};

/// `(1/omega) int x^alpha prod |x_i|^{2 kappa_i} dsigma` over the unit sphere
/// in `kappa.len()` variables.
pub fn sphere_monomial_integral(kappa: &[Rational], alpha: &[u32]) -> Result<Rational> {
    if kappa.len() != alpha.len() {
        return Err(Error::DimensionMismatch { expected: kappa.len(), found: alpha.len() });
    }
    if let Some(k) = kappa.iter().find(|k| k.is_negative()) {
        return Err(Error::InvalidParameter(format!("negative multiplicity {k}")));
    }
    if alpha.iter().any(|a| a % 2 == 1) {
        return Ok(Rational::zero());
    }
    let half = frac(1, 2);
    let total: Rational = kappa.iter().cloned().sum::<Rational>() + frac(kappa.len() as i64, 2);
    let mut num = Rational::from_integer(1.into());
    let mut size = 0;
    for (k, a) in kappa.iter().zip(alpha) {
        num *= pochhammer(&(k + &half), a / 2);
        size += a / 2;
    }
    Ok(num / pochhammer(&total, size))
}

/// A value that is exact when a closed form exists.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul_exact(&self, c: &Rational) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a * c),
            Scalar::Float(x) => Scalar::Float(x * to_f64(c)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", crate::rational::format_rational(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Sphere,
    Ball { mu: Rational },
    Simplex { mu: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// Diagonal weight only: Pochhammer moments.
    A,
    /// Integer multiplicities on non-axis roots: polynomial weight expansion.
    B,
    /// No exact route; Monte Carlo only.
    C,
}

#[derive(Debug)]
struct Exact {
    factors: WeightFactors,
    /// `sum over P of the diagonal moments`: the normalization of `P`.
    mass: Rational,
    cache: RwLock<HashMap<Vec<u32>, Rational>>,
}

impl Exact {
    fn new(factors: WeightFactors) -> Result<Self> {
        let mut ex = Exact { factors, mass: Rational::zero(), cache: RwLock::new(HashMap::new()) };
        let poly = ex.factors.poly.clone();
        ex.mass = ex.raw(&poly)?;
        if ex.mass.is_zero() {
            return Err(Error::Internal("weight has zero mass".into()));
        }
        Ok(ex)
    }

    fn moment(&self, alpha: &[u32]) -> Result<Rational> {
        if alpha.iter().any(|a| a % 2 == 1) {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.cache.read().expect("moment cache poisoned").get(alpha) {
            return Ok(v.clone());
        }
        let v = sphere_monomial_integral(&self.factors.axis_kappa, alpha)?;
        self.cache.write().expect("moment cache poisoned").insert(alpha.to_vec(), v.clone());
        Ok(v)
    }

    fn raw(&self, f: &MultiPoly) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in f.terms() {
            let mm = self.moment(m.exponents())?;
            if !mm.is_zero() {
                acc += c * mm;
            }
        }
        Ok(acc)
    }

    fn integrate(&self, f: &MultiPoly) -> Result<Rational> {
        let fp = if self.factors.poly.is_constant() {
            f.scale(&self.factors.poly.constant_term())
        } else {
            f * &self.factors.poly
        };
        Ok(self.raw(&fp)? / &self.mass)
    }

    /// Normalized `int |x_i| f`, for `f` expanded against the weight.
    fn integrate_abs(&self, i: usize, f: &MultiPoly) -> Result<Scalar> {
        let a = &self.factors.axis_kappa;
        let dd = a.len();
        let half = frac(1, 2);
        let big_a: Rational = a.iter().cloned().sum();
        let q = &big_a + frac(dd as i64, 2);
        let fp = f * &self.factors.poly;
        let mut acc = Rational::zero();
        for (m, c) in fp.terms() {
            let e = m.exponents();
            if e.iter().any(|k| k % 2 == 1) {
                continue;
            }
            let mut num = Rational::from_integer(1.into());
            let mut size = 0;
            for (j, k) in e.iter().enumerate() {
                let b = k / 2;
                size += b;
                num *= if j == i {
                    pochhammer(&(&a[j] + Rational::from_integer(1.into())), b)
                } else {
                    pochhammer(&(&a[j] + &half), b)
                };
            }
            acc += c * num / pochhammer(&(&q + &half), size);
        }
        let rho = half_shift_ratio(&(&a[i] + &half), &q);
        let base = acc / &self.mass;
        Ok(match rho {
            Scalar::Exact(r) => Scalar::Exact(base * r),
            Scalar::Float(r) => Scalar::Float(to_f64(&base) * r),
        })
    }
}

/// `Gamma(p + 1/2) Gamma(q) / (Gamma(p) Gamma(q + 1/2))`; rational when
/// `p - q` is an integer.
pub fn half_shift_ratio(p: &Rational, q: &Rational) -> Scalar {
    let diff = p - q;
    if is_integer(&diff) {
        let half = frac(1, 2);
        let k = diff.to_integer();
        let k: i64 = k.try_into().unwrap_or(i64::MAX);
        if k >= 0 {
            let k = k as u32;
            return Scalar::Exact(pochhammer(&(q + &half), k) / pochhammer(q, k));
        }
        let m = (-k) as u32;
        return Scalar::Exact(pochhammer(p, m) / pochhammer(&(p + &half), m));
    }
    let (p, q) = (to_f64(p), to_f64(q));
    Scalar::Float((ln_gamma(p + 0.5) + ln_gamma(q) - ln_gamma(p) - ln_gamma(q + 0.5)).exp())
}

/// A normalized weighted measure on the sphere, ball or simplex.
#[derive(Clone, Debug)]
pub struct WeightedDomain {
    shape: Shape,
    rs: RootSystem,
    /// Sphere-level system: `rs` itself, or `rs` with `mu` on an extra axis.
    lifted: RootSystem,
    exact: Arc<std::result::Result<Exact, Error>>,
}

impl WeightedDomain {
    pub fn sphere(rs: RootSystem) -> Self {
        Self::build(Shape::Sphere, rs.clone(), rs)
    }

    pub fn ball(rs: RootSystem, mu: Rational) -> Result<Self> {
        let lifted = lift_system(&rs, &mu)?;
        Ok(Self::build(Shape::Ball { mu }, rs, lifted))
    }

    /// The simplex weight obtained from the ball weight of `rs` through
    /// `x -> (x_1^2, ..., x_d^2)`.
    pub fn simplex(rs: RootSystem, mu: Rational) -> Result<Self> {
        let lifted = lift_system(&rs, &mu)?;
        Ok(Self::build(Shape::Simplex { mu }, rs, lifted))
    }

    fn build(shape: Shape, rs: RootSystem, lifted: RootSystem) -> Self {
        let exact = lifted.weight_factors().and_then(Exact::new);
        Self { shape, rs, lifted, exact: Arc::new(exact) }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn lifted_system(&self) -> &RootSystem {
        &self.lifted
    }

    pub fn dim(&self) -> usize {
        self.rs.dim()
    }

    pub fn mu(&self) -> Option<&Rational> {
        match &self.shape {
            Shape::Sphere => None,
            Shape::Ball { mu } | Shape::Simplex { mu } => Some(mu),
        }
    }

    /// `lambda_kappa` on the sphere, `gamma + mu + (d-1)/2` otherwise.
    pub fn lambda(&self) -> Rational {
        self.lifted.derived_constants().lambda_kappa
    }

    pub fn tier(&self) -> Tier {
        match self.exact.as_ref() {
            Err(_) => Tier::C,
            Ok(ex) if ex.factors.poly.is_constant() => Tier::A,
            Ok(_) => Tier::B,
        }
    }

    fn exact(&self) -> Result<&Exact> {
        self.exact.as_ref().as_ref().map_err(Clone::clone)
    }

    fn check(&self, f: &MultiPoly) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.dim() });
        }
        Ok(())
    }

    /// The polynomial in sphere variables whose integral equals that of `f`.
    pub fn to_sphere_integrand(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.check(f)?;
        Ok(match self.shape {
            Shape::Sphere => f.clone(),
            Shape::Ball { .. } => f.embed(self.dim() + 1),
            Shape::Simplex { .. } => f.inflate_exponents(2).embed(self.dim() + 1),
        })
    }

    /// Normalized integral of `f` against the domain's weight.
    pub fn integrate(&self, f: &MultiPoly) -> Result<Rational> {
        let g = self.to_sphere_integrand(f)?;
        self.exact()?.integrate(&g)
    }

    pub fn inner(&self, f: &MultiPoly, g: &MultiPoly) -> Result<Rational> {
        self.check(g)?;
        self.integrate(&(f * g))
    }

    pub fn norm_sq(&self, f: &MultiPoly) -> Result<Rational> {
        self.inner(f, f)
    }

    /// Normalized `int sqrt(x_i) f U dx` on the simplex.
    pub fn integrate_sqrt_coordinate(&self, i: usize, f: &MultiPoly) -> Result<Scalar> {
        if !matches!(self.shape, Shape::Simplex { .. }) {
            return Err(Error::InvalidParameter("sqrt localization is a simplex quantity".into()));
        }
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dimension: self.dim() });
        }
        let g = self.to_sphere_integrand(f)?;
        self.exact()?.integrate_abs(i, &g)
    }

    /// Point map from sphere samples to domain points.
    pub(crate) fn project_point(&self, s: &[f64], out: &mut Vec<f64>) {
        out.clear();
        match self.shape {
            Shape::Sphere => out.extend_from_slice(s),
            Shape::Ball { .. } => out.extend_from_slice(&s[..self.dim()]),
            Shape::Simplex { .. } => out.extend(s[..self.dim()].iter().map(|x| x * x)),
        }
    }
}

fn lift_system(rs: &RootSystem, mu: &Rational) -> Result<RootSystem> {
    if mu.is_negative() {
        return Err(Error::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
    }
    rs.extend_with_axis(mu.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Root;
    use crate::rational::int;

    fn x(d: usize, i: usize) -> MultiPoly {
        MultiPoly::var(d, i)
    }

    #[test]
    fn moment_examples() {
        assert_eq!(sphere_monomial_integral(&[int(1), int(0)], &[0, 0]).unwrap(), int(1));
        assert_eq!(sphere_monomial_integral(&[int(0), int(0), int(0)], &[2, 0, 0]).unwrap(), frac(1, 3));
        assert_eq!(sphere_monomial_integral(&[int(1), int(0)], &[2, 0]).unwrap(), frac(3, 4));
        assert!(sphere_monomial_integral(&[int(1), int(0)], &[3, 2]).unwrap().is_zero());
        assert!(sphere_monomial_integral(&[int(-1), int(0)], &[2, 0]).is_err());
    }

    #[test]
    fn sphere_examples() {
        let dom = WeightedDomain::sphere(RootSystem::trivial(3));
        assert_eq!(dom.integrate(&MultiPoly::one(3)).unwrap(), int(1));
        assert_eq!(dom.integrate(&MultiPoly::norm_sq(3).pow(2)).unwrap(), int(1));
        assert_eq!(dom.tier(), Tier::A);
    }

    #[test]
    fn tier_b_difference_squared() {
        // h^2 = (x1 - x2)^2 on the circle; with x1 = cos t, x2 = sin t,
        // (x1 - x2)^2 = 1 - sin 2t, whose normalized moments are
        // E[(1 - s)^2] / E[1 - s] = 3/2 for s = sin 2t.
        let r = Root::new(vec![int(1), int(-1)], int(1)).unwrap();
        let dom = WeightedDomain::sphere(RootSystem::new(2, vec![r]).unwrap());
        assert_eq!(dom.tier(), Tier::B);
        let f = (x(2, 0) - x(2, 1)).pow(2);
        assert_eq!(dom.integrate(&f).unwrap(), frac(3, 2));
    }

    #[test]
    fn ball_examples() {
        let dom = WeightedDomain::ball(RootSystem::trivial(1), frac(1, 2)).unwrap();
        assert_eq!(dom.integrate(&MultiPoly::one(1)).unwrap(), int(1));
        // Uniform weight on [-1, 1]: mean of x^2 is 1/3.
        assert_eq!(dom.integrate(&x(1, 0).pow(2)).unwrap(), frac(1, 3));
        let dom = WeightedDomain::ball(RootSystem::z2d(&[int(1), frac(1, 2)]).unwrap(), int(2)).unwrap();
        assert!(dom.integrate(&(x(2, 0) * x(2, 1).pow(2))).unwrap().is_zero());
    }

    #[test]
    fn simplex_examples() {
        let dom = WeightedDomain::simplex(RootSystem::z2d(&[frac(1, 2)]).unwrap(), frac(1, 2)).unwrap();
        assert_eq!(dom.integrate(&MultiPoly::one(1)).unwrap(), int(1));
        assert_eq!(dom.integrate(&x(1, 0)).unwrap(), frac(1, 2));
        assert_eq!(dom.integrate(&x(1, 0).pow(2)).unwrap(), frac(1, 3));
        // Uniform on [0,1]: mean of sqrt(x) is 2/3, of x sqrt(x) is 2/5.
        let s = dom.integrate_sqrt_coordinate(0, &MultiPoly::one(1)).unwrap();
        assert_eq!(s, Scalar::Exact(frac(2, 3)));
        let s = dom.integrate_sqrt_coordinate(0, &x(1, 0)).unwrap();
        assert_eq!(s, Scalar::Exact(frac(2, 5)));
    }

    #[test]
    fn half_shift_float_branch() {
        // Gamma(3/2) Gamma(1/3) / (Gamma(1) Gamma(5/6)).
        let p = int(1);
        let q = frac(1, 3);
        let want = (std::f64::consts::PI.sqrt() / 2.0) * 2.678_938_534_707_747 / 1.128_787_029_908_125;
        match half_shift_ratio(&p, &q) {
            Scalar::Float(v) => assert!((v - want).abs() < 1e-12 * want),
            s => panic!("expected float, got {s:?}"),
        }
    }

    #[test]
    fn non_integer_general_kappa_is_tier_c() {
        let r = Root::new(vec![int(1), int(-1)], frac(1, 2)).unwrap();
        let dom = WeightedDomain::sphere(RootSystem::new(2, vec![r]).unwrap());
        assert_eq!(dom.tier(), Tier::C);
        assert!(matches!(dom.integrate(&MultiPoly::one(2)), Err(Error::UnsupportedTier(_))));
    }
}
