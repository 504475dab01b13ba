//! Uncertainty functionals on the sphere, ball and simplex.
//!
//! A normalized function `g = c / sqrt(N)` is carried as the centered
//! polynomial `c` together with `N = ||c||^2`. Every functional below is
//! quadratic in `g`, so it is the rational `(functional of c) / N`.

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domains::{ball_triple_norm_sq, corollary_gradient_density, permutation_group, simplex_triple_norm_sq};
use crate::error::{Error, Result};
use crate::harmonics::Harmonics;
use crate::operators::{dot_sphere, OperatorContext};
use crate::poly::MultiPoly;
use crate::quadrature::{Scalar, Shape, WeightedDomain};
use crate::rational::{frac, int, to_f64, Rational};

/// `g = centered / sqrt(norm_sq)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissible {
    pub centered: MultiPoly,
    pub norm_sq: Rational,
}

impl Admissible {
    /// Treats `f` as already normalized.
    pub fn unit(f: MultiPoly) -> Self {
        Self { centered: f, norm_sq: Rational::one() }
    }

    /// `int q(g) = int q(c) / N` for a quadratic functional already applied to `c`.
    fn scale(&self, q: Rational) -> Rational {
        q / &self.norm_sq
    }

    pub fn negated(&self) -> Self {
        Self { centered: -&self.centered, norm_sq: self.norm_sq.clone() }
    }
}

/// Subtracts the weighted mean and records the squared norm of the rest.
pub fn make_admissible(dom: &WeightedDomain, f: &MultiPoly) -> Result<Admissible> {
    let mean = dom.integrate(f)?;
    let centered = f - &MultiPoly::constant(f.dim(), mean);
    let norm_sq = dom.norm_sq(&centered)?;
    if norm_sq.is_zero() {
        return Err(Error::Degenerate("function is constant on the domain".into()));
    }
    Ok(Admissible { centered, norm_sq })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityFlags {
    /// `int c`; zero iff `g` has mean zero.
    pub mean_residual: Rational,
    /// `||g||^2 - 1`.
    pub norm_residual: Rational,
    pub invariant: bool,
}

impl AdmissibilityFlags {
    pub fn admissible(&self) -> bool {
        self.mean_residual.is_zero() && self.norm_residual.is_zero()
    }
}

fn flags(dom: &WeightedDomain, f: &Admissible, invariant: bool) -> Result<AdmissibilityFlags> {
    if f.norm_sq.is_zero() || f.norm_sq.is_negative() {
        return Err(Error::NotAdmissible("normalization must be positive".into()));
    }
    let flags = AdmissibilityFlags {
        mean_residual: dom.integrate(&f.centered)?,
        norm_residual: f.scale(dom.norm_sq(&f.centered)?) - Rational::one(),
        invariant,
    };
    if !flags.admissible() {
        return Err(Error::NotAdmissible(format!(
            "mean {} and norm residual {}",
            flags.mean_residual, flags.norm_residual
        )));
    }
    Ok(flags)
}

/// `C(lambda) = 2 lambda (1 - sqrt(2 lambda) / sqrt((lambda + 1/2)^2 + 2 lambda))`.
pub fn constant_c(lambda: &Rational) -> Result<f64> {
    if lambda.is_negative() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} is negative")));
    }
    if lambda.is_zero() {
        return Ok(0.0);
    }
    // 1 - a/b = (b^2 - a^2) / (b (a + b)) with b^2 - a^2 = (lambda + 1/2)^2.
    let l = to_f64(lambda);
    let shifted = lambda + frac(1, 2);
    let num = to_f64(&(&shifted * &shifted));
    let a = (2.0 * l).sqrt();
    let b = to_f64(&(&shifted * &shifted + lambda * int(2))).sqrt();
    Ok(2.0 * l * num / (b * (a + b)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyResult {
    /// The minimum of `localization_terms`.
    pub localization: Scalar,
    /// One term per axis, or per direction in the direction modes.
    pub localization_terms: Vec<Scalar>,
    pub gradient_sq: Rational,
    pub product: Scalar,
    pub constant: f64,
    pub margin: f64,
    pub flags: AdmissibilityFlags,
    /// `lambda = 0`, where the bound is `0` and holds for any input.
    pub trivially_true: bool,
    /// Sphere only: `||grad_{h,0} f||^2`, equal to `gradient_sq` for invariant `f`.
    pub h_gradient_sq: Option<Rational>,
    /// Direction modes: the exact minimum over all unit `e`, `1 - |m|` with
    /// `m = int x g^2`, and the margin it gives.
    pub direction_infimum: Option<f64>,
    pub infimum_margin: Option<f64>,
}

fn min_scalar(terms: &[Scalar]) -> Scalar {
    terms
        .iter()
        .min_by(|a, b| match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x.cmp(y),
            _ => a.to_f64().total_cmp(&b.to_f64()),
        })
        .cloned()
        .expect("at least one localization term")
}

fn finish(
    terms: Vec<Scalar>,
    gradient_sq: Rational,
    constant: f64,
    flags: AdmissibilityFlags,
    lambda: &Rational,
) -> UncertaintyResult {
    let localization = min_scalar(&terms);
    let product = localization.mul_exact(&gradient_sq);
    let margin = product.to_f64() - constant;
    UncertaintyResult {
        localization,
        localization_terms: terms,
        gradient_sq,
        product,
        constant,
        margin,
        flags,
        trivially_true: lambda.is_zero(),
        h_gradient_sq: None,
        direction_infimum: None,
        infimum_margin: None,
    }
}

/// `int (1 - x_i) g^2` for each axis.
fn axis_terms(dom: &WeightedDomain, f: &Admissible) -> Result<Vec<Scalar>> {
    let d = dom.dim();
    let sq = &f.centered * &f.centered;
    (0..d)
        .map(|i| {
            let w = MultiPoly::one(d) - MultiPoly::var(d, i);
            Ok(Scalar::Exact(f.scale(dom.integrate(&(&w * &sq))?)))
        })
        .collect()
}

fn sphere_invariant(ctx: &OperatorContext, f: &MultiPoly) -> Result<bool> {
    let reduced = f.reduce_mod_sphere()?;
    for r in ctx.root_system().roots() {
        if reduced.compose_linear(&r.reflection_matrix())? != reduced {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sphere_gradient_norms(ctx: &OperatorContext, dom: &WeightedDomain, f: &MultiPoly) -> Result<(Rational, Rational)> {
    let s = f.reduce_mod_sphere()?;
    let g0 = OperatorContext::classical(ctx.dim()).spherical_gradient(&s)?;
    let gh = ctx.spherical_gradient(&s)?;
    Ok((dom.integrate(dot_sphere(&g0, &g0).representative())?, dom.integrate(dot_sphere(&gh, &gh).representative())?))
}

/// `min_i int (1 - x_i) |f|^2 h^2 * ||grad_0 f||^2` against `C(lambda_kappa)`.
/// A non-invariant input is flagged, not rejected.
pub fn sphere_uncertainty(ctx: &OperatorContext, f: &Admissible) -> Result<UncertaintyResult> {
    let dom = WeightedDomain::sphere(ctx.root_system().clone());
    let fl = flags(&dom, f, sphere_invariant(ctx, &f.centered)?)?;
    let terms = axis_terms(&dom, f)?;
    let (g0, gh) = sphere_gradient_norms(ctx, &dom, &f.centered)?;
    let lambda = ctx.lambda().clone();
    let mut out = finish(terms, f.scale(g0), constant_c(&lambda)?, fl, &lambda);
    out.h_gradient_sq = Some(f.scale(gh));
    Ok(out)
}

/// The steps of the sphere proof that can be checked exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereProofChain {
    /// `||(-Delta_{h,0})^{1/2} g||^2`.
    pub sobolev: Rational,
    pub gradient_sq: Rational,
    pub h_gradient_sq: Rational,
    pub two_lambda: Rational,
    /// Per axis `(int (1 - x_i^2) g^2, (2 - r) r)`.
    pub localization_bounds: Vec<(Rational, Rational)>,
    /// Per axis `(r ||grad_0 g||^2, (lambda + 1/2)^2 (1 - r)^2 / (2 - r))`.
    pub product_bounds: Vec<(Rational, Rational)>,
}

impl SphereProofChain {
    pub fn spectral_gap_holds(&self) -> bool {
        self.sobolev >= self.two_lambda && self.gradient_sq >= self.two_lambda
    }

    /// The Sobolev norm equals the gradient norm for invariant functions.
    pub fn gradient_identity_holds(&self) -> bool {
        self.sobolev == self.h_gradient_sq && self.h_gradient_sq == self.gradient_sq
    }

    pub fn localization_bounds_hold(&self) -> bool {
        self.localization_bounds.iter().all(|(l, r)| l <= r)
    }

    pub fn product_bounds_hold(&self) -> bool {
        self.product_bounds.iter().all(|(l, r)| l >= r)
    }
}

pub fn sphere_proof_chain(h: &Harmonics, f: &Admissible) -> Result<SphereProofChain> {
    let ctx = h.context();
    let dom = h.sphere();
    flags(dom, f, true)?;
    let d = ctx.dim();
    let s = f.centered.reduce_mod_sphere()?;
    let sobolev = f.scale(h.sobolev_half_norm_sq(&s)?);
    let (g0, gh) = sphere_gradient_norms(ctx, dom, &f.centered)?;
    let gradient_sq = f.scale(g0);
    let shifted = ctx.lambda() + frac(1, 2);
    let sq = &f.centered * &f.centered;
    let mut localization_bounds = Vec::with_capacity(d);
    let mut product_bounds = Vec::with_capacity(d);
    for i in 0..d {
        let xi = MultiPoly::var(d, i);
        let r = f.scale(dom.integrate(&((MultiPoly::one(d) - &xi) * &sq))?);
        let lhs = f.scale(dom.integrate(&((MultiPoly::one(d) - xi.pow(2)) * &sq))?);
        let one_minus = Rational::one() - &r;
        let two_minus = int(2) - &r;
        product_bounds.push((&r * &gradient_sq, &shifted * &shifted * &one_minus * &one_minus / &two_minus));
        localization_bounds.push((lhs, two_minus * r));
    }
    Ok(SphereProofChain {
        sobolev,
        gradient_sq,
        h_gradient_sq: f.scale(gh),
        two_lambda: ctx.lambda() * int(2),
        localization_bounds,
        product_bounds,
    })
}

/// Componentwise `((2 lambda + 1) int x_j f^2, 2 int f (grad_{h,0} f)_j)`.
pub fn adjoint_moment_identity(ctx: &OperatorContext, f: &MultiPoly) -> Result<Vec<(Rational, Rational)>> {
    let dom = WeightedDomain::sphere(ctx.root_system().clone());
    let s = f.reduce_mod_sphere()?;
    let grad = ctx.spherical_gradient(&s)?;
    let sq = f * f;
    let c = ctx.lambda() * int(2) + int(1);
    let d = ctx.dim();
    grad.iter()
        .enumerate()
        .map(|(j, gj)| {
            let lhs = &c * dom.integrate(&(&sq * &MultiPoly::var(d, j)))?;
            let rhs = int(2) * dom.integrate(&(f * gj.representative()))?;
            Ok((lhs, rhs))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallMode {
    /// Minimum over the coordinate axes, `G`-invariant `f`.
    InvariantAxes,
    /// Minimum over directions, unweighted `h`, gradient `|||grad f|||`.
    ClassicalDirections,
    /// As `ClassicalDirections` with gradient `sum (1 - x_i^2)(d_i f)^2`.
    Corollary,
}

/// `n` uniformly random unit vectors in `R^d`.
pub fn sample_directions(d: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if r > 1e-12 {
                break v.into_iter().map(|t| t / r).collect();
            }
        })
        .collect()
}

/// Ball uncertainty product. `directions` is used only by the direction
/// modes, in addition to `+-e_i`; vectors are normalized here.
pub fn ball_uncertainty(
    dom: &WeightedDomain,
    f: &Admissible,
    mode: BallMode,
    directions: &[Vec<f64>],
) -> Result<UncertaintyResult> {
    if !matches!(dom.shape(), Shape::Ball { .. }) {
        return Err(Error::InvalidParameter("expected a ball domain".into()));
    }
    let d = dom.dim();
    let rs = dom.root_system();
    let invariant = rs.is_invariant(&f.centered)?;
    let fl = flags(dom, f, invariant)?;
    let lambda = dom.lambda();
    let constant = constant_c(&lambda)?;
    if mode == BallMode::InvariantAxes {
        if !invariant {
            return Err(Error::NotAdmissible("axes mode needs a G-invariant function".into()));
        }
        let terms = axis_terms(dom, f)?;
        let grad = f.scale(ball_triple_norm_sq(dom, &f.centered)?);
        return Ok(finish(terms, grad, constant, fl, &lambda));
    }
    if !rs.is_trivial_weight() {
        return Err(Error::InvalidParameter("direction modes need kappa = 0".into()));
    }
    let sq = &f.centered * &f.centered;
    let m: Vec<Rational> =
        (0..d).map(|i| Ok(f.scale(dom.integrate(&(&sq * &MultiPoly::var(d, i)))?))).collect::<Result<_>>()?;
    let mut terms = Vec::with_capacity(2 * d + directions.len());
    for mi in &m {
        terms.push(Scalar::Exact(Rational::one() - mi));
        terms.push(Scalar::Exact(Rational::one() + mi));
    }
    let mf: Vec<f64> = m.iter().map(to_f64).collect();
    for e in directions {
        if e.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: e.len() });
        }
        let r = e.iter().map(|t| t * t).sum::<f64>().sqrt();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter("direction must be a nonzero finite vector".into()));
        }
        let ip: f64 = e.iter().zip(&mf).map(|(a, b)| a * b).sum::<f64>() / r;
        terms.push(Scalar::Float(1.0 - ip));
    }
    let grad = match mode {
        BallMode::ClassicalDirections => ball_triple_norm_sq(dom, &f.centered)?,
        _ => dom.integrate(&corollary_gradient_density(&f.centered))?,
    };
    let mut out = finish(terms, f.scale(grad), constant, fl, &lambda);
    let inf = 1.0 - to_f64(&m.iter().map(|t| t * t).sum::<Rational>()).sqrt();
    out.direction_infimum = Some(inf);
    out.infimum_margin = Some(inf * to_f64(&out.gradient_sq) - constant);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplexMode {
    /// Diagonal weight `prod x_i^{kappa_i - 1/2} (1 - |x|_1)^{mu - 1/2}`.
    Jacobi,
    /// Weight with factors `|x_i - x_j|`, symmetric `f`.
    HyperoctahedralSymmetric,
}

/// `min_i int (1 - sqrt(x_i)) |f|^2 U * |||df|||^2` against `C(lambda_{kappa,mu}) / 4`.
pub fn simplex_uncertainty(dom: &WeightedDomain, f: &Admissible, mode: SimplexMode) -> Result<UncertaintyResult> {
    if !matches!(dom.shape(), Shape::Simplex { .. }) {
        return Err(Error::InvalidParameter("expected a simplex domain".into()));
    }
    let d = dom.dim();
    let symmetric = is_symmetric(&f.centered)?;
    match mode {
        SimplexMode::Jacobi if dom.root_system().roots().iter().any(|r| r.axis().is_none()) => {
            return Err(Error::InvalidParameter("Jacobi mode needs a diagonal weight".into()));
        }
        SimplexMode::HyperoctahedralSymmetric if !symmetric => {
            return Err(Error::NotAdmissible("hyperoctahedral mode needs a symmetric function".into()));
        }
        _ => {}
    }
    let fl = flags(dom, f, symmetric)?;
    let sq = &f.centered * &f.centered;
    let terms = (0..d)
        .map(|i| {
            let s = dom.integrate_sqrt_coordinate(i, &sq)?.mul_exact(&f.norm_sq.recip());
            Ok(Scalar::Exact(Rational::one()).add(&s.mul_exact(&int(-1))))
        })
        .collect::<Result<Vec<_>>>()?;
    let grad = f.scale(simplex_triple_norm_sq(dom, &f.centered)?);
    let lambda = dom.lambda();
    Ok(finish(terms, grad, simplex_constant(&lambda)?, fl, &lambda))
}

/// The simplex bound is a quarter of the ball bound.
pub fn simplex_constant(lambda: &Rational) -> Result<f64> {
    Ok(constant_c(lambda)? / 4.0)
}

fn is_symmetric(f: &MultiPoly) -> Result<bool> {
    for p in permutation_group(f.dim()) {
        if f.compose_linear(&p)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}
