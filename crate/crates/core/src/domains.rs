//! Ball and simplex: the lift to the sphere, the squaring map, the gradient
//! norms used by the uncertainty inequalities, the eigen-operator of the ball
//! orthogonal polynomials, and the intrinsic distances.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::operators::{angular_classical, OperatorContext};
use crate::poly::{MultiPoly, SphereFunction};
use crate::quadrature::{Shape, WeightedDomain};
use crate::rational::{int, Rational};

fn expect_ball(dom: &WeightedDomain) -> Result<()> {
    match dom.shape() {
        Shape::Ball { .. } => Ok(()),
        _ => Err(Error::InvalidParameter("expected a ball domain".into())),
    }
}

fn expect_simplex(dom: &WeightedDomain) -> Result<()> {
    match dom.shape() {
        Shape::Simplex { .. } => Ok(()),
        _ => Err(Error::InvalidParameter("expected a simplex domain".into())),
    }
}

/// `F(x, x_{d+1}) = f(x)` restricted to the sphere in `d + 1` variables.
pub fn lift_to_sphere(f: &MultiPoly) -> Result<SphereFunction> {
    f.embed(f.dim() + 1).reduce_mod_sphere()
}

/// The sphere domain in `d + 1` variables that a ball or simplex lifts to.
pub fn lifted_sphere(dom: &WeightedDomain) -> WeightedDomain {
    WeightedDomain::sphere(dom.lifted_system().clone())
}

fn sum_sq(v: &[MultiPoly], dim: usize) -> MultiPoly {
    v.iter().fold(MultiPoly::zero(dim), |acc, p| acc + p * p)
}

/// `|grad f|^2`.
pub fn gradient_sq(f: &MultiPoly) -> MultiPoly {
    sum_sq(&f.gradient(), f.dim())
}

/// `|grad_D f|^2 = sum_{i<j} (D_{i,j} f)^2`.
pub fn angular_sq(f: &MultiPoly) -> MultiPoly {
    let d = f.dim();
    let mut out = MultiPoly::zero(d);
    for i in 0..d {
        for j in i + 1..d {
            let t = angular_classical(i, j, f).expect("distinct axes in range");
            out = out + &t * &t;
        }
    }
    out
}

/// Pointwise `(1 - |x|^2)|grad f|^2 + |grad_D f|^2`.
pub fn ball_gradient_density(f: &MultiPoly) -> MultiPoly {
    let d = f.dim();
    let one_minus = MultiPoly::one(d) - MultiPoly::norm_sq(d);
    one_minus * gradient_sq(f) + angular_sq(f)
}

/// Pointwise `sum_i (1 - x_i^2)(d_i f)^2`.
pub fn corollary_gradient_density(f: &MultiPoly) -> MultiPoly {
    let d = f.dim();
    f.gradient()
        .into_iter()
        .enumerate()
        .fold(MultiPoly::zero(d), |acc, (i, g)| acc + (MultiPoly::one(d) - MultiPoly::var(d, i).pow(2)) * &g * &g)
}

/// `|||grad f|||^2`. The `W_{kappa,mu+1}` part is measured with the
/// normalization of `W_{kappa,mu}`, i.e. as `(1 - |x|^2)|grad f|^2` under the
/// normalized `W_{kappa,mu}`; this is the reading under which it equals the
/// spherical gradient norm of the lift.
pub fn ball_triple_norm_sq(dom: &WeightedDomain, f: &MultiPoly) -> Result<Rational> {
    expect_ball(dom)?;
    dom.integrate(&ball_gradient_density(f))
}

/// `||grad_0 F||^2` on the sphere in `d + 1` variables, `F` the lift of `f`.
pub fn lifted_gradient_norm_sq(dom: &WeightedDomain, f: &MultiPoly) -> Result<Rational> {
    expect_ball(dom)?;
    let big_f = lift_to_sphere(f)?;
    let grad = OperatorContext::classical(f.dim() + 1).spherical_gradient(&big_f)?;
    let density = grad.iter().fold(SphereFunction::zero(f.dim() + 1), |acc, g| &acc + &(g * g));
    lifted_sphere(dom).integrate(density.representative())
}

/// `Delta_h f - (x.grad)^2 f + c (x.grad) f`.
pub fn d_kappa_mu_with(ctx: &OperatorContext, f: &MultiPoly, c: &Rational) -> Result<MultiPoly> {
    let e1 = f.euler();
    Ok(ctx.h_laplacian(f)? - e1.euler() + e1.scale(c))
}

/// The ball operator `Delta_h - (x.grad)^2 - 2 lambda_{kappa,mu} (x.grad)`,
/// whose eigenvalue on orthogonal polynomials of degree `n` is
/// `-n(n + 2 lambda_{kappa,mu})`.
pub fn d_kappa_mu(dom: &WeightedDomain, f: &MultiPoly) -> Result<MultiPoly> {
    expect_ball(dom)?;
    let ctx = OperatorContext::new(dom.root_system().clone());
    d_kappa_mu_with(&ctx, f, &(-dom.lambda() * int(2)))
}

fn graded_monomials(dim: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for n in 0..=max_degree {
        let mut level = Vec::new();
        let mut cur = vec![0u32; dim];
        fill(&mut level, &mut cur, 0, n);
        out.extend(level);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

/// Exact orthogonal polynomials on the domain: for every monomial of degree
/// `n <= max_degree`, the monomial minus its projection onto all polynomials
/// of lower degree. Returns `(n, P)` pairs; each `P` spans part of `V_n`.
pub fn orthogonal_polynomials(dom: &WeightedDomain, max_degree: u32) -> Result<Vec<(u32, MultiPoly)>> {
    let d = dom.dim();
    let mut ortho: Vec<(MultiPoly, Rational)> = Vec::new();
    let mut out = Vec::new();
    let mut current_degree = 0;
    let mut pending: Vec<(MultiPoly, Rational)> = Vec::new();
    for e in graded_monomials(d, max_degree) {
        let n: u32 = e.iter().sum();
        if n != current_degree {
            ortho.append(&mut pending);
            current_degree = n;
        }
        let m = MultiPoly::monomial(d, e, Rational::one());
        let mut p = m.clone();
        for (q, qq) in &ortho {
            let c = dom.inner(&m, q)? / qq;
            if !c.is_zero() {
                p = p - q.scale(&c);
            }
        }
        out.push((n, p.clone()));
        // Gram-Schmidt within the degree so the next level sees an
        // orthogonal basis of everything below it.
        let mut r = p;
        for (q, qq) in &pending {
            let c = dom.inner(&r, q)? / qq;
            if !c.is_zero() {
                r = r - q.scale(&c);
            }
        }
        let rr = dom.norm_sq(&r)?;
        if rr.is_zero() {
            return Err(Error::Degenerate("monomials are linearly dependent on the domain".into()));
        }
        pending.push((r, rr));
    }
    Ok(out)
}

/// `f o psi` with `psi(x) = (x_1^2, ..., x_d^2)`.
pub fn pullback_simplex(f: &MultiPoly) -> MultiPoly {
    f.inflate_exponents(2)
}

/// Pointwise `sum_i phi_i^2 (d_i f)^2 + sum_{i<j} phi_{i,j}^2 (d_i f - d_j f)^2`
/// with `phi_i^2 = x_i(1 - |x|_1)` and `phi_{i,j}^2 = x_i x_j`.
pub fn simplex_gradient_density(f: &MultiPoly) -> MultiPoly {
    let d = f.dim();
    let grad = f.gradient();
    let l1 = (0..d).fold(MultiPoly::zero(d), |acc, i| acc + MultiPoly::var(d, i));
    let slack = MultiPoly::one(d) - l1;
    let mut out = MultiPoly::zero(d);
    for i in 0..d {
        out = out + (MultiPoly::var(d, i) * &slack) * &grad[i] * &grad[i];
    }
    for i in 0..d {
        for j in i + 1..d {
            let dij = &grad[i] - &grad[j];
            out = out + (MultiPoly::var(d, i) * MultiPoly::var(d, j)) * &dij * &dij;
        }
    }
    out
}

/// `|||df|||^2` on the simplex.
pub fn simplex_triple_norm_sq(dom: &WeightedDomain, f: &MultiPoly) -> Result<Rational> {
    expect_simplex(dom)?;
    dom.integrate(&simplex_gradient_density(f))
}

/// The ball domain whose weight pulls back to the given simplex weight.
pub fn ball_of_simplex(dom: &WeightedDomain) -> Result<WeightedDomain> {
    expect_simplex(dom)?;
    WeightedDomain::ball(dom.root_system().clone(), dom.mu().expect("simplex has mu").clone())
}

/// `(1/|G|) sum_g f o g`.
pub fn symmetrize(f: &MultiPoly, group: &[Matrix]) -> Result<MultiPoly> {
    if group.is_empty() {
        return Ok(f.clone());
    }
    let mut acc = MultiPoly::zero(f.dim());
    for g in group {
        acc = acc + f.compose_linear(g)?;
    }
    Ok(acc.scale(&Rational::new(1.into(), (group.len() as i64).into())))
}

/// Permutation matrices of `S_d`, used for symmetric functions on the simplex.
pub fn permutation_group(dim: usize) -> Vec<Matrix> {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..dim).collect();
    permute(&mut p, 0, &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let rows = (0..dim).map(|i| (0..dim).map(|j| if p[i] == j { int(1) } else { int(0) }).collect()).collect();
            Matrix::from_rows(rows).expect("square")
        })
        .collect()
}

fn permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

const TOL: f64 = 1e-12;

fn acos_clamped(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// `d_B(x, y) = arccos(<x,y> + sqrt(1-|x|^2) sqrt(1-|y|^2))`.
pub fn distance_ball(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let nx: f64 = x.iter().map(|t| t * t).sum();
    let ny: f64 = y.iter().map(|t| t * t).sum();
    if nx > 1.0 + TOL || ny > 1.0 + TOL {
        return Err(Error::InvalidParameter("point outside the closed unit ball".into()));
    }
    let ip: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(acos_clamped(ip + (1.0 - nx).max(0.0).sqrt() * (1.0 - ny).max(0.0).sqrt()))
}

/// `d_T(x, y) = arccos(sum sqrt(x_i y_i) + sqrt((1-|x|_1)(1-|y|_1)))`.
pub fn distance_simplex(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let inside = |p: &[f64]| p.iter().all(|&t| t >= -TOL) && p.iter().sum::<f64>() <= 1.0 + TOL;
    if !inside(x) || !inside(y) {
        return Err(Error::InvalidParameter("point outside the closed simplex".into()));
    }
    let sx = 1.0 - x.iter().sum::<f64>();
    let sy = 1.0 - y.iter().sum::<f64>();
    let c: f64 = x.iter().zip(y).map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt()).sum::<f64>()
        + (sx.max(0.0) * sy.max(0.0)).sqrt();
    Ok(acos_clamped(c))
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
    fn lift_examples() {
        assert_eq!(lift_to_sphere(&MultiPoly::one(2)).unwrap(), SphereFunction::constant(3, int(1)));
        let f = MultiPoly::one(2) - MultiPoly::norm_sq(2);
        assert_eq!(lift_to_sphere(&f).unwrap(), x(3, 2).pow(2).reduce_mod_sphere().unwrap());
    }

    #[test]
    fn triple_norm_example() {
        let dom = WeightedDomain::ball(RootSystem::trivial(2), frac(1, 2)).unwrap();
        assert!(ball_triple_norm_sq(&dom, &MultiPoly::constant(2, int(3))).unwrap().is_zero());
        // (1 - |x|^2) has mean 1/2 and x2^2 mean 1/4 for the uniform disk.
        assert_eq!(ball_triple_norm_sq(&dom, &x(2, 0)).unwrap(), frac(3, 4));
        assert_eq!(lifted_gradient_norm_sq(&dom, &x(2, 0)).unwrap(), frac(3, 4));
    }

    #[test]
    fn d_kappa_mu_on_degree_one() {
        // d = 1, kappa = 0: D x = -x - 2 lambda x with lambda = mu.
        let mu = frac(3, 2);
        let dom = WeightedDomain::ball(RootSystem::trivial(1), mu.clone()).unwrap();
        let got = d_kappa_mu(&dom, &x(1, 0)).unwrap();
        assert_eq!(got, x(1, 0).scale(&(int(-1) - int(2) * mu)));
        assert!(d_kappa_mu(&dom, &MultiPoly::one(1)).unwrap().is_zero());
    }

    #[test]
    fn orthogonality() {
        let dom = WeightedDomain::ball(RootSystem::z2d(&[frac(1, 2), int(1)]).unwrap(), int(1)).unwrap();
        let polys = orthogonal_polynomials(&dom, 3).unwrap();
        assert_eq!(polys.len(), 10);
        for (n, p) in &polys {
            for (m, q) in &polys {
                if n != m {
                    assert!(dom.inner(p, q).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(pullback_simplex(&x(2, 0)), x(2, 0).pow(2));
        let f = MultiPoly::one(2) - x(2, 0) - x(2, 1);
        assert_eq!(pullback_simplex(&f), MultiPoly::one(2) - MultiPoly::norm_sq(2));
    }

    #[test]
    fn simplex_norm_d1() {
        let dom = WeightedDomain::simplex(RootSystem::z2d(&[frac(1, 2)]).unwrap(), frac(1, 2)).unwrap();
        // Uniform [0,1], f = x: int x(1-x) dx = 1/6.
        assert_eq!(simplex_triple_norm_sq(&dom, &x(1, 0)).unwrap(), frac(1, 6));
        assert!(simplex_triple_norm_sq(&dom, &MultiPoly::one(1)).unwrap().is_zero());
    }

    #[test]
    fn symmetrize_examples() {
        let g = RootSystem::z2d(&[int(0), int(0)]).unwrap();
        assert!(symmetrize(&x(2, 0), g.group()).unwrap().is_zero());
        assert!(symmetrize(&(x(2, 0).pow(2) * x(2, 1)), g.group()).unwrap().is_zero());
        let inv = x(2, 0).pow(2) * x(2, 1).pow(2);
        assert_eq!(symmetrize(&inv, g.group()).unwrap(), inv);
        assert_eq!(permutation_group(3).len(), 6);
    }

    #[test]
    fn distances() {
        assert!(distance_ball(&[0.3, -0.2], &[0.3, -0.2]).unwrap().abs() < 1e-7);
        let pi2 = std::f64::consts::FRAC_PI_2;
        assert!((distance_simplex(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - pi2).abs() < 1e-12);
        let p = [0.2, 0.5];
        let dt = distance_simplex(&p, &[0.0, 1.0]).unwrap();
        assert!((1.0 - p[1].sqrt() - 2.0 * (dt / 2.0).sin().powi(2)).abs() < 1e-12);
        assert!(distance_ball(&[1.0, 1.0], &[0.0, 0.0]).is_err());
        assert!(distance_simplex(&[-0.5, 0.0], &[0.0, 0.0]).is_err());
    }
}
