//! Pointwise operator identities, checked as exact polynomial or
//! sphere-function equalities.

use anyhow::Result;
use dunkl::linalg::Matrix;
use dunkl::operators::{angular_classical, dot_sphere, xi_dot, OperatorContext};
use dunkl::rational::{frac, int};
use dunkl::{MultiPoly, Rational, Root, RootSystem, SphereFunction};
use rand::Rng;

use super::{count, expect, run_trials, Env, Outcome};
use crate::sampling::{rng, Constraints};

fn sph(p: &MultiPoly) -> Result<SphereFunction> {
    Ok(p.reduce_mod_sphere()?)
}

fn ctx(env: &Env) -> OperatorContext {
    OperatorContext::new(env.rs().clone())
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
}

fn needs_sphere(env: &Env) -> Option<Outcome> {
    (env.dim() < 2).then(|| Outcome::skipped("sphere identities need d >= 2"))
}

/// `f` and an independent `g` for one trial.
fn two(env: &Env, seed: u64) -> Result<(MultiPoly, MultiPoly)> {
    let c = Constraints::default();
    Ok((env.poly(seed, &c)?, env.poly(seed.wrapping_add(0x5bd1_e995), &c)?))
}

pub fn eq_2_2(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let d = env.dim();
    let classical = OperatorContext::classical(d);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let lhs = classical.laplace_beltrami(&sph(&f)?)?;
        let mut rhs = MultiPoly::zero(d);
        for (i, j) in pairs(d) {
            rhs = rhs + angular_classical(i, j, &angular_classical(i, j, &f)?)?;
        }
        Ok(expect(lhs == sph(&rhs)?, seed, &[&f], "Delta_0 f != sum D_ij^2 f"))
    })
}

pub fn eq_2_3(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let d = env.dim();
    let classical = OperatorContext::classical(d);
    run_trials(env, env.cfg.trials, |seed, _| {
        let (f, g) = two(env, seed)?;
        let gf = classical.spherical_gradient(&sph(&f)?)?;
        let gg = classical.spherical_gradient(&sph(&g)?)?;
        let mut rhs = MultiPoly::zero(d);
        for (i, j) in pairs(d) {
            rhs = rhs + angular_classical(i, j, &f)? * angular_classical(i, j, &g)?;
        }
        Ok(expect(dot_sphere(&gf, &gg) == sph(&rhs)?, seed, &[&f, &g], "grad_0 f . grad_0 g != sum D_ij f D_ij g"))
    })
}

pub fn eq_2_4(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let d = env.dim();
    let dom = dunkl::quadrature::WeightedDomain::sphere(RootSystem::trivial(d));
    run_trials(env, env.cfg.trials, |seed, _| {
        let (f, g) = two(env, seed)?;
        for (i, j) in pairs(d) {
            let lhs = dom.integrate(&(angular_classical(i, j, &f)? * &g))?;
            let rhs = -dom.integrate(&(&f * &angular_classical(i, j, &g)?))?;
            if lhs != rhs {
                return Ok(expect(false, seed, &[&f, &g], format!("pair ({i},{j})")));
            }
        }
        Ok(None)
    })
}

/// Polar form of `Delta_h` on `|x|^2 P_m`: `|x|^2 Delta_h P_m + 4(m + lambda + 1) P_m`.
pub fn eq_2_5(env: &Env) -> Outcome {
    let c = ctx(env);
    let d = env.dim();
    let r2 = MultiPoly::norm_sq(d);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        for (m, p) in f.homogeneous_decompose() {
            let lhs = c.h_laplacian(&(&r2 * &p))?;
            let k = (int(m as i64) + c.lambda() + int(1)) * int(4);
            let rhs = &r2 * &c.h_laplacian(&p)? + p.scale(&k);
            if lhs != rhs {
                return Ok(expect(false, seed, &[&f], format!("degree {m} part")));
            }
        }
        Ok(None)
    })
}

pub fn delta_h_explicit(env: &Env) -> Outcome {
    let c = ctx(env);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        Ok(expect(c.h_laplacian(&f)? == c.h_laplacian_explicit(&f)?, seed, &[&f], "sum D_i^2 != explicit form"))
    })
}

pub fn commutativity(env: &Env) -> Outcome {
    let c = ctx(env);
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        for (i, j) in pairs(d) {
            if c.dunkl(i, &c.dunkl(j, &f)?)? != c.dunkl(j, &c.dunkl(i, &f)?)? {
                return Ok(expect(false, seed, &[&f], format!("D_{i} D_{j} != D_{j} D_{i}")));
            }
        }
        Ok(None)
    })
}

/// Replacing every root `v` by `2v` changes no operator.
pub fn root_scaling(env: &Env) -> Outcome {
    let rs = env.rs();
    if rs.roots().is_empty() {
        return Outcome::skipped("no roots to rescale");
    }
    let doubled: Result<Vec<Root>> = rs
        .roots()
        .iter()
        .map(|r| Ok(Root::new(r.vector().iter().map(|x| x * int(2)).collect(), r.multiplicity().clone())?))
        .collect();
    let scaled = match doubled.and_then(|roots| Ok(RootSystem::new(rs.dim(), roots)?)) {
        Ok(s) => OperatorContext::new(s),
        Err(e) => return Outcome::skipped(format!("rescaled system rejected: {e}")),
    };
    let c = ctx(env);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let same = c.h_gradient(&f)? == scaled.h_gradient(&f)? && c.h_laplacian(&f)? == scaled.h_laplacian(&f)?;
        Ok(expect(same, seed, &[&f], "operators changed under v -> 2v"))
    })
}

/// `grad_h f (t xi) = xi d/dr f(r xi)|_{r=t} + (1/t) grad_{h,0}[f(t .)](xi)`
/// at a random rational radius `t`.
pub fn eq_3_1(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let mut r = rng(seed ^ 0x3141);
        let t: Rational = frac(r.random_range(1..=6), r.random_range(1..=6));
        let scale = Matrix::from_rows(
            (0..d).map(|i| (0..d).map(|j| if i == j { t.clone() } else { int(0) }).collect()).collect(),
        )?;
        let ft = f.compose_linear(&scale)?;
        let radial = f.euler().compose_linear(&scale)?.scale(&t.recip());
        let sph_grad = c.spherical_gradient(&sph(&ft)?)?;
        for (j, dj) in c.h_gradient(&f)?.into_iter().enumerate() {
            let lhs = sph(&dj.compose_linear(&scale)?)?;
            let rhs = &sph(&radial.mul_var(j))? + &sph_grad[j].scale(&t.recip());
            if lhs != rhs {
                return Ok(expect(false, seed, &[&f], format!("component {j} at r = {t}")));
            }
        }
        Ok(None)
    })
}

/// `grad_{h,0} f = grad_0 f + sum kappa_v E_v f v`.
pub fn eq_3_2(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    let d = env.dim();
    let classical = OperatorContext::classical(d);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = sph(&f)?;
        let lhs = c.spherical_gradient(&s)?;
        let mut rhs: Vec<MultiPoly> =
            classical.spherical_gradient(&s)?.into_iter().map(|g| g.into_representative()).collect();
        for (k, root) in env.rs().roots().iter().enumerate() {
            let e = c.difference_e(k, &f)?.scale(root.multiplicity());
            for (j, vj) in root.vector().iter().enumerate() {
                rhs[j] = &rhs[j] + &e.scale(vj);
            }
        }
        for j in 0..d {
            if lhs[j] != sph(&rhs[j])? {
                return Ok(expect(false, seed, &[&f], format!("component {j}")));
            }
        }
        Ok(None)
    })
}

pub fn eq_3_3(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = sph(&f)?;
        let lhs = xi_dot(&c.spherical_gradient(&s)?);
        Ok(expect(lhs == c.xi_dot_gradient(&s)?, seed, &[&f], "xi . grad_{h,0} f != sum kappa (f - f o sigma)"))
    })
}

/// `Delta_{h,0} = grad_{h,0} . grad_{h,0} - xi . grad_{h,0}` with the dot
/// product read as operator composition.
pub fn eq_3_4(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = sph(&f)?;
        let grad = c.spherical_gradient(&s)?;
        let mut div = SphereFunction::zero(d);
        for (j, gj) in grad.iter().enumerate() {
            div = &div + &c.spherical_gradient(gj)?[j];
        }
        let rhs = &div - &c.xi_dot_gradient(&s)?;
        Ok(expect(c.laplace_beltrami(&s)? == rhs, seed, &[&f], "Delta_{h,0} != grad.grad - xi.grad"))
    })
}

pub fn eq_3_6(env: &Env) -> Outcome {
    let c = ctx(env);
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        for (i, j) in pairs(d) {
            let rhs = angular_classical(i, j, &f)? + c.angular_difference(i, j, &f)?;
            if c.angular_dunkl(i, j, &f)? != rhs {
                return Ok(expect(false, seed, &[&f], format!("pair ({i},{j})")));
            }
        }
        Ok(None)
    })
}

pub fn eq_3_8(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = sph(&f)?;
        let grad = c.spherical_gradient(&s)?;
        let xg = c.xi_dot_gradient(&s)?;
        for (j, gj) in grad.iter().enumerate() {
            let mut rhs = xg.mul_coordinate(j);
            for i in (0..d).filter(|&i| i != j) {
                rhs = &rhs + &sph(&c.angular_dunkl(i, j, &f)?.mul_var(i))?;
            }
            if *gj != rhs {
                return Ok(expect(false, seed, &[&f], format!("component {j}")));
            }
        }
        Ok(None)
    })
}

/// `D_i(x_j f) = x_j D_i f + delta_ij f + 2 sum kappa_v v_i v_j / |v|^2 f o sigma_v`.
pub fn eq_3_9(env: &Env) -> Outcome {
    let c = ctx(env);
    let d = env.dim();
    let roots = env.rs().roots();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let reflected: Vec<MultiPoly> =
            (0..roots.len()).map(|k| c.reflect_poly(k, &f)).collect::<dunkl::Result<_>>()?;
        for i in 0..d {
            let di = c.dunkl(i, &f)?;
            for j in 0..d {
                let lhs = c.dunkl(i, &f.mul_var(j))?;
                let mut rhs = di.mul_var(j);
                if i == j {
                    rhs = rhs + &f;
                }
                for (k, root) in roots.iter().enumerate() {
                    let v = root.vector();
                    let w = root.multiplicity() * int(2) * &v[i] * &v[j] / root.norm_sq();
                    rhs = rhs + reflected[k].scale(&w);
                }
                if lhs != rhs {
                    return Ok(expect(false, seed, &[&f], format!("(i, j) = ({i},{j})")));
                }
            }
        }
        Ok(None)
    })
}

/// Returns whether `grad f . grad g - X_f X_g = sum D_ij f D_ij g` holds, with
/// `X = xi . grad_{h,0}`, and whether the same holds with `+ X_f X_g`. The
/// minus form is what the term-by-term expansion of the right side gives;
/// the two agree when `X` vanishes, e.g. for `kappa = 0`.
fn check_3_11(env: &Env, f: &MultiPoly, g: &MultiPoly) -> Result<(bool, bool)> {
    let c = ctx(env);
    let d = env.dim();
    let (sf, sg) = (sph(f)?, sph(g)?);
    let dot = dot_sphere(&c.spherical_gradient(&sf)?, &c.spherical_gradient(&sg)?);
    let xx = &c.xi_dot_gradient(&sf)? * &c.xi_dot_gradient(&sg)?;
    let mut rhs = MultiPoly::zero(d);
    for (i, j) in pairs(d) {
        rhs = rhs + c.angular_dunkl(i, j, f)? * c.angular_dunkl(i, j, g)?;
    }
    let rhs = sph(&rhs)?;
    Ok((&dot - &xx == rhs, &dot + &xx == rhs))
}

fn run_3_11(env: &Env, same: bool) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    run_trials(env, env.cfg.trials, |seed, details| {
        let f = env.poly(seed, &Constraints::default())?;
        let g = if same { f.clone() } else { env.poly(seed.wrapping_add(0x5bd1_e995), &Constraints::default())? };
        let (minus, plus) = check_3_11(env, &f, &g)?;
        if !plus {
            count(details, "plus_form_failures");
        }
        Ok(expect(minus, seed, &[&f, &g], "grad.grad - X X != sum D_ij f D_ij g"))
    })
}

pub fn eq_3_11(env: &Env) -> Outcome {
    run_3_11(env, false)
}

pub fn eq_3_12(env: &Env) -> Outcome {
    run_3_11(env, true)
}

/// `Delta_{h,0} = sum D_ij^2 - (xi.grad)^2 + 2 lambda xi.grad
///   - 2 sum kappa^2 (I - sigma) + sum kappa^2 (I - sigma)^2`.
pub fn eq_3_13(env: &Env) -> Outcome {
    if let Some(o) = needs_sphere(env) {
        return o;
    }
    let c = ctx(env);
    let d = env.dim();
    let roots = env.rs().roots();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = sph(&f)?;
        let mut rhs = MultiPoly::zero(d);
        for (i, j) in pairs(d) {
            rhs = rhs + c.angular_dunkl(i, j, &c.angular_dunkl(i, j, &f)?)?;
        }
        let mut rhs = sph(&rhs)?;
        let xg = c.xi_dot_gradient(&s)?;
        rhs = &(&rhs - &c.xi_dot_gradient(&xg)?) + &xg.scale(&(c.lambda() * int(2)));
        for (k, root) in roots.iter().enumerate() {
            let k2 = root.multiplicity() * root.multiplicity();
            let once = c.i_minus_sigma(k, &s)?;
            let twice = c.i_minus_sigma(k, &once)?;
            rhs = &(&rhs - &once.scale(&(&k2 * int(2)))) + &twice.scale(&k2);
        }
        Ok(expect(c.laplace_beltrami(&s)? == rhs, seed, &[&f], "Delta_{h,0} differs from the D_ij form"))
    })
}
