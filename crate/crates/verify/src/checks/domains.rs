//! Ball and simplex correspondences, gradient norms and distances.

use anyhow::Result;
use dunkl::domains::{
    angular_sq, ball_gradient_density, ball_of_simplex, ball_triple_norm_sq, corollary_gradient_density,
    distance_ball as d_ball, distance_simplex as d_simplex, gradient_sq, lift_to_sphere, lifted_gradient_norm_sq,
    lifted_sphere, permutation_group, pullback_simplex, simplex_triple_norm_sq, symmetrize,
};
use dunkl::linalg::Matrix;
use dunkl::quadrature::WeightedDomain;
use dunkl::rational::int;
use dunkl::{MultiPoly, Rational, RootSystem};
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use super::{count, expect, record_min, run_trials, Env, Outcome};
use crate::sampling::{rng, Constraints};

type Make = fn(RootSystem, Rational) -> dunkl::Result<WeightedDomain>;

/// One domain per configured `mu`, or the skip outcome.
fn per_mu(env: &Env, make: Make) -> Result<Vec<WeightedDomain>, Outcome> {
    let mut out = Vec::new();
    for mu in &env.mus {
        let dom = make(env.rs().clone(), mu.clone()).map_err(|e| Outcome::skipped(format!("mu = {mu}: {e}")))?;
        env.exact(&dom)?;
        env.exact(&lifted_sphere(&dom))?;
        out.push(dom);
    }
    Ok(out)
}

macro_rules! or_return {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

fn plain(env: &Env, seed: u64) -> Result<MultiPoly> {
    env.poly(seed, &Constraints::default())
}

pub fn eq_5_2(env: &Env) -> Outcome {
    let doms = or_return!(per_mu(env, WeightedDomain::ball));
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let big_f = lift_to_sphere(&f)?;
        for dom in &doms {
            let sphere = lifted_sphere(dom);
            if dom.norm_sq(&f)? != sphere.norm_sq(big_f.representative())? {
                return Ok(expect(false, seed, &[&f], format!("mu = {}", dom.mu().unwrap())));
            }
        }
        Ok(None)
    })
}

pub fn eq_6_4(env: &Env) -> Outcome {
    let doms = or_return!(per_mu(env, WeightedDomain::simplex));
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let g = pullback_simplex(&f);
        for dom in &doms {
            if dom.norm_sq(&f)? != ball_of_simplex(dom)?.norm_sq(&g)? {
                return Ok(expect(false, seed, &[&f], format!("mu = {}", dom.mu().unwrap())));
            }
        }
        Ok(None)
    })
}

/// `||grad_0 F||^2 = |||grad f|||^2` for the lift `F`.
pub fn triple_norm_lift(env: &Env) -> Outcome {
    let doms = or_return!(per_mu(env, WeightedDomain::ball));
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        for dom in &doms {
            if lifted_gradient_norm_sq(dom, &f)? != ball_triple_norm_sq(dom, &f)? {
                return Ok(expect(false, seed, &[&f], format!("mu = {}", dom.mu().unwrap())));
            }
        }
        Ok(None)
    })
}

/// `sum_{i<j} (D_{i,j} f)^2 = |x|^2 |grad f|^2 - (x.grad f)^2`.
pub fn angular_gradient(env: &Env) -> Outcome {
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let e = f.euler();
        let rhs = MultiPoly::norm_sq(d) * gradient_sq(&f) - &e * &e;
        Ok(expect(angular_sq(&f) == rhs, seed, &[&f], "Lagrange identity fails"))
    })
}

/// `4 |||df|||^2 = |||grad (f o psi)|||^2`.
pub fn eq_6_3(env: &Env) -> Outcome {
    let doms = or_return!(per_mu(env, WeightedDomain::simplex));
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let g = pullback_simplex(&f);
        for dom in &doms {
            let lhs = simplex_triple_norm_sq(dom, &f)? * int(4);
            if lhs != ball_triple_norm_sq(&ball_of_simplex(dom)?, &g)? {
                return Ok(expect(false, seed, &[&f], format!("mu = {}", dom.mu().unwrap())));
            }
        }
        Ok(None)
    })
}

fn signed_permutation(r: &mut ChaCha20Rng, perms: &[Matrix]) -> Result<Matrix> {
    let p = &perms[r.random_range(0..perms.len())];
    let d = p.size();
    let rows = (0..d)
        .map(|i| {
            let s = if r.random::<bool>() { int(-1) } else { int(1) };
            p.row(i).iter().map(|c| c * &s).collect()
        })
        .collect();
    Ok(Matrix::from_rows(rows)?)
}

const ROTATIONS_PER_TRIAL: usize = 4;

pub fn rotation_invariance(env: &Env) -> Outcome {
    if !env.rs().is_trivial_weight() {
        return Outcome::skipped("rotation invariance is stated for kappa = 0");
    }
    let doms = or_return!(per_mu(env, WeightedDomain::ball));
    let perms = permutation_group(env.dim());
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let mut r = rng(seed ^ 0x726f);
        for _ in 0..ROTATIONS_PER_TRIAL {
            let tau = signed_permutation(&mut r, &perms)?;
            let g = f.compose_linear(&tau)?;
            for dom in &doms {
                if ball_triple_norm_sq(dom, &f)? != ball_triple_norm_sq(dom, &g)? {
                    return Ok(expect(false, seed, &[&f, &g], format!("tau = {tau:?}")));
                }
            }
        }
        Ok(None)
    })
}

pub fn symmetrize_idempotent(env: &Env) -> Outcome {
    let perms = permutation_group(env.dim());
    let rs = env.rs();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = plain(env, seed)?;
        let g = symmetrize(&f, rs.group())?;
        if symmetrize(&g, rs.group())? != g || !rs.is_invariant(&g)? {
            return Ok(expect(false, seed, &[&f, &g], "group average not idempotent"));
        }
        let s = symmetrize(&f, &perms)?;
        let swapped_ok = perms.iter().all(|p| s.compose_linear(p).map(|t| t == s).unwrap_or(false));
        Ok(expect(swapped_ok && symmetrize(&s, &perms)? == s, seed, &[&f, &s], "permutation average"))
    })
}

fn random_ball_point(r: &mut ChaCha20Rng, d: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
        if x.iter().map(|t| t * t).sum::<f64>() < 1.0 {
            return x;
        }
    }
}

fn random_simplex_point(r: &mut ChaCha20Rng, d: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
        if x.iter().sum::<f64>() < 1.0 {
            return x;
        }
    }
}

/// `acos` loses half the digits near 1, so coincident points are only
/// resolved to about `1e-8`.
const ZERO_TOL: f64 = 1e-7;
const TOL: f64 = 1e-10;

pub fn distance_ball(env: &Env) -> Outcome {
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, details| {
        let mut r = rng(seed);
        let (x, y, z) = (random_ball_point(&mut r, d), random_ball_point(&mut r, d), random_ball_point(&mut r, d));
        let (xy, yx, xz, yz) = (d_ball(&x, &y)?, d_ball(&y, &x)?, d_ball(&x, &z)?, d_ball(&y, &z)?);
        let lift = |p: &[f64]| {
            let mut v = p.to_vec();
            v.push((1.0 - p.iter().map(|t| t * t).sum::<f64>()).sqrt());
            v
        };
        let angle = lift(&x).iter().zip(lift(&y)).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0).acos();
        record_min(details, "triangle_slack", xy + yz - xz);
        let ok = d_ball(&x, &x)? < ZERO_TOL
            && (xy - yx).abs() < TOL
            && (xy - angle).abs() < TOL
            && xz <= xy + yz + TOL
            && d_ball(&[2.0; 1].repeat(d), &x).is_err();
        Ok((!ok).then(|| super::witness(seed, &[], format!("x = {x:?}, y = {y:?}, z = {z:?}"))))
    })
}

pub fn distance_simplex(env: &Env) -> Outcome {
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, details| {
        let mut r = rng(seed);
        let (x, y) = (random_simplex_point(&mut r, d), random_simplex_point(&mut r, d));
        let e = |j: usize| (0..d).map(|i| if i == j { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        let mut ok = d_simplex(&x, &x)? < ZERO_TOL;
        let sq = |p: &[f64]| p.iter().map(|t| t.sqrt()).collect::<Vec<f64>>();
        ok &= (d_simplex(&x, &y)? - d_ball(&sq(&x), &sq(&y))?).abs() < TOL;
        for j in 0..d {
            let dt = d_simplex(&x, &e(j))?;
            let gap = (1.0 - x[j].sqrt() - 2.0 * (dt / 2.0).sin().powi(2)).abs();
            record_min(details, "neg_vertex_gap", -gap);
            ok &= gap < TOL;
        }
        if d >= 2 {
            ok &= (d_simplex(&e(0), &e(1))? - std::f64::consts::FRAC_PI_2).abs() < TOL;
        }
        ok &= d_simplex(&[-0.5; 1].repeat(d), &x).is_err();
        Ok((!ok).then(|| super::witness(seed, &[], format!("x = {x:?}, y = {y:?}"))))
    })
}

const POINTS: usize = 100;

/// `(1 - |x|^2)|grad f|^2 + |grad_D f|^2 <= sum_i (1 - x_i^2)(d_i f)^2` at
/// random points, and the integrated difference under each ball weight.
/// The pointwise form fails for `d >= 2` (e.g. `f = x_1 + x_2` at
/// `(1/2, -1/2)`); the check reports it.
pub fn cor_5_4_pointwise(env: &Env) -> Outcome {
    let doms = or_return!(per_mu(env, WeightedDomain::ball));
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, details| {
        let f = plain(env, seed)?;
        let lhs = ball_gradient_density(&f);
        let rhs = corollary_gradient_density(&f);
        let diff = &rhs - &lhs;
        let mut r = rng(seed ^ 0x7074);
        for _ in 0..POINTS {
            let x = random_ball_point(&mut r, d);
            let (a, b) = (lhs.evaluate_f64(&x)?, rhs.evaluate_f64(&x)?);
            record_min(details, "min_pointwise_slack", b - a);
            if a > b * (1.0 + 1e-12) + 1e-12 {
                count(details, "pointwise_violations");
                details.insert("example_point".into(), json!(x));
                return Ok(expect(false, seed, &[&f], format!("pointwise bound fails at {x:?}: {a} > {b}")));
            }
        }
        for dom in &doms {
            let v = dom.integrate(&diff)?;
            if v.is_negative() {
                return Ok(expect(
                    false,
                    seed,
                    &[&f],
                    format!("integrated difference {v} < 0, mu = {}", dom.mu().unwrap()),
                ));
            }
        }
        Ok(None)
    })
}
