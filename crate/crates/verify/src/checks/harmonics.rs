//! h-harmonic expansions on the weighted sphere.

use dunkl::harmonics::Harmonics;
use dunkl::operators::OperatorContext;
use dunkl::rational::int;
use dunkl::MultiPoly;
use num_traits::Zero;

use super::{expect, run_trials, Env, Outcome};
use crate::sampling::Constraints;

fn setup(env: &Env) -> Result<Harmonics, Outcome> {
    if env.dim() < 2 {
        return Err(Outcome::skipped("sphere checks need d >= 2"));
    }
    let h = Harmonics::new(OperatorContext::new(env.rs().clone()));
    env.exact(h.sphere())?;
    Ok(h.with_degree_cap(env.cfg.degree_cap.max(2)))
}

macro_rules! harmonics_or_skip {
    ($env:expr) => {
        match setup($env) {
            Ok(h) => h,
            Err(o) => return o,
        }
    };
}

pub fn eq_2_8(env: &Env) -> Outcome {
    let h = harmonics_or_skip!(env);
    let c = h.context();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = f.reduce_mod_sphere()?;
        let exp = h.expand(&s)?;
        if exp.sum(env.dim()).reduce_mod_sphere()? != s {
            return Ok(expect(false, seed, &[&f], "components do not sum to f"));
        }
        for (n, y) in &exp.components {
            if !c.h_laplacian(y)?.is_zero() {
                return Ok(expect(false, seed, &[&f, y], format!("degree {n} component is not h-harmonic")));
            }
            let ys = y.reduce_mod_sphere()?;
            if c.laplace_beltrami(&ys)? != ys.scale(&-h.eigenvalue(*n)) {
                return Ok(expect(false, seed, &[&f, y], format!("eigenvalue fails at degree {n}")));
            }
        }
        Ok(None)
    })
}

pub fn eq_2_9(env: &Env) -> Outcome {
    let h = harmonics_or_skip!(env);
    let c = h.context();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let s = f.reduce_mod_sphere()?;
        let p1 = h.neg_laplacian_power(&s, &int(1))?;
        if p1 != c.laplace_beltrami(&s)?.scale(&int(-1)) {
            return Ok(expect(false, seed, &[&f], "r = 1 differs from -Delta_{h,0}"));
        }
        if h.neg_laplacian_power(&s, &int(2))? != h.neg_laplacian_power(&p1, &int(1))? {
            return Ok(expect(false, seed, &[&f], "r = 2 is not r = 1 applied twice"));
        }
        let p0 = &s - &h.proj(&s, 0)?.reduce_mod_sphere()?;
        Ok(expect(h.neg_laplacian_power(&s, &int(0))? == p0, seed, &[&f], "r = 0 is not f - proj_0 f"))
    })
}

pub fn parseval(env: &Env) -> Outcome {
    let h = harmonics_or_skip!(env);
    let dom = h.sphere();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        let comps: Vec<(u32, MultiPoly)> = h.expand(&f.reduce_mod_sphere()?)?.components.into_iter().collect();
        let mut total = dunkl::Rational::zero();
        for (a, (_, ya)) in comps.iter().enumerate() {
            total += dom.norm_sq(ya)?;
            for (_, yb) in &comps[a + 1..] {
                if !dom.inner(ya, yb)?.is_zero() {
                    return Ok(expect(false, seed, &[&f, ya, yb], "components not orthogonal"));
                }
            }
        }
        Ok(expect(total == dom.norm_sq(&f)?, seed, &[&f], "norms do not add up"))
    })
}

pub fn self_adjoint(env: &Env) -> Outcome {
    let h = harmonics_or_skip!(env);
    let dom = h.sphere();
    run_trials(env, env.cfg.trials, |seed, _| {
        let c = Constraints::default();
        let f = env.poly(seed, &c)?;
        let g = env.poly(seed.wrapping_add(1), &c)?;
        let (sf, sg) = (f.reduce_mod_sphere()?, g.reduce_mod_sphere()?);
        for n in 0..=env.cfg.degree_cap {
            if dom.inner(&h.proj(&sf, n)?, &g)? != dom.inner(&f, &h.proj(&sg, n)?)? {
                return Ok(expect(false, seed, &[&f, &g], format!("proj_{n} not self-adjoint")));
            }
        }
        Ok(None)
    })
}

pub fn cor_2_11(env: &Env) -> Outcome {
    let h = harmonics_or_skip!(env);
    let c = h.context();
    let dom = h.sphere();
    let cons = Constraints { invariant: Some(env.rs()), ..Default::default() };
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &cons)?;
        let s = f.reduce_mod_sphere()?;
        let sobolev = h.sobolev_half_norm_sq(&s)?;
        let mut grad = dunkl::Rational::zero();
        for g in c.spherical_gradient(&s)? {
            grad += dom.norm_sq(g.representative())?;
        }
        Ok(expect(sobolev == grad, seed, &[&f], format!("Sobolev norm {sobolev} != gradient norm {grad}")))
    })
}
