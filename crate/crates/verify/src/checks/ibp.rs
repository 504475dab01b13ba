//! Integration by parts on the weighted sphere.

use dunkl::operators::OperatorContext;
use dunkl::quadrature::WeightedDomain;
use dunkl::rational::int;
use dunkl::MultiPoly;

use super::{expect, run_trials, Env, Outcome};
use crate::sampling::Constraints;

fn setup(env: &Env) -> Result<(OperatorContext, WeightedDomain), Outcome> {
    if env.dim() < 2 {
        return Err(Outcome::skipped("sphere identities need d >= 2"));
    }
    let dom = WeightedDomain::sphere(env.rs().clone());
    env.exact(&dom)?;
    Ok((OperatorContext::new(env.rs().clone()), dom))
}

pub fn eq_3_7(env: &Env) -> Outcome {
    let (c, dom) = match setup(env) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let d = env.dim();
    run_trials(env, env.cfg.trials, |seed, _| {
        let cons = Constraints::default();
        let f = env.poly(seed, &cons)?;
        let g = env.poly(seed.wrapping_add(1), &cons)?;
        for i in 0..d {
            for j in i + 1..d {
                let lhs = dom.integrate(&(c.angular_dunkl(i, j, &f)? * &g))?;
                let rhs = -dom.integrate(&(&f * &c.angular_dunkl(i, j, &g)?))?;
                if lhs != rhs {
                    return Ok(expect(false, seed, &[&f, &g], format!("pair ({i},{j})")));
                }
            }
        }
        Ok(None)
    })
}

/// `int (grad_{h,0} f)_j g = -int f [(grad_{h,0} g)_j - (2 lambda + 1) xi_j g]`.
pub fn eq_3_10(env: &Env) -> Outcome {
    let (c, dom) = match setup(env) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let k = c.lambda() * int(2) + int(1);
    run_trials(env, env.cfg.trials, |seed, _| {
        let cons = Constraints::default();
        let f = env.poly(seed, &cons)?;
        let g = env.poly(seed.wrapping_add(1), &cons)?;
        let gf = c.spherical_gradient(&f.reduce_mod_sphere()?)?;
        let gg = c.spherical_gradient(&g.reduce_mod_sphere()?)?;
        for j in 0..env.dim() {
            let lhs = dom.integrate(&(gf[j].representative() * &g))?;
            let inner = gg[j].representative() - &g.mul_var(j).scale(&k);
            let rhs = -dom.integrate(&(&f * &inner))?;
            if lhs != rhs {
                return Ok(expect(false, seed, &[&f, &g], format!("component {j}")));
            }
        }
        Ok(None)
    })
}

const MAX_ELEMENTS: usize = 16;

pub fn group_invariance(env: &Env) -> Outcome {
    let (_, dom) = match setup(env) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let group = env.rs().group();
    run_trials(env, env.cfg.trials, |seed, _| {
        let f: MultiPoly = env.poly(seed, &Constraints::default())?;
        let base = dom.integrate(&f)?;
        for g in group.iter().take(MAX_ELEMENTS) {
            if dom.integrate(&f.compose_linear(g)?)? != base {
                return Ok(expect(false, seed, &[&f], "integral changed under a group element"));
            }
        }
        Ok(None)
    })
}
