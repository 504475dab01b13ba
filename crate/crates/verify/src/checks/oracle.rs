//! Exact integrals against Monte Carlo estimates.
//!
//! `moments-mc` and `half-shift-mc` use the library's sphere-lift estimator.
//! The domain checks sample the ball or simplex directly and weight by the
//! density written out in closed form, so they share no code with the exact
//! route beyond polynomial evaluation.

use anyhow::Result;
use dunkl::quadrature::{mc_integrate, mc_integrate_fn, sphere_monomial_integral, WeightedDomain};
use dunkl::rational::{frac, int, to_f64};
use dunkl::{MultiPoly, Rational, RootSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde_json::json;

use super::{run_trials, witness, Details, Env, Outcome, Status};
use crate::sampling::{random_kappa, rng, sample_polynomial, Constraints};

const SIGMAS: f64 = 4.0;
const BLOCK: usize = 1 << 14;

/// Records one exact-vs-estimate comparison; `false` when outside `SIGMAS`.
const ROUNDING: f64 = 1e-9;

fn compare(details: &mut Details, case: String, exact: f64, mean: f64, stderr: f64) -> bool {
    let diff = (exact - mean).abs();
    // Floating-point floor: a constant integrand has zero sample variance.
    let scale = stderr.max(ROUNDING * (1.0 + exact.abs()));
    let z = diff / scale;
    let entry = json!({ "case": case, "exact": exact, "mean": mean, "stderr": stderr, "z": z });
    details.entry("cases".into()).or_insert_with(|| json!([])).as_array_mut().unwrap().push(entry);
    let worst = details.get("max_z").and_then(|v| v.as_f64()).unwrap_or(0.0);
    details.insert("max_z".into(), json!(worst.max(z)));
    z <= SIGMAS
}

fn show(k: &[Rational]) -> String {
    let parts: Vec<String> = k.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn cases(env: &Env) -> usize {
    env.cfg.oracle_cases
}

pub fn moments_mc(env: &Env) -> Outcome {
    run_trials(env, cases(env), |seed, details| {
        let mut r = rng(seed);
        let d = r.random_range(2..=4usize);
        let kappa = random_kappa(seed ^ 0x6b61, d);
        let alpha: Vec<u32> = (0..d).map(|_| 2 * r.random_range(0..=2u32)).collect();
        let exact = sphere_monomial_integral(&kappa, &alpha)?;
        let dom = WeightedDomain::sphere(RootSystem::z2d(&kappa)?);
        let f = MultiPoly::monomial(d, alpha.clone(), int(1));
        let est = mc_integrate(&dom, &f, env.cfg.mc_samples, seed)?;
        let label = format!("kappa={} alpha={alpha:?}", show(&kappa));
        let ok = compare(details, label.clone(), to_f64(&exact), est.mean, est.stderr);
        Ok((!ok).then(|| witness(seed, &[&f], label)))
    })
}

/// Closed-form values: `x_1^2` on `S^2` is `1/3`, on `S^1` with
/// `kappa = (1, 0)` it is `3/4`; `(x_1 - x_2)^2` on `S^1` with the root
/// `e_1 - e_2` at multiplicity 1 is `3/2`.
pub fn moments_golden(env: &Env) -> Outcome {
    let _ = env;
    let run = || -> Result<Vec<(String, Rational, Rational)>> {
        let x2 = |d| MultiPoly::var(d, 0).pow(2);
        let s2 = WeightedDomain::sphere(RootSystem::trivial(3)).integrate(&x2(3))?;
        let s1 = WeightedDomain::sphere(RootSystem::z2d(&[int(1), int(0)])?).integrate(&x2(2))?;
        let root = dunkl::Root::new(vec![int(1), int(-1)], int(1))?;
        let b = WeightedDomain::sphere(RootSystem::new(2, vec![root])?);
        let diff = MultiPoly::linear_form(&[int(1), int(-1)]).pow(2);
        Ok(vec![
            ("x1^2 on S^2".into(), s2, frac(1, 3)),
            ("x1^2 on S^1, kappa=(1,0)".into(), s1, frac(3, 4)),
            ("(x1-x2)^2 on S^1, root e1-e2".into(), b.integrate(&diff)?, frac(3, 2)),
        ])
    };
    let mut out =
        Outcome { status: Status::Pass, trials: 3, reason: None, counterexample: None, details: Details::new() };
    match run() {
        Ok(rows) => {
            for (name, got, want) in rows {
                out.details.insert(name.clone(), json!(got.to_string()));
                if got != want {
                    out.status = Status::Fail;
                    out.reason = Some(format!("{name}: got {got}, expected {want}"));
                }
            }
        }
        Err(e) => {
            out.status = Status::Fail;
            out.reason = Some(format!("{e:#}"));
        }
    }
    out
}

fn random_mu(r: &mut ChaCha20Rng, choices: &[Rational]) -> Rational {
    choices[r.random_range(0..choices.len())].clone()
}

pub fn half_shift_mc(env: &Env) -> Outcome {
    let mus = env.mus.clone();
    run_trials(env, cases(env), |seed, details| {
        let mut r = rng(seed);
        let d = r.random_range(1..=3usize);
        let kappa = random_kappa(seed ^ 0x6b61, d);
        let mu = random_mu(&mut r, &mus);
        let dom = WeightedDomain::simplex(RootSystem::z2d(&kappa)?, mu.clone())?;
        let f = sample_polynomial(seed ^ 0x706f, d, 3, &Constraints::default())?;
        let i = r.random_range(0..d);
        let exact = dom.integrate_sqrt_coordinate(i, &f)?.to_f64();
        let c = Compiled::new(&f);
        let est = mc_integrate_fn(&dom, |x| x[i].max(0.0).sqrt() * c.eval(x), env.cfg.mc_samples, seed)?;
        let label = format!("kappa={} mu={mu} i={i}", show(&kappa));
        let ok = compare(details, label.clone(), exact, est.mean, est.stderr);
        Ok((!ok).then(|| witness(seed, &[&f], label)))
    })
}

struct Compiled(Vec<(f64, Vec<i32>)>);

impl Compiled {
    fn new(f: &MultiPoly) -> Self {
        Compiled(f.terms().map(|(m, c)| (to_f64(c), m.exponents().iter().map(|&k| k as i32).collect())).collect())
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().map(|(c, e)| e.iter().zip(x).fold(*c, |a, (&k, xi)| a * xi.powi(k))).sum()
    }
}

/// Ratio estimate of `E[f w] / E[w]` under a sampler; the error comes from
/// the delta method.
fn direct_mc<S, W>(dim: usize, sample: S, weight: W, f: &MultiPoly, n: usize, seed: u64) -> (f64, f64)
where
    S: Fn(&mut ChaCha20Rng, &mut [f64]) + Sync,
    W: Fn(&[f64]) -> f64 + Sync,
{
    let c = Compiled::new(f);
    let blocks = n.div_ceil(BLOCK);
    let draw = |b: usize, mut visit: Box<dyn FnMut(f64, f64) + '_>| {
        let mut r = ChaCha20Rng::seed_from_u64(seed);
        r.set_stream(b as u64);
        let mut x = vec![0.0; dim];
        for _ in 0..BLOCK.min(n - b * BLOCK) {
            sample(&mut r, &mut x);
            visit(weight(&x), c.eval(&x));
        }
    };
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = (0.0, 0.0);
            draw(
                b,
                Box::new(|w, fx| {
                    acc.0 += w;
                    acc.1 += w * fx;
                }),
            );
            acc
        })
        .collect();
    let (sw, sfw) = sums.iter().fold((0.0, 0.0), |a, s| (a.0 + s.0, a.1 + s.1));
    let mean = sfw / sw;
    let ss: f64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = 0.0;
            draw(b, Box::new(|w, fx| acc += (w * (fx - mean)).powi(2)));
            acc
        })
        .sum();
    let nf = n as f64;
    (mean, (ss / (nf * (nf - 1.0))).sqrt() / (sw / nf))
}

fn uniform_ball(r: &mut ChaCha20Rng, x: &mut [f64]) {
    let mut norm = 0.0;
    for v in x.iter_mut() {
        *v = StandardNormal.sample(r);
        norm += *v * *v;
    }
    let radius = r.random::<f64>().powf(1.0 / x.len() as f64) / norm.sqrt();
    x.iter_mut().for_each(|v| *v *= radius);
}

/// First `d` coordinates of a uniform point on the `d`-simplex in `R^{d+1}`.
fn uniform_simplex(r: &mut ChaCha20Rng, x: &mut [f64]) {
    let mut total = -(1.0 - r.random::<f64>()).ln();
    for v in x.iter_mut() {
        *v = -(1.0 - r.random::<f64>()).ln();
        total += *v;
    }
    x.iter_mut().for_each(|v| *v /= total);
}

/// `prod_v |<x, v>|^{2 kappa_v}` with roots converted to floats once.
fn h_squared(rs: &RootSystem) -> impl Fn(&[f64]) -> f64 + Sync {
    let roots: Vec<(Vec<f64>, f64)> =
        rs.roots().iter().map(|r| (r.vector().iter().map(to_f64).collect(), 2.0 * to_f64(r.multiplicity()))).collect();
    move |x| roots.iter().map(|(v, e)| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs().powf(*e)).product()
}

fn half_integers(from: i64, to: i64) -> Vec<Rational> {
    (from..=to).map(|k| frac(k, 2)).collect()
}

/// `W(x) = h(x)^2 (1 - |x|^2)^{mu - 1/2}` on the ball, `mu >= 1/2`.
pub fn eq_5_1(env: &Env) -> Outcome {
    run_trials(env, cases(env), |seed, details| {
        let mut r = rng(seed);
        let d = r.random_range(1..=3usize);
        let kappa = random_kappa(seed ^ 0x6b61, d);
        let mu = random_mu(&mut r, &half_integers(1, 4));
        let rs = RootSystem::z2d(&kappa)?;
        let dom = WeightedDomain::ball(rs.clone(), mu.clone())?;
        let f = sample_polynomial(seed ^ 0x706f, d, 4, &Constraints::default())?;
        let exact = to_f64(&dom.integrate(&f)?);
        let h2 = h_squared(&rs);
        let m = to_f64(&mu) - 0.5;
        let weight = move |x: &[f64]| h2(x) * (1.0 - x.iter().map(|v| v * v).sum::<f64>()).max(0.0).powf(m);
        let (mean, se) = direct_mc(d, uniform_ball, weight, &f, env.cfg.mc_samples, seed);
        let label = format!("ball d={d} kappa={} mu={mu}", show(&kappa));
        let ok = compare(details, label.clone(), exact, mean, se);
        Ok((!ok).then(|| witness(seed, &[&f], label)))
    })
}

/// `U(x) = prod x_i^{kappa_i - 1/2} (1 - |x|)^{mu - 1/2}`, `kappa_i, mu >= 1/2`.
pub fn eq_6_1(env: &Env) -> Outcome {
    run_trials(env, cases(env), |seed, details| {
        let mut r = rng(seed);
        let d = r.random_range(1..=3usize);
        let choices = half_integers(1, 4);
        let kappa: Vec<Rational> = (0..d).map(|_| random_mu(&mut r, &choices)).collect();
        let mu = random_mu(&mut r, &choices);
        let dom = WeightedDomain::simplex(RootSystem::z2d(&kappa)?, mu.clone())?;
        let f = sample_polynomial(seed ^ 0x706f, d, 4, &Constraints::default())?;
        let exact = to_f64(&dom.integrate(&f)?);
        let ke: Vec<f64> = kappa.iter().map(|k| to_f64(k) - 0.5).collect();
        let m = to_f64(&mu) - 0.5;
        let weight = move |x: &[f64]| {
            let s: f64 = x.iter().sum();
            x.iter().zip(&ke).map(|(v, e)| v.powf(*e)).product::<f64>() * (1.0 - s).max(0.0).powf(m)
        };
        let (mean, se) = direct_mc(d, uniform_simplex, weight, &f, env.cfg.mc_samples, seed);
        let label = format!("simplex d={d} kappa={} mu={mu}", show(&kappa));
        let ok = compare(details, label.clone(), exact, mean, se);
        Ok((!ok).then(|| witness(seed, &[&f], label)))
    })
}

/// Hyperoctahedral simplex weight in `d = 2`:
/// `prod x_i^{k0 - 1/2} |x_1 - x_2|^{2 k1} (1 - x_1 - x_2)^{mu - 1/2}`,
/// with integer `k1` so the exact side is available.
pub fn eq_6_2(env: &Env) -> Outcome {
    run_trials(env, cases(env), |seed, details| {
        let mut r = rng(seed);
        let k0 = random_mu(&mut r, &half_integers(1, 3));
        let k1 = int(r.random_range(1..=2));
        let mu = random_mu(&mut r, &half_integers(1, 3));
        let rs = RootSystem::hyperoctahedral(2, k0.clone(), k1.clone())?;
        let dom = WeightedDomain::simplex(rs, mu.clone())?;
        let f = sample_polynomial(seed ^ 0x706f, 2, 4, &Constraints { symmetric: true, ..Default::default() })?;
        let exact = to_f64(&dom.integrate(&f)?);
        let (e0, e1, m) = (to_f64(&k0) - 0.5, 2.0 * to_f64(&k1), to_f64(&mu) - 0.5);
        let weight = move |x: &[f64]| {
            (x[0] * x[1]).powf(e0) * (x[0] - x[1]).abs().powf(e1) * (1.0 - x[0] - x[1]).max(0.0).powf(m)
        };
        let (mean, se) = direct_mc(2, uniform_simplex, weight, &f, env.cfg.mc_samples, seed);
        let label = format!("b2 simplex kappa=({k0},{k1}) mu={mu}");
        let ok = compare(details, label.clone(), exact, mean, se);
        Ok((!ok).then(|| witness(seed, &[&f], label)))
    })
}
