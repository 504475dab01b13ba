//! Uncertainty inequalities, the exact steps of the sphere proof, and the
//! ball eigen-operator.

use anyhow::Result;
use dunkl::domains::{d_kappa_mu, d_kappa_mu_with, orthogonal_polynomials};
use dunkl::harmonics::Harmonics;
use dunkl::operators::OperatorContext;
use dunkl::quadrature::WeightedDomain;
use dunkl::rational::{format_rational, frac, int, to_f64};
use dunkl::uncertainty::{
    adjoint_moment_identity, ball_uncertainty, constant_c, make_admissible, sample_directions, simplex_constant,
    simplex_uncertainty, sphere_proof_chain, sphere_uncertainty, BallMode, SimplexMode, UncertaintyResult,
};
use dunkl::{MultiPoly, Rational, RootSystem};
use serde_json::json;

use super::{count, expect, record_min, run_trials, Details, Env, Outcome, Status};
use crate::sampling::{derive_seed, Constraints};

/// `C(1) / 4`, from `C(1) = 2 (1 - sqrt(2) / sqrt(17/4))`.
const SIMPLEX_GOLDEN: f64 = 0.157_002_829_714_982_33;

pub fn constants(env: &Env) -> Outcome {
    let _ = env;
    let mut details = Details::new();
    let mut failures = Vec::new();
    let mut check = |name: &str, got: f64, want: f64, tol: f64| {
        details.insert(name.into(), json!({ "value": got, "expected": want }));
        if (got - want).abs() > tol {
            failures.push(format!("{name}: {got} vs {want}"));
        }
    };
    match (constant_c(&frac(1, 2)), constant_c(&int(0)), simplex_constant(&int(1))) {
        (Ok(half), Ok(zero), Ok(simplex)) => {
            check("C(1/2)", half, 1.0 - std::f64::consts::FRAC_1_SQRT_2, 1e-12);
            check("C(0)", zero, 0.0, 0.0);
            check("C(1)/4", simplex, SIMPLEX_GOLDEN, 1e-14);
        }
        _ => failures.push("constant evaluation failed".into()),
    }
    if constant_c(&frac(-1, 2)).is_ok() {
        failures.push("negative lambda accepted".into());
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    let reason = (!failures.is_empty()).then(|| failures.join("; "));
    Outcome { status, trials: 4, reason, counterexample: None, details }
}

fn sphere_setup(env: &Env) -> Result<(OperatorContext, WeightedDomain), Outcome> {
    if env.dim() < 2 {
        return Err(Outcome::skipped("sphere checks need d >= 2"));
    }
    let dom = WeightedDomain::sphere(env.rs().clone());
    env.exact(&dom)?;
    Ok((OperatorContext::new(env.rs().clone()), dom))
}

macro_rules! or_return {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

fn invariant_mean_zero<'a>(env: &'a Env, dom: &'a WeightedDomain) -> Constraints<'a> {
    Constraints { invariant: Some(env.rs()), mean_zero: Some(dom), ..Default::default() }
}

/// Records the margin, flags a negative one.
fn judge(details: &mut Details, r: &UncertaintyResult, key: &str) -> bool {
    record_min(details, &format!("min_{key}_margin"), r.margin);
    record_min(details, &format!("min_{key}_localization"), r.localization.to_f64());
    if r.trivially_true {
        count(details, "trivially_true");
    }
    if let Some(m) = r.infimum_margin {
        record_min(details, &format!("min_{key}_infimum_margin"), m);
        if m < 0.0 {
            return false;
        }
    }
    r.margin >= 0.0
}

fn note(r: &UncertaintyResult) -> String {
    format!(
        "localization {}, gradient {}, product {}, constant {}, margin {}",
        r.localization,
        format_rational(&r.gradient_sq),
        r.product,
        r.constant,
        r.margin
    )
}

pub fn thm_4_1(env: &Env) -> Outcome {
    let (ctx, dom) = or_return!(sphere_setup(env));
    let cons = invariant_mean_zero(env, &dom);
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        let f = env.poly(seed, &cons)?;
        let g = make_admissible(&dom, &f)?;
        let r = sphere_uncertainty(&ctx, &g)?;
        let loc = r.localization.to_f64();
        let ok = judge(details, &r, "sphere") && loc > 0.0 && loc < 2.0 && r.product.to_f64() >= 0.0;
        Ok(expect(ok && r.flags.invariant, seed, &[&f], note(&r)))
    })
}

fn chain_setup(env: &Env) -> Result<(Harmonics, WeightedDomain), Outcome> {
    let (ctx, dom) = sphere_setup(env)?;
    Ok((Harmonics::new(ctx).with_degree_cap(env.cfg.degree_cap.max(2)), dom))
}

/// `||(-Delta_{h,0})^{1/2} f||^2 >= 2 lambda`, `||grad_0 f||^2 >= 2 lambda`, and
/// for invariant `f` the Sobolev norm equals both gradient norms.
pub fn spectral_chain(env: &Env) -> Outcome {
    let (h, dom) = or_return!(chain_setup(env));
    let cons = invariant_mean_zero(env, &dom);
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        let f = env.poly(seed, &cons)?;
        let c = sphere_proof_chain(&h, &make_admissible(&dom, &f)?)?;
        record_min(details, "min_gap_slack", to_f64(&(&c.gradient_sq - &c.two_lambda)));
        let msg = format!(
            "sobolev {}, gradient {}, h-gradient {}, 2 lambda {}",
            c.sobolev, c.gradient_sq, c.h_gradient_sq, c.two_lambda
        );
        Ok(expect(c.spectral_gap_holds() && c.gradient_identity_holds(), seed, &[&f], msg))
    })
}

/// `(2 lambda + 1) int x_j f^2 = 2 int f (grad_{h,0} f)_j`.
pub fn eq_4_2(env: &Env) -> Outcome {
    let (ctx, _) = or_return!(sphere_setup(env));
    run_trials(env, env.cfg.trials, |seed, _| {
        let f = env.poly(seed, &Constraints::default())?;
        for (j, (lhs, rhs)) in adjoint_moment_identity(&ctx, &f)?.into_iter().enumerate() {
            if lhs != rhs {
                return Ok(expect(false, seed, &[&f], format!("component {j}: {lhs} != {rhs}")));
            }
        }
        Ok(None)
    })
}

/// `r ||grad_0 f||^2 >= (lambda + 1/2)^2 (1 - r)^2 / (2 - r)` per axis.
pub fn eq_4_3(env: &Env) -> Outcome {
    let (h, dom) = or_return!(chain_setup(env));
    let cons = invariant_mean_zero(env, &dom);
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        let f = env.poly(seed, &cons)?;
        let c = sphere_proof_chain(&h, &make_admissible(&dom, &f)?)?;
        for (i, (l, r)) in c.product_bounds.iter().enumerate() {
            record_min(details, "min_slack", to_f64(&(l - r)));
            if l < r {
                return Ok(expect(false, seed, &[&f], format!("axis {i}: {l} < {r}")));
            }
        }
        Ok(None)
    })
}

/// `int (1 - x_i^2) f^2 <= (2 - r) r` per axis.
pub fn eq_4_4(env: &Env) -> Outcome {
    let (h, dom) = or_return!(chain_setup(env));
    let cons = invariant_mean_zero(env, &dom);
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        let f = env.poly(seed, &cons)?;
        let c = sphere_proof_chain(&h, &make_admissible(&dom, &f)?)?;
        for (i, (l, r)) in c.localization_bounds.iter().enumerate() {
            record_min(details, "min_slack", to_f64(&(r - l)));
            if l > r {
                return Ok(expect(false, seed, &[&f], format!("axis {i}: {l} > {r}")));
            }
        }
        Ok(None)
    })
}

fn domains(
    env: &Env,
    make: fn(RootSystem, Rational) -> dunkl::Result<WeightedDomain>,
) -> Result<Vec<WeightedDomain>, Outcome> {
    let mut out = Vec::new();
    for mu in &env.mus {
        let dom = make(env.rs().clone(), mu.clone()).map_err(|e| Outcome::skipped(format!("mu = {mu}: {e}")))?;
        env.exact(&dom)?;
        out.push(dom);
    }
    Ok(out)
}

fn mu_key(dom: &WeightedDomain) -> String {
    format!("mu={}", format_rational(dom.mu().expect("ball or simplex")))
}

pub fn thm_5_1(env: &Env) -> Outcome {
    let doms = or_return!(domains(env, WeightedDomain::ball));
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        for dom in &doms {
            let f = env.poly(seed, &invariant_mean_zero(env, dom))?;
            let r = ball_uncertainty(dom, &make_admissible(dom, &f)?, BallMode::InvariantAxes, &[])?;
            if !judge(details, &r, &mu_key(dom)) {
                return Ok(expect(false, seed, &[&f], format!("{}: {}", mu_key(dom), note(&r))));
            }
        }
        Ok(None)
    })
}

fn directions_check(env: &Env, mode: BallMode) -> Outcome {
    if !env.rs().is_trivial_weight() {
        return Outcome::skipped("the direction form is stated for kappa = 0");
    }
    let doms = or_return!(domains(env, WeightedDomain::ball));
    let dirs =
        sample_directions(env.dim(), env.cfg.direction_samples, derive_seed(env.cfg.seed, &[env.id, "directions"]));
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        for dom in &doms {
            let cons = Constraints { mean_zero: Some(dom), ..Default::default() };
            let f = env.poly(seed, &cons)?;
            let r = ball_uncertainty(dom, &make_admissible(dom, &f)?, mode, &dirs)?;
            if !judge(details, &r, &mu_key(dom)) {
                let inf = r.infimum_margin.unwrap_or(f64::NAN);
                return Ok(expect(false, seed, &[&f], format!("{}: {}, infimum margin {inf}", mu_key(dom), note(&r))));
            }
        }
        Ok(None)
    })
}

pub fn thm_5_2(env: &Env) -> Outcome {
    directions_check(env, BallMode::ClassicalDirections)
}

pub fn cor_5_4(env: &Env) -> Outcome {
    directions_check(env, BallMode::Corollary)
}

fn simplex_check(env: &Env, mode: SimplexMode, symmetric: bool) -> Outcome {
    let doms = or_return!(domains(env, WeightedDomain::simplex));
    let degree = (env.cfg.degree_cap / 2).max(2);
    run_trials(env, env.cfg.uncertainty_trials, |seed, details| {
        for dom in &doms {
            let cons = Constraints { symmetric, mean_zero: Some(dom), ..Default::default() };
            let f = env.poly_deg(seed, degree, &cons)?;
            let r = simplex_uncertainty(dom, &make_admissible(dom, &f)?, mode)?;
            if !judge(details, &r, &mu_key(dom)) {
                return Ok(expect(false, seed, &[&f], format!("{}: {}", mu_key(dom), note(&r))));
            }
        }
        Ok(None)
    })
}

pub fn thm_6_1(env: &Env) -> Outcome {
    if env.rs().roots().iter().any(|r| r.axis().is_none()) {
        return Outcome::skipped("Jacobi weight needs coordinate roots only");
    }
    simplex_check(env, SimplexMode::Jacobi, false)
}

pub fn thm_6_2(env: &Env) -> Outcome {
    if env.rs().roots().iter().all(|r| r.axis().is_some()) {
        return Outcome::skipped("no difference factors; covered by thm-6.1");
    }
    simplex_check(env, SimplexMode::HyperoctahedralSymmetric, true)
}

const EIGEN_MAX_DIM: usize = 2;
const EIGEN_MAX_DEGREE: u32 = 4;

/// `c` with `q = c p`, if any.
fn ratio(p: &MultiPoly, q: &MultiPoly) -> Option<Rational> {
    let (m, lead) = p.terms().next_back()?;
    let c = q.coefficient(m.exponents()) / lead;
    (p.scale(&c) == *q).then_some(c)
}

/// Orthogonal polynomials of degree `n` on the ball satisfy
/// `D_{kappa,mu} P = -n(n + 2 lambda_{kappa,mu}) P`. The fitted constant and
/// whether the `+2 lambda` variant also has them as eigenfunctions are
/// recorded.
pub fn eq_5_5(env: &Env) -> Outcome {
    if env.dim() > EIGEN_MAX_DIM {
        return Outcome::skipped(format!("eigen check limited to d <= {EIGEN_MAX_DIM}"));
    }
    let doms = or_return!(domains(env, WeightedDomain::ball));
    let ctx = OperatorContext::new(env.rs().clone());
    let mut details = Details::new();
    let mut trials = 0;
    for dom in &doms {
        let key = mu_key(dom);
        let lambda_km = dom.lambda();
        let run = || -> Result<(bool, Option<Rational>, bool)> {
            let mut fitted: Option<Rational> = None;
            let mut all_ok = true;
            let mut printed_ok = true;
            let plus = &lambda_km * int(2);
            for (n, p) in orthogonal_polynomials(dom, EIGEN_MAX_DEGREE)? {
                let q = d_kappa_mu(dom, &p)?;
                let want = -int(n as i64) * (int(n as i64) + &lambda_km * int(2));
                if q != p.scale(&want) {
                    all_ok = false;
                }
                if n > 0 {
                    match ratio(&p, &q) {
                        Some(c) => {
                            let nn = int(n as i64);
                            let l = (-c / &nn - nn) / int(2);
                            if fitted.as_ref().is_some_and(|f| *f != l) {
                                all_ok = false;
                            }
                            fitted = Some(l);
                        }
                        None => all_ok = false,
                    }
                }
                let printed = d_kappa_mu_with(&ctx, &p, &plus)?;
                printed_ok &= ratio(&p, &printed).is_some() || printed.is_zero() && p.is_zero();
            }
            Ok((all_ok, fitted, printed_ok))
        };
        trials += 1;
        match run() {
            Ok((ok, fitted, printed_ok)) => {
                details.insert(
                    key.clone(),
                    json!({
                        "fitted_lambda": fitted.as_ref().map(format_rational),
                        "lambda_kappa": format_rational(ctx.lambda()),
                        "lambda_kappa_mu": format_rational(&lambda_km),
                        "printed_sign_eigen": printed_ok,
                    }),
                );
                if !ok {
                    return Outcome {
                        status: Status::Fail,
                        trials,
                        reason: Some(format!("{key}: not eigenfunctions with -n(n + 2 lambda_kappa_mu)")),
                        counterexample: None,
                        details,
                    };
                }
            }
            Err(e) if matches!(e.downcast_ref::<dunkl::Error>(), Some(dunkl::Error::UnsupportedTier(_))) => {
                return Outcome::skipped(format!("{e}"));
            }
            Err(e) => {
                return Outcome {
                    status: Status::Fail,
                    trials,
                    reason: Some(format!("{key}: {e:#}")),
                    counterexample: None,
                    details,
                }
            }
        }
    }
    Outcome { status: Status::Pass, trials, reason: None, counterexample: None, details }
}
