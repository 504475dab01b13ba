//! Randomized invariants over the public API.

use dunkl::domains::{
    ball_of_simplex, ball_triple_norm_sq, lifted_gradient_norm_sq, lifted_sphere, pullback_simplex, symmetrize,
};
use dunkl::harmonics::Harmonics;
use dunkl::operators::OperatorContext;
use dunkl::quadrature::{mc_integrate, WeightedDomain};
use dunkl::rational::{frac, int};
use dunkl::uncertainty::{make_admissible, sphere_uncertainty};
use dunkl::{MultiPoly, Rational, RootSystem};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn kappa(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((0i64..=8, 1i64..=4).prop_map(|(p, q)| frac(p, q)), dim)
}

fn poly(dim: usize, degree: u32) -> impl Strategy<Value = MultiPoly> {
    let term = (proptest::collection::vec(0..=degree, dim), -9i64..=9);
    proptest::collection::vec(term, 1..6).prop_map(move |terms| {
        terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= degree)
            .map(|(e, c)| MultiPoly::monomial(dim, e, int(c)))
            .fold(MultiPoly::zero(dim), |acc, m| acc + m)
    })
}

fn nonzero_vector(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(), dim).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly(3, 3), g in poly(3, 3), h in poly(3, 3)) {
        prop_assert_eq!((&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &f * &g + &f * &h);
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn division_by_linear_form_inverts_multiplication(g in poly(3, 4), v in nonzero_vector(3)) {
        let prod = &g * &MultiPoly::linear_form(&v);
        prop_assert_eq!(prod.divide_by_linear_form(&v).unwrap(), g);
    }

    #[test]
    fn sphere_ideal_reduces_to_zero(f in poly(3, 4)) {
        let ideal = MultiPoly::norm_sq(3) - MultiPoly::one(3);
        prop_assert!((&f * &ideal).reduce_mod_sphere().unwrap().is_zero());
    }

    #[test]
    fn reduction_preserves_values_on_sphere(f in poly(3, 5), x in proptest::collection::vec(-1.0f64..1.0, 3)) {
        let n = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        prop_assume!(n > 1e-3);
        let p: Vec<f64> = x.iter().map(|t| t / n).collect();
        let a = f.evaluate_f64(&p).unwrap();
        let b = f.reduce_mod_sphere().unwrap().evaluate_f64(&p).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn composition_respects_products(f in poly(2, 3), g in poly(2, 3), k in kappa(2)) {
        let rs = RootSystem::hyperoctahedral(2, k[0].clone(), k[1].clone()).unwrap();
        for m in rs.group() {
            let lhs = (&f * &g).compose_linear(m).unwrap();
            let rhs = f.compose_linear(m).unwrap() * g.compose_linear(m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dunkl_operators_commute(f in poly(3, 4), k in kappa(3)) {
        let c = OperatorContext::new(RootSystem::z2d(&k).unwrap());
        for i in 0..3 {
            for j in i + 1..3 {
                let a = c.dunkl(i, &c.dunkl(j, &f).unwrap()).unwrap();
                let b = c.dunkl(j, &c.dunkl(i, &f).unwrap()).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn explicit_laplacian_agrees(f in poly(2, 4), k in kappa(2)) {
        let c = OperatorContext::new(RootSystem::hyperoctahedral(2, k[0].clone(), k[1].clone()).unwrap());
        prop_assert_eq!(c.h_laplacian(&f).unwrap(), c.h_laplacian_explicit(&f).unwrap());
    }

    #[test]
    fn sphere_integral_is_group_invariant(f in poly(2, 4), k in kappa(2)) {
        let rs = RootSystem::z2d(&k).unwrap();
        let dom = WeightedDomain::sphere(rs.clone());
        let base = dom.integrate(&f).unwrap();
        for m in rs.group() {
            prop_assert_eq!(dom.integrate(&f.compose_linear(m).unwrap()).unwrap(), base.clone());
        }
    }

    #[test]
    fn squares_integrate_positive(f in poly(3, 3), k in kappa(3)) {
        let dom = WeightedDomain::sphere(RootSystem::z2d(&k).unwrap());
        let n = dom.norm_sq(&f).unwrap();
        let vanishes = f.reduce_mod_sphere().unwrap().is_zero();
        prop_assert_eq!(n.is_zero(), vanishes);
        prop_assert!(!n.is_negative());
    }

    #[test]
    fn ball_and_simplex_isometries(f in poly(2, 3), k in kappa(2), m in 0i64..=4) {
        let mu = frac(m, 2);
        let ball = WeightedDomain::ball(RootSystem::z2d(&k).unwrap(), mu.clone()).unwrap();
        let sphere = lifted_sphere(&ball);
        let lifted = f.embed(3);
        prop_assert_eq!(ball.norm_sq(&f).unwrap(), sphere.norm_sq(&lifted).unwrap());

        let simplex = WeightedDomain::simplex(RootSystem::z2d(&k).unwrap(), mu).unwrap();
        let pulled = ball_of_simplex(&simplex).unwrap();
        prop_assert_eq!(simplex.norm_sq(&f).unwrap(), pulled.norm_sq(&pullback_simplex(&f)).unwrap());
    }

    #[test]
    fn triple_norm_equals_lifted_gradient(f in poly(2, 3), k in kappa(2), m in 0i64..=4) {
        let ball = WeightedDomain::ball(RootSystem::z2d(&k).unwrap(), frac(m, 2)).unwrap();
        prop_assert_eq!(ball_triple_norm_sq(&ball, &f).unwrap(), lifted_gradient_norm_sq(&ball, &f).unwrap());
    }

    #[test]
    fn symmetrize_is_a_projection(f in poly(2, 4), k in kappa(2)) {
        let rs = RootSystem::hyperoctahedral(2, k[0].clone(), k[1].clone()).unwrap();
        let once = symmetrize(&f, rs.group()).unwrap();
        prop_assert_eq!(symmetrize(&once, rs.group()).unwrap(), once.clone());
        prop_assert!(rs.is_invariant(&once).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn parseval(f in poly(2, 5), k in kappa(2)) {
        let h = Harmonics::new(OperatorContext::new(RootSystem::z2d(&k).unwrap()));
        let sf = f.reduce_mod_sphere().unwrap();
        let exp = h.expand(&sf).unwrap();
        let total = (0..=5).filter_map(|n| exp.component(n)).map(|p| h.sphere().norm_sq(p).unwrap())
            .fold(Rational::zero(), |a, b| a + b);
        prop_assert_eq!(total, h.sphere().norm_sq(&f).unwrap());
    }

    #[test]
    fn uncertainty_ignores_sign(f in poly(3, 4), k in kappa(3)) {
        let rs = RootSystem::z2d(&k).unwrap();
        let dom = WeightedDomain::sphere(rs.clone());
        let f = symmetrize(&f, rs.group()).unwrap();
        let mean = dom.integrate(&f).unwrap();
        let centered = &f - &MultiPoly::constant(3, mean);
        prop_assume!(!dom.norm_sq(&centered).unwrap().is_zero());
        let a = make_admissible(&dom, &f).unwrap();
        let ctx = OperatorContext::new(rs);
        let r1 = sphere_uncertainty(&ctx, &a).unwrap();
        let r2 = sphere_uncertainty(&ctx, &a.negated()).unwrap();
        prop_assert!(r1.margin >= 0.0);
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn mc_is_reproducible_and_consistent(f in poly(2, 4), seed in any::<u64>()) {
        let dom = WeightedDomain::sphere(RootSystem::z2d(&[frac(1, 2), int(1)]).unwrap());
        let a = mc_integrate(&dom, &f, 20_000, seed).unwrap();
        let b = mc_integrate(&dom, &f, 20_000, seed).unwrap();
        prop_assert_eq!(a.mean, b.mean);
        prop_assert!(a.stderr >= 0.0);
        let exact = dunkl::rational::to_f64(&dom.integrate(&f).unwrap());
        prop_assert!((a.mean - exact).abs() <= 6.0 * a.stderr + 1e-9 * (1.0 + exact.abs()));
    }
}
