//! Seeded Monte Carlo oracle: a self-normalized ratio estimator over
//! uniformly distributed sphere points.
//!
//! Samples come in fixed-size blocks; block `b` draws from stream `b` of a
//! ChaCha generator seeded with the user seed, so the estimate does not
//! depend on how blocks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::WeightedDomain;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::to_f64;

const BLOCK: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Float evaluator for a polynomial: a flat list of terms.
struct Compiled {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(f: &MultiPoly) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| {
                let pows =
                    m.exponents().iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k as i32)).collect();
                (to_f64(c), pows)
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, pows)| pows.iter().fold(*c, |acc, &(i, k)| acc * x[i].powi(k))).sum()
    }
}

pub fn mc_integrate(dom: &WeightedDomain, f: &MultiPoly, n: usize, seed: u64) -> Result<McEstimate> {
    if f.dim() != dom.dim() {
        return Err(Error::DimensionMismatch { expected: dom.dim(), found: f.dim() });
    }
    let c = Compiled::new(f);
    mc_integrate_fn(dom, |x| c.eval(x), n, seed)
}

/// Estimates the normalized integral of an arbitrary float function.
pub fn mc_integrate_fn<F>(dom: &WeightedDomain, f: F, n: usize, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {n}")));
    }
    let blocks = n.div_ceil(BLOCK);
    let run = |pass: Pass| -> Result<Vec<[f64; 2]>> {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let len = BLOCK.min(n - b * BLOCK);
                block(dom, &f, seed, b as u64, len, pass)
            })
            .collect()
    };

    let sums = run(Pass::Sums)?;
    let (sw, sfw) = sums.iter().fold((0.0, 0.0), |(a, b), s| (a + s[0], b + s[1]));
    if sw <= 0.0 {
        return Err(Error::Degenerate("all Monte Carlo weights vanished".into()));
    }
    let mean = sfw / sw;
    let resid = run(Pass::Residual(mean))?;
    let ss: f64 = resid.iter().map(|s| s[0]).sum();
    let nf = n as f64;
    let wbar = sw / nf;
    let stderr = (ss / (nf * (nf - 1.0))).sqrt() / wbar;
    Ok(McEstimate { mean, stderr, n_samples: n, seed })
}

#[derive(Clone, Copy)]
enum Pass {
    Sums,
    /// Sum of squared residuals `(f w - mean w)^2`.
    Residual(f64),
}

fn block<F>(dom: &WeightedDomain, f: &F, seed: u64, stream: u64, len: usize, pass: Pass) -> Result<[f64; 2]>
where
    F: Fn(&[f64]) -> f64,
{
    let lifted = dom.lifted_system();
    let dd = lifted.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut s = vec![0.0; dd];
    let mut p = Vec::with_capacity(dd);
    let mut acc = [0.0; 2];
    for _ in 0..len {
        let mut r2: f64 = 0.0;
        for v in s.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
            r2 += *v * *v;
        }
        let r = r2.sqrt();
        for v in s.iter_mut() {
            *v /= r;
        }
        let w = lifted.weight_h_squared_f64(&s);
        dom.project_point(&s, &mut p);
        let fw = f(&p) * w;
        if !fw.is_finite() || !w.is_finite() {
            return Err(Error::NonFinite);
        }
        match pass {
            Pass::Sums => {
                acc[0] += w;
                acc[1] += fw;
            }
            Pass::Residual(mean) => {
                let e = fw - mean * w;
                acc[0] += e * e;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::RootSystem;
    use crate::rational::{frac, int};

    #[test]
    fn constant_has_zero_error() {
        let dom = WeightedDomain::sphere(RootSystem::z2d(&[int(1), frac(1, 2), int(0)]).unwrap());
        let est = mc_integrate(&dom, &MultiPoly::one(3), 5000, 7).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.seed, 7);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let dom = WeightedDomain::ball(RootSystem::trivial(2), frac(1, 2)).unwrap();
        let f = MultiPoly::var(2, 0).pow(2);
        let a = mc_integrate(&dom, &f, 40_000, 11).unwrap();
        let b = mc_integrate(&dom, &f, 40_000, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_integrate(&dom, &f, 40_000, 12).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn rejects_tiny_sample_counts() {
        let dom = WeightedDomain::sphere(RootSystem::trivial(2));
        assert!(mc_integrate(&dom, &MultiPoly::one(2), 1, 0).is_err());
    }

    #[test]
    fn symmetric_target_on_s2() {
        let dom = WeightedDomain::sphere(RootSystem::trivial(3));
        let est = mc_integrate(&dom, &MultiPoly::var(3, 0).pow(2), 1_000_000, 3).unwrap();
        assert!((est.mean - 1.0 / 3.0).abs() < 4.0 * est.stderr, "{est:?}");
    }
}
