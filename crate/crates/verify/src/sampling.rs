//! Seeded random inputs.

use anyhow::{bail, Result};
use dunkl::domains::{permutation_group, symmetrize};
use dunkl::quadrature::WeightedDomain;
use dunkl::rational::{frac, int};
use dunkl::{MultiPoly, Rational, RootSystem};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const MAX_TRIES: usize = 100;

/// Deterministic seed derivation: FNV-1a over the base seed and labels,
/// then a splitmix64 finalizer.
pub fn derive_seed(base: u64, parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    base.to_le_bytes().into_iter().for_each(&mut eat);
    for p in parts {
        eat(0xff);
        p.bytes().for_each(&mut eat);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Rationals `p/q` in `[0, 2]` with `q <= 4`.
pub fn random_kappa(seed: u64, dim: usize) -> Vec<Rational> {
    let mut r = rng(seed);
    (0..dim)
        .map(|_| {
            let q = r.random_range(1..=4i64);
            frac(r.random_range(0..=2 * q), q)
        })
        .collect()
}

#[derive(Clone, Copy, Default)]
pub struct Constraints<'a> {
    /// Average over this system's reflection group.
    pub invariant: Option<&'a RootSystem>,
    /// Average over coordinate permutations.
    pub symmetric: bool,
    /// Subtract the mean on this domain; also rejects functions constant on it.
    pub mean_zero: Option<&'a WeightedDomain>,
}

fn random_exponents<R: Rng>(r: &mut R, dim: usize, degree: u32) -> Vec<u32> {
    let mut e = vec![0u32; dim];
    for _ in 0..degree {
        e[r.random_range(0..dim)] += 1;
    }
    e
}

/// A sparse polynomial with integer coefficients in `[-9, 9]` and degree at
/// most `degree_cap`, post-processed by the constraints; resampled when the
/// result vanishes.
pub fn sample_polynomial(seed: u64, dim: usize, degree_cap: u32, c: &Constraints) -> Result<MultiPoly> {
    let mut r = rng(seed);
    let max_terms = if c.invariant.is_some() || c.symmetric { 10 } else { 6 };
    for _ in 0..MAX_TRIES {
        let n_terms = r.random_range(1..=max_terms);
        let mut f = MultiPoly::zero(dim);
        for _ in 0..n_terms {
            let deg = r.random_range(0..=degree_cap);
            let e = random_exponents(&mut r, dim, deg);
            let mut coef = 0;
            while coef == 0 {
                coef = r.random_range(-9..=9i64);
            }
            f = f + MultiPoly::monomial(dim, e, int(coef));
        }
        if let Some(rs) = c.invariant {
            f = symmetrize(&f, rs.group())?;
        }
        if c.symmetric {
            f = symmetrize(&f, &permutation_group(dim))?;
        }
        if let Some(dom) = c.mean_zero {
            let mean = dom.integrate(&f)?;
            f = f - MultiPoly::constant(dim, mean);
            if dom.norm_sq(&f)?.is_zero() {
                continue;
            }
        }
        if !f.is_zero() {
            return Ok(f);
        }
    }
    bail!("no admissible polynomial after {MAX_TRIES} draws (seed {seed})")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let c = Constraints::default();
        assert_eq!(sample_polynomial(3, 3, 6, &c).unwrap(), sample_polynomial(3, 3, 6, &c).unwrap());
        assert_ne!(derive_seed(1, &["a"]), derive_seed(1, &["b"]));
        assert_ne!(derive_seed(1, &["ab"]), derive_seed(1, &["a", "b"]));
    }

    #[test]
    fn coefficient_and_degree_bounds() {
        for s in 0..50 {
            let f = sample_polynomial(s, 3, 4, &Constraints::default()).unwrap();
            assert!(f.degree().unwrap() <= 4);
            assert!(!f.is_zero());
        }
    }

    #[test]
    fn invariant_constraint_gives_even_exponents() {
        let rs = RootSystem::z2d(&[int(1), int(0), frac(1, 2)]).unwrap();
        let c = Constraints { invariant: Some(&rs), ..Default::default() };
        for s in 0..20 {
            let f = sample_polynomial(s, 3, 6, &c).unwrap();
            assert!(f.terms().all(|(m, _)| m.exponents().iter().all(|e| e % 2 == 0)));
        }
    }

    #[test]
    fn mean_zero_constraint() {
        let rs = RootSystem::z2d(&[int(1), frac(3, 2)]).unwrap();
        let dom = WeightedDomain::sphere(rs.clone());
        let c = Constraints { invariant: Some(&rs), mean_zero: Some(&dom), ..Default::default() };
        for s in 0..20 {
            let f = sample_polynomial(s, 2, 6, &c).unwrap();
            assert!(dom.integrate(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn kappa_range() {
        for s in 0..20 {
            for k in random_kappa(s, 4) {
                assert!(k >= int(0) && k <= int(2));
            }
        }
    }
}
