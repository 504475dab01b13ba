//! Root systems, reflections and the finite groups they generate.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::rational::{frac, int, is_integer, Rational};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Root {
    vector: Vec<Rational>,
    multiplicity: Rational,
}

impl Root {
    pub fn new(vector: Vec<Rational>, multiplicity: Rational) -> Result<Self> {
        if vector.iter().all(Zero::is_zero) {
            return Err(Error::InvalidRoot("zero vector".into()));
        }
        if multiplicity.is_negative() {
            return Err(Error::InvalidRoot(format!("negative multiplicity {multiplicity}")));
        }
        Ok(Self { vector, multiplicity })
    }

    pub fn vector(&self) -> &[Rational] {
        &self.vector
    }

    pub fn multiplicity(&self) -> &Rational {
        &self.multiplicity
    }

    pub fn norm_sq(&self) -> Rational {
        dot(&self.vector, &self.vector)
    }

    /// Index `i` when the root is a nonzero multiple of `e_i`.
    pub fn axis(&self) -> Option<usize> {
        let mut nz = self.vector.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (i, _) = nz.next()?;
        nz.next().is_none().then_some(i)
    }

    /// Matrix of the reflection `x -> x - 2<x,v>v/|v|^2`. It is symmetric, so
    /// the row-vector convention needs no transpose.
    pub fn reflection_matrix(&self) -> Matrix {
        let n = self.vector.len();
        let scale = int(2) / self.norm_sq();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = if i == j { Rational::one() } else { Rational::zero() };
                        delta - &scale * &self.vector[i] * &self.vector[j]
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("square by construction")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |acc, t| acc + t)
}

/// `x sigma_v`.
pub fn reflect(x: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: v.len(), found: x.len() });
    }
    let nv = dot(v, v);
    if nv.is_zero() {
        return Err(Error::InvalidRoot("zero vector".into()));
    }
    let c = int(2) * dot(x, v) / nv;
    Ok(x.iter().zip(v).map(|(xi, vi)| xi - &c * vi).collect())
}

fn parallel(u: &[Rational], w: &[Rational]) -> bool {
    let n = u.len();
    (0..n).all(|i| (i + 1..n).all(|j| &u[i] * &w[j] == &u[j] * &w[i]))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RootSystemKind {
    /// One root along each coordinate axis.
    Z2d,
    General,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivedConstants {
    pub gamma_kappa: Rational,
    pub lambda_kappa: Rational,
}

/// `h_kappa^2 = prod |x_i|^{2 a_i} * poly`: axis roots contribute the
/// diagonal exponents `a_i = kappa`, every other root a polynomial factor
/// `<x,v>^{2 kappa_v}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightFactors {
    pub axis_kappa: Vec<Rational>,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    dim: usize,
    roots: Vec<Root>,
    kind: RootSystemKind,
    group: Arc<Vec<Matrix>>,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.roots == other.roots
    }
}

impl RootSystem {
    pub fn new(dim: usize, roots: Vec<Root>) -> Result<Self> {
        Self::with_cap(dim, roots, DEFAULT_GROUP_CAP)
    }

    /// `Z_2^d` with multiplicities `kappa[i]` on `e_i`.
    pub fn z2d(kappa: &[Rational]) -> Result<Self> {
        let d = kappa.len();
        let roots = (0..d)
            .map(|i| {
                let mut v = vec![Rational::zero(); d];
                v[i] = Rational::one();
                Root::new(v, kappa[i].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, roots)
    }

    /// The trivial weight in dimension `d` (no roots, trivial group).
    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, Vec::new()).expect("empty root system is valid")
    }

    /// Hyperoctahedral system `B_d`: `kappa0` on `e_i`, `kappa1` on `e_i +- e_j`.
    pub fn hyperoctahedral(dim: usize, kappa0: Rational, kappa1: Rational) -> Result<Self> {
        let mut roots = Vec::new();
        for i in 0..dim {
            let mut v = vec![Rational::zero(); dim];
            v[i] = Rational::one();
            roots.push(Root::new(v, kappa0.clone())?);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                for s in [1, -1] {
                    let mut v = vec![Rational::zero(); dim];
                    v[i] = Rational::one();
                    v[j] = int(s);
                    roots.push(Root::new(v, kappa1.clone())?);
                }
            }
        }
        Self::new(dim, roots)
    }

    pub fn with_cap(dim: usize, roots: Vec<Root>, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRootSystem("dimension must be positive".into()));
        }
        for r in &roots {
            if r.vector.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.vector.len() });
            }
        }
        for (a, ra) in roots.iter().enumerate() {
            for rb in &roots[a + 1..] {
                if parallel(&ra.vector, &rb.vector) {
                    return Err(Error::InvalidRootSystem(format!(
                        "parallel roots {:?} and {:?}",
                        ra.vector, rb.vector
                    )));
                }
            }
        }

        let gens: Vec<Matrix> = roots.iter().map(Root::reflection_matrix).collect();
        let group = generate(dim, &gens, cap)?;

        // Every image of a root must be +- a root with the same multiplicity.
        for r in &roots {
            for g in &group {
                let w = g.apply(&r.vector);
                let hit = roots.iter().find(|u| parallel(&u.vector, &w)).ok_or_else(|| {
                    Error::InvalidRootSystem(format!(
                        "root set is not closed under the group: {:?} has no parallel root",
                        w
                    ))
                })?;
                if hit.multiplicity != r.multiplicity {
                    return Err(Error::InvalidRootSystem(format!(
                        "conjugate roots {:?} and {:?} carry different multiplicities",
                        r.vector, hit.vector
                    )));
                }
            }
        }

        let mut axes: Vec<usize> = roots.iter().filter_map(Root::axis).collect();
        axes.sort_unstable();
        let kind = if axes.len() == roots.len() && axes == (0..dim).collect::<Vec<_>>() {
            RootSystemKind::Z2d
        } else {
            RootSystemKind::General
        };

        Ok(Self { dim, roots, kind, group: Arc::new(group) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn kind(&self) -> RootSystemKind {
        self.kind
    }

    /// All group elements, identity first.
    pub fn group(&self) -> &[Matrix] {
        &self.group
    }

    pub fn reflections(&self) -> Vec<Matrix> {
        self.roots.iter().map(Root::reflection_matrix).collect()
    }

    pub fn is_trivial_weight(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity.is_zero())
    }

    pub fn derived_constants(&self) -> DerivedConstants {
        let gamma: Rational = self.roots.iter().map(|r| r.multiplicity.clone()).sum();
        let lambda = &gamma + frac(self.dim as i64 - 2, 2);
        DerivedConstants { gamma_kappa: gamma, lambda_kappa: lambda }
    }

    /// Exact factorization of `h_kappa^2`. Non-axis roots need integer
    /// multiplicity for the factor to be a polynomial.
    pub fn weight_factors(&self) -> Result<WeightFactors> {
        let mut axis_kappa = vec![Rational::zero(); self.dim];
        let mut poly = MultiPoly::one(self.dim);
        for r in &self.roots {
            if r.multiplicity.is_zero() {
                continue;
            }
            match r.axis() {
                Some(i) => axis_kappa[i] += &r.multiplicity,
                None => {
                    if !is_integer(&r.multiplicity) {
                        return Err(Error::UnsupportedTier(format!(
                            "non-integer multiplicity {} on non-axis root {:?}",
                            r.multiplicity, r.vector
                        )));
                    }
                    let k = r
                        .multiplicity
                        .to_integer()
                        .to_u32()
                        .ok_or_else(|| Error::UnsupportedTier("multiplicity too large".into()))?;
                    poly = poly * MultiPoly::linear_form(&r.vector).pow(2 * k);
                }
            }
        }
        Ok(WeightFactors { axis_kappa, poly })
    }

    /// `h_kappa^2` as a polynomial, when it is one.
    pub fn weight_h_squared_polynomial(&self) -> Result<MultiPoly> {
        let mut poly = MultiPoly::one(self.dim);
        for r in &self.roots {
            if r.multiplicity.is_zero() {
                continue;
            }
            if !is_integer(&r.multiplicity) {
                return Err(Error::UnsupportedTier(format!(
                    "h^2 is not a polynomial for multiplicity {}",
                    r.multiplicity
                )));
            }
            let k = r.multiplicity.to_integer().to_u32().unwrap_or(u32::MAX);
            poly = poly * MultiPoly::linear_form(&r.vector).pow(2 * k);
        }
        Ok(poly)
    }

    /// Float `h_kappa^2(x)`.
    pub fn weight_h_squared_f64(&self, x: &[f64]) -> f64 {
        self.roots
            .iter()
            .filter(|r| !r.multiplicity.is_zero())
            .map(|r| {
                let ip: f64 = r.vector.iter().zip(x).map(|(v, xi)| crate::rational::to_f64(v) * xi).sum();
                ip.abs().powf(2.0 * crate::rational::to_f64(&r.multiplicity))
            })
            .product()
    }

    /// Appends a coordinate `x_{d+1}` carrying multiplicity `mu` on its axis.
    pub fn extend_with_axis(&self, mu: Rational) -> Result<Self> {
        let d = self.dim + 1;
        let mut roots: Vec<Root> = self
            .roots
            .iter()
            .map(|r| {
                let mut v = r.vector.clone();
                v.push(Rational::zero());
                Root { vector: v, multiplicity: r.multiplicity.clone() }
            })
            .collect();
        let mut e = vec![Rational::zero(); d];
        e[d - 1] = Rational::one();
        roots.push(Root::new(e, mu)?);
        Self::new(d, roots)
    }

    /// `f o sigma_v = f` for every root.
    pub fn is_invariant(&self, f: &MultiPoly) -> Result<bool> {
        for r in &self.roots {
            if f.compose_linear(&r.reflection_matrix())? != *f {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn generate(dim: usize, gens: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    let id = Matrix::identity(dim);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(d: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); d];
        v[i] = Rational::one();
        v
    }

    fn root(v: &[i64], k: Rational) -> Root {
        Root::new(v.iter().map(|&c| int(c)).collect(), k).unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&[int(1), int(0)], &e(2, 0)).unwrap(), vec![int(-1), int(0)]);
        assert_eq!(reflect(&[int(0), int(3)], &e(2, 0)).unwrap(), vec![int(0), int(3)]);
        assert!(reflect(&[int(1), int(0)], &[int(0), int(0)]).is_err());
    }

    #[test]
    fn group_orders() {
        let z = RootSystem::z2d(&[int(0), int(0)]).unwrap();
        assert_eq!(z.group().len(), 4);
        let a1 = RootSystem::new(2, vec![root(&[1, -1], int(1))]).unwrap();
        assert_eq!(a1.group().len(), 2);
        assert_eq!(a1.kind(), RootSystemKind::General);
        let b2 = RootSystem::hyperoctahedral(2, int(1), int(2)).unwrap();
        assert_eq!(b2.group().len(), 8);
        let b3 = RootSystem::hyperoctahedral(3, int(0), int(1)).unwrap();
        assert_eq!(b3.group().len(), 48);
    }

    #[test]
    fn group_cap() {
        let b2 = vec![root(&[1, 0], int(1)), root(&[0, 1], int(1)), root(&[1, 1], int(1)), root(&[1, -1], int(1))];
        assert!(matches!(RootSystem::with_cap(2, b2, 5), Err(Error::GroupTooLarge { cap: 5 })));
    }

    #[test]
    fn conjugate_multiplicities_enforced() {
        // e1 and e2 are conjugate under the swap e1 - e2.
        let roots = vec![root(&[1, 0], int(1)), root(&[0, 1], int(2)), root(&[1, 1], int(1)), root(&[1, -1], int(1))];
        assert!(matches!(RootSystem::new(2, roots), Err(Error::InvalidRootSystem(_))));
        // A root set that is not closed under the group.
        let open = vec![root(&[1, 0], int(1)), root(&[1, 1], int(1))];
        assert!(matches!(RootSystem::new(2, open), Err(Error::InvalidRootSystem(_))));
        let par = vec![root(&[1, 0], int(1)), root(&[2, 0], int(1))];
        assert!(matches!(RootSystem::new(2, par), Err(Error::InvalidRootSystem(_))));
    }

    #[test]
    fn constants() {
        let c = RootSystem::trivial(3).derived_constants();
        assert_eq!((c.gamma_kappa, c.lambda_kappa), (int(0), frac(1, 2)));
        let c = RootSystem::z2d(&[int(1), int(2)]).unwrap().derived_constants();
        assert_eq!((c.gamma_kappa, c.lambda_kappa), (int(3), int(3)));
        assert_eq!(RootSystem::trivial(4).derived_constants().lambda_kappa, int(1));
    }

    #[test]
    fn weights() {
        let z = RootSystem::z2d(&[int(1), int(0)]).unwrap();
        let w = z.weight_factors().unwrap();
        assert_eq!(w.axis_kappa, vec![int(1), int(0)]);
        assert!(w.poly == MultiPoly::one(2));
        let a1 = RootSystem::new(2, vec![root(&[1, -1], int(1))]).unwrap();
        let x1 = MultiPoly::var(2, 0);
        let x2 = MultiPoly::var(2, 1);
        assert_eq!(a1.weight_h_squared_polynomial().unwrap(), (x1 - x2).pow(2));
        assert_eq!(RootSystem::trivial(3).weight_h_squared_polynomial().unwrap(), MultiPoly::one(3));
        let half = RootSystem::new(2, vec![root(&[1, -1], frac(1, 2))]).unwrap();
        assert!(matches!(half.weight_factors(), Err(Error::UnsupportedTier(_))));
    }

    #[test]
    fn z2d_detection_accepts_scaled_axes() {
        let rs = RootSystem::new(2, vec![root(&[0, 3], int(1)), root(&[-2, 0], int(1))]).unwrap();
        assert_eq!(rs.kind(), RootSystemKind::Z2d);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(p, q)| frac(p, q))
    }

    proptest! {
        #[test]
        fn group_preserves_norm_and_weight(x in proptest::collection::vec(small_rational(), 3)) {
            let rs = RootSystem::hyperoctahedral(3, int(1), int(1)).unwrap();
            let h2 = rs.weight_h_squared_polynomial().unwrap();
            let n0 = dot(&x, &x);
            let w0 = h2.evaluate(&x).unwrap();
            for g in rs.group() {
                prop_assert!(g.is_orthogonal());
                let y = g.apply(&x);
                prop_assert_eq!(dot(&y, &y), n0.clone());
                prop_assert_eq!(h2.evaluate(&y).unwrap(), w0.clone());
            }
        }

        #[test]
        fn reflection_is_involutive_isometry(
            x in proptest::collection::vec(small_rational(), 3),
            v in proptest::collection::vec(small_rational(), 3),
        ) {
            prop_assume!(v.iter().any(|c| !c.is_zero()));
            let y = reflect(&x, &v).unwrap();
            prop_assert_eq!(dot(&y, &v), -dot(&x, &v));
            prop_assert_eq!(dot(&y, &y), dot(&x, &x));
            prop_assert_eq!(reflect(&y, &v).unwrap(), x);
        }
    }
}
