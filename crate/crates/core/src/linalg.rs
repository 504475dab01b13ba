//! Dense rational matrices: square matrices acting on row vectors, and an
//! exact linear solver based on fraction-free (Bareiss) elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A square rational matrix. Points are row vectors, so `x` maps to `x M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Matrix product `self * other`; as maps on row vectors this applies
    /// `self` first.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Matrix { n, entries }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        Matrix { n, entries }
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.n, "vector size mismatch");
        (0..self.n)
            .map(|j| {
                x.iter()
                    .enumerate()
                    .filter(|(_, xi)| !xi.is_zero())
                    .map(|(i, xi)| xi * self.get(i, j))
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()) == Matrix::identity(self.n)
    }

    /// True when every column has at most one nonzero entry, so substitution
    /// maps monomials to monomials.
    pub fn is_monomial(&self) -> bool {
        (0..self.n).all(|j| (0..self.n).filter(|&i| !self.get(i, j).is_zero()).count() <= 1)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(format_rational).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "Matrix[{}]", rows.join(", "))
    }
}

/// Solves `A x = b` exactly for square nonsingular `A` (given by rows).
///
/// Rows are scaled to integers and reduced with Bareiss elimination, so every
/// intermediate entry stays an integer; the final back substitution is
/// rational.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    // Augmented integer matrix.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let lcm = row.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        m.push(row.iter().chain(std::iter::once(rhs)).map(|r| r.numer() * (&lcm / r.denom())).collect());
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Internal(format!("singular linear system at column {k} of {n}")))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
            }
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Largest absolute entry, used only in diagnostics.
pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn solves_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![int(3), int(5)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
    }

    #[test]
    fn solves_with_pivoting_and_fractions() {
        let a = vec![vec![int(0), frac(1, 2), int(1)], vec![int(1), int(0), frac(-1, 3)], vec![int(2), int(1), int(0)]];
        let want = vec![frac(1, 7), int(-2), frac(5, 3)];
        let b: Vec<Rational> = a.iter().map(|row| row.iter().zip(&want).map(|(p, q)| p * q).sum()).collect();
        assert_eq!(solve(&a, &b).unwrap(), want);
    }

    #[test]
    fn singular_system_is_reported() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(matches!(solve(&a, &[int(1), int(2)]), Err(Error::Internal(_))));
    }

    #[test]
    fn row_vector_convention() {
        // x M with M = [[0,1],[1,0]] swaps coordinates.
        let m = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(m.apply(&[int(3), int(5)]), vec![int(5), int(3)]);
        assert!(m.is_orthogonal());
        assert!(m.is_monomial());
    }
}
