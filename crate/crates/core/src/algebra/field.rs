//! Small dense linear algebra, generic over the exact fields in this crate.

use num_traits::{One, Zero};

use super::gauss::GaussRational;
use super::poly1::Poly1;
use super::ratfunc::RatFunc2;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        int(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn one() -> Self {
        GaussRational::one()
    }
    fn from_int(n: i64) -> Self {
        GaussRational::real(int(n))
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        GaussRational::inv(self)
    }
}

impl Field for RatFunc2 {
    fn zero() -> Self {
        RatFunc2::zero()
    }
    fn one() -> Self {
        RatFunc2::one()
    }
    fn from_int(n: i64) -> Self {
        RatFunc2::int(n)
    }
    fn is_zero(&self) -> bool {
        RatFunc2::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        RatFunc2::inv(self)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

fn check_square<F>(m: &Matrix<F>) -> Result<usize> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: row.len() });
    }
    Ok(n)
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&row[k].mul(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Solves `a·x = b` for a square nonsingular `a` and several right-hand
/// sides (the columns of `b`). Returns `None` if `a` is singular.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Option<Matrix<F>>> {
    let n = check_square(a)?;
    if b.len() != n {
        return Err(Error::Shape(format!("right-hand side has {} rows, expected {n}", b.len())));
    }
    let w = b.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = a.iter().zip(b).map(|(r, s)| r.iter().chain(s).cloned().collect()).collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
            return Ok(None);
        };
        aug.swap(col, piv);
        let inv = aug[col][col].inv().expect("pivot is nonzero");
        for x in aug[col].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
    }
    Ok(Some(aug.into_iter().map(|r| r[n..n + w].to_vec()).collect()))
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Result<Option<Matrix<F>>> {
    let n = check_square(a)?;
    solve(a, &identity(n))
}

/// Characteristic polynomial `det(x·I − m)` by Faddeev–LeVerrier; returns
/// coefficients lowest degree first, monic of degree `n`.
pub fn char_poly<F: Field>(m: &Matrix<F>) -> Result<Vec<F>> {
    let n = check_square(m)?;
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    let mut mk: Matrix<F> = vec![vec![F::zero(); n]; n];
    for k in 1..=n {
        // M_k = m·(M_{k-1} + c_{n-k+1} I)
        let c_prev = coeffs[n - k + 1].clone();
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] = row[i].add(&c_prev);
        }
        mk = mat_mul(m, &mk);
        let trace = (0..n).fold(F::zero(), |acc, i| acc.add(&mk[i][i]));
        let c = trace.mul(&F::from_int(k as i64).inv().expect("k > 0")).neg();
        coeffs[n - k] = c;
    }
    Ok(coeffs)
}

/// Exact characteristic polynomial of a rational matrix and whether it is
/// squarefree (equivalently, the eigenvalues are pairwise distinct).
pub fn char_poly_squarefree(m: &Matrix<Rational>) -> Result<(Poly1, bool)> {
    let p = Poly1::new(char_poly(m)?);
    let sf = p.is_squarefree();
    Ok((p, sf))
}
