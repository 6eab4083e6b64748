//! Sparse Laurent polynomials in the spectral parameter λ and square
//! matrices over them.
//!
//! Coefficients are exact rationals. Zero coefficients are never stored, so
//! structural equality is coefficient-wise equality, which over an infinite
//! field is the same as equality for every value of λ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    /// `coef · λ^exp`
    pub fn monomial(coef: Rational, exp: i32) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coef);
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i32, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    /// Evaluates at a nonzero λ.
    pub fn eval(&self, lambda: &Rational) -> Result<Rational> {
        let inv = lambda.recip();
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                lambda.pow(*e as u32)
            } else {
                inv.clone()?.pow(e.unsigned_abs())
            };
            acc += c * p;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, -c)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Square matrix of Laurent polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(size: usize) -> Self {
        LaurentMatrix {
            size,
            entries: vec![LaurentPoly::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = LaurentMatrix::zeros(size);
        for i in 0..size {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::SizeMismatch {
                    left: size,
                    right: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(LaurentMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: LaurentPoly) {
        self.entries[row * self.size + col] = value;
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.size != rhs.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: rhs.size,
            });
        }
        let n = self.size;
        let mut out = LaurentMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.size != rhs.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: rhs.size,
            });
        }
        Ok(LaurentMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn trace(&self) -> LaurentPoly {
        (0..self.size).fold(LaurentPoly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant by cofactor expansion; Lax matrices here are at most 4×4.
    pub fn det(&self) -> LaurentPoly {
        let idx: Vec<usize> = (0..self.size).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> LaurentPoly {
        match cols.len() {
            0 => LaurentPoly::one(),
            1 => self.get(row, cols[0]).clone(),
            _ => {
                let mut acc = LaurentPoly::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(row, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> =
                        cols.iter().copied().filter(|&other| other != c).collect();
                    let term = entry * &self.minor_det(&rest, row + 1);
                    acc = if k % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                acc
            }
        }
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact matrix product; errors on a size mismatch.
pub fn laurent_mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> Result<LaurentMatrix> {
    a.mul(b)
}

/// Equality for every λ, i.e. coefficient-wise. Matrices of different size
/// are unequal.
pub fn laurent_mat_equal(a: &LaurentMatrix, b: &LaurentMatrix) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn lam() -> LaurentPoly {
        LaurentPoly::monomial(q(1), 1)
    }

    fn diag(a: LaurentPoly, b: LaurentPoly) -> LaurentMatrix {
        LaurentMatrix::from_rows(vec![
            vec![a, LaurentPoly::zero()],
            vec![LaurentPoly::zero(), b],
        ])
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = LaurentMatrix::from_rows(vec![
            vec![lam(), LaurentPoly::constant(q(3))],
            vec![LaurentPoly::monomial(q(-2), -2), LaurentPoly::one()],
        ])
        .unwrap();
        assert_eq!(laurent_mat_mul(&LaurentMatrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn laurent_cancellation() {
        let a = diag(lam(), LaurentPoly::one());
        let b = diag(LaurentPoly::monomial(q(1), -1), LaurentPoly::one());
        assert_eq!(laurent_mat_mul(&a, &b).unwrap(), LaurentMatrix::identity(2));
    }

    #[test]
    fn scalar_square() {
        let a = diag(&lam() + &LaurentPoly::one(), LaurentPoly::one());
        let sq = laurent_mat_mul(&a, &a).unwrap();
        let expected = LaurentPoly::from_terms([(2, q(1)), (1, q(2)), (0, q(1))]);
        assert_eq!(sq, diag(expected, LaurentPoly::one()));
    }

    #[test]
    fn size_mismatch() {
        let err = laurent_mat_mul(&LaurentMatrix::identity(2), &LaurentMatrix::identity(3));
        assert!(matches!(
            err,
            Err(Error::SizeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn zero_clutter_is_normalized() {
        let a = diag(lam(), LaurentPoly::zero());
        let cluttered = LaurentPoly::from_terms([(1, q(1)), (0, q(0)), (3, q(2)), (3, q(-2))]);
        assert!(laurent_mat_equal(&a, &diag(cluttered, LaurentPoly::zero())));
        assert!(!laurent_mat_equal(
            &a,
            &diag(&lam() + &LaurentPoly::one(), LaurentPoly::zero())
        ));
    }

    #[test]
    fn det_and_trace() {
        // {λ, 1; λ^-1, 2}: det = 2λ - λ^-1, trace = λ + 2
        let m = LaurentMatrix::from_rows(vec![
            vec![lam(), LaurentPoly::one()],
            vec![LaurentPoly::monomial(q(1), -1), LaurentPoly::constant(q(2))],
        ])
        .unwrap();
        assert_eq!(m.det(), LaurentPoly::from_terms([(1, q(2)), (-1, q(-1))]));
        assert_eq!(m.trace(), LaurentPoly::from_terms([(1, q(1)), (0, q(2))]));
        assert_eq!(LaurentMatrix::identity(4).det(), LaurentPoly::one());
    }

    #[test]
    fn evaluation_matches_substitution() {
        let p = LaurentPoly::from_terms([(2, q(1)), (-1, q(3))]);
        assert_eq!(p.eval(&q(2)).unwrap(), Rational::new(11, 2).unwrap());
        assert!(p.eval(&q(0)).is_err());
    }
}
