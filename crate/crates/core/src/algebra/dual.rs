//! Forward-mode first derivatives over any [`Field`].
//!
//! A [`Dual`] carries a value and the full gradient with respect to the
//! seeded variables. Constants carry an empty gradient, which every operation
//! treats as the zero vector, so constants never need to know how many
//! variables are active.

use std::ops::{Add, Mul, Neg, Sub};

use super::{Field, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Dual<T> {
    pub value: T,
    pub grad: Vec<T>,
}

impl<T: Field> Dual<T> {
    pub fn constant(value: T) -> Self {
        Dual {
            value,
            grad: Vec::new(),
        }
    }

    /// The `index`-th of `count` independent variables at `value`.
    pub fn variable(value: T, index: usize, count: usize) -> Self {
        let mut grad = vec![T::zero(); count];
        grad[index] = T::one();
        Dual { value, grad }
    }

    /// Seeds every coordinate of `point` as its own variable.
    pub fn seed(point: &[T]) -> Vec<Self> {
        point
            .iter()
            .enumerate()
            .map(|(i, v)| Dual::variable(v.clone(), i, point.len()))
            .collect()
    }

    /// Gradient padded to `count` entries.
    pub fn gradient(&self, count: usize) -> Vec<T> {
        let mut g = self.grad.clone();
        g.resize(count, T::zero());
        g
    }
}

fn zip_grad<T: Field>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            f(x, y)
        })
        .collect()
}

fn scale<T: Field>(g: &[T], s: &T) -> Vec<T> {
    g.iter().map(|x| x.clone() * s.clone()).collect()
}

impl<T: Field> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            value: self.value + rhs.value,
            grad: zip_grad(&self.grad, &rhs.grad, |a, b| a + b),
        }
    }
}

impl<T: Field> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            value: self.value - rhs.value,
            grad: zip_grad(&self.grad, &rhs.grad, |a, b| a - b),
        }
    }
}

impl<T: Field> Mul for Dual<T> {
    type Output = Self;
    // product rule: the gradients add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        let grad = zip_grad(
            &scale(&self.grad, &rhs.value),
            &scale(&rhs.grad, &self.value),
            |a, b| a + b,
        );
        Dual {
            value: self.value * rhs.value,
            grad,
        }
    }
}

impl<T: Field> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            value: -self.value,
            grad: self.grad.into_iter().map(|g| -g).collect(),
        }
    }
}

impl<T: Field> Field for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn one() -> Self {
        Dual::constant(T::one())
    }
    fn from_i64(n: i64) -> Self {
        Dual::constant(T::from_i64(n))
    }
    fn from_rational(r: &Rational) -> Self {
        Dual::constant(T::from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn recip(&self) -> Self {
        // d(1/v) = -dv / v^2
        let inv = self.value.recip();
        let factor = -(inv.clone() * inv.clone());
        Dual {
            value: inv,
            grad: scale(&self.grad, &factor),
        }
    }
    fn approx(&self) -> f64 {
        self.value.approx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn product_rule() {
        let v = Dual::seed(&[q(2, 1), q(3, 1)]);
        let p = v[0].clone() * v[1].clone();
        assert_eq!(p.value, q(6, 1));
        assert_eq!(p.gradient(2), vec![q(3, 1), q(2, 1)]);
    }

    #[test]
    fn quotient_rule() {
        // x1 / (1 + x1 x2) at (1, 1)
        let v = Dual::seed(&[q(1, 1), q(1, 1)]);
        let den = Dual::one() + v[0].clone() * v[1].clone();
        let e = v[0].clone() * den.recip();
        assert_eq!(e.value, q(1, 2));
        assert_eq!(e.gradient(2), vec![q(1, 4), q(-1, 4)]);
    }

    #[test]
    fn constants_have_zero_gradient() {
        let c = Dual::<Rational>::from_i64(7);
        assert_eq!(c.gradient(3), vec![Rational::zero(); 3]);
        let v = Dual::seed(&[q(5, 1)]);
        let s = v[0].clone() + c;
        assert_eq!(s.gradient(1), vec![Rational::one()]);
    }
}
