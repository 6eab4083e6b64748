//! Rational expressions over state coordinates and map parameters.
//!
//! Invariants, Casimirs and Poisson matrix entries are stored as [`Expr`]
//! trees so one definition can be evaluated exactly, in floating point, or
//! over [`Dual`] numbers for gradients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Dual, Field, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub enum Expr {
    /// Coordinate of the flattened state.
    Var(usize),
    /// Map parameter (0 = a, 1 = b).
    Param(usize),
    Const(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn param(i: usize) -> Expr {
        Expr::Param(i)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from(n))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    /// Σ terms; the empty sum is zero.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms
            .into_iter()
            .reduce(|a, b| a + b)
            .unwrap_or_else(|| Expr::int(0))
    }

    /// Σᵢ vars[left[i]] · vars[right[i]]
    pub fn dot(left: &[usize], right: &[usize]) -> Expr {
        Expr::sum(
            left.iter()
                .zip(right)
                .map(|(&i, &j)| Expr::var(i) * Expr::var(j)),
        )
    }

    pub fn eval<T: Field>(&self, vars: &[T], params: &[T]) -> Result<T> {
        Ok(match self {
            Expr::Var(i) => vars.get(*i).cloned().ok_or(Error::SizeMismatch {
                left: *i + 1,
                right: vars.len(),
            })?,
            Expr::Param(i) => params.get(*i).cloned().ok_or(Error::SizeMismatch {
                left: *i + 1,
                right: params.len(),
            })?,
            Expr::Const(c) => T::from_rational(c),
            Expr::Add(a, b) => a.eval(vars, params)? + b.eval(vars, params)?,
            Expr::Sub(a, b) => a.eval(vars, params)? - b.eval(vars, params)?,
            Expr::Mul(a, b) => a.eval(vars, params)? * b.eval(vars, params)?,
            Expr::Div(a, b) => {
                let den = b.eval(vars, params)?;
                if den.is_zero() {
                    return Err(Error::SingularEvaluation);
                }
                a.eval(vars, params)? * den.recip()
            }
            Expr::Neg(a) => -a.eval(vars, params)?,
        })
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Param(_) | Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Neg(a) => a.max_var(),
        }
    }
}

/// Value and exact gradient of `expr` at `point` (parameters held fixed).
pub fn dual_eval_with_params(
    expr: &Expr,
    point: &[Rational],
    params: &[Rational],
) -> Result<(Rational, Vec<Rational>)> {
    let vars = Dual::seed(point);
    let params: Vec<Dual<Rational>> = params.iter().cloned().map(Dual::constant).collect();
    let d = expr.eval(&vars, &params)?;
    Ok((d.value.clone(), d.gradient(point.len())))
}

/// Value and exact Jacobian row of a parameter-free expression.
pub fn dual_eval(expr: &Expr, point: &[Rational]) -> Result<(Rational, Vec<Rational>)> {
    dual_eval_with_params(expr, point, &[])
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "v{i}"),
            Expr::Param(0) => write!(f, "a"),
            Expr::Param(1) => write!(f, "b"),
            Expr::Param(i) => write!(f, "p{i}"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Neg(a) => write!(f, "-{a}"),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn product_gradient() {
        let e = Expr::var(0) * Expr::var(1);
        let (v, g) = dual_eval(&e, &[q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(v, q(6, 1));
        assert_eq!(g, vec![q(3, 1), q(2, 1)]);
    }

    #[test]
    fn quotient_gradient() {
        let e = Expr::var(0).div(Expr::int(1) + Expr::var(0) * Expr::var(1));
        let (v, g) = dual_eval(&e, &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(v, q(1, 2));
        assert_eq!(g, vec![q(1, 4), q(-1, 4)]);
    }

    #[test]
    fn constant_gradient() {
        let (v, g) = dual_eval(&Expr::int(7), &[q(3, 1), q(-1, 2), q(5, 7)]).unwrap();
        assert_eq!(v, q(7, 1));
        assert_eq!(g, vec![Rational::zero(); 3]);
    }

    #[test]
    fn singular_denominator() {
        let e = Expr::int(1).div(Expr::int(1) + Expr::var(0));
        assert_eq!(dual_eval(&e, &[q(-1, 1)]), Err(Error::SingularEvaluation));
    }

    #[test]
    fn params_are_constants() {
        let e = Expr::param(0) * Expr::var(0);
        let (v, g) = dual_eval_with_params(&e, &[q(3, 1)], &[q(2, 1)]).unwrap();
        assert_eq!(v, q(6, 1));
        assert_eq!(g, vec![q(2, 1)]);
    }
}
