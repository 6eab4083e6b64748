use serde::Serialize;

use crate::error::{Error, Result};

/// Root selector for quadratic leaves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The root that stays finite as the leading coefficient vanishes.
    #[default]
    Plus,
    /// The other root; diverges in that limit.
    Minus,
}

/// Solutions of `A X² + B X + C = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafRoots {
    pub regular: f64,
    /// Absent when the constraint is linear.
    pub other: Option<f64>,
}

impl LeafRoots {
    pub fn select(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.regular,
            Branch::Minus => self.other.unwrap_or(self.regular),
        }
    }

    pub fn all(&self) -> Vec<f64> {
        std::iter::once(self.regular).chain(self.other).collect()
    }
}

/// Cancellation-free roots: the regular root is `2C/q` with
/// `q = -B - sign(B)√(B² - 4AC)`; the other is `q/(2A)`.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Result<LeafRoots> {
    if a == 0.0 {
        if b == 0.0 {
            return Err(Error::DegenerateConstraint);
        }
        return Ok(LeafRoots {
            regular: -c / b,
            other: None,
        });
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::ComplexRoots { discriminant: disc });
    }
    let q = -b - b.signum() * disc.sqrt();
    if q == 0.0 {
        // b = 0 and c = 0: both roots are zero
        return Ok(LeafRoots {
            regular: 0.0,
            other: Some(0.0),
        });
    }
    Ok(LeafRoots {
        regular: 2.0 * c / q,
        other: Some(q / (2.0 * a)),
    })
}

/// `|A X² + B X + C|` relative to the largest term.
pub fn quadratic_residual(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let terms = [a * x * x, b * x, c];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let r = terms.iter().sum::<f64>().abs();
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Coefficients of `X - X² x1 x2 = k`, written as `x1x2 X² - X + k = 0`.
pub fn dnls_leaf_coefficients(x1: f64, x2: f64, k: f64) -> (f64, f64, f64) {
    (x1 * x2, -1.0, k)
}

/// Both roots of `X - X² x1 x2 = k`; the single root `k` when `x1 x2 = 0`.
pub fn solve_dnls_leaf(x1: f64, x2: f64, k: f64) -> Result<LeafRoots> {
    let (a, b, c) = dnls_leaf_coefficients(x1, x2, k);
    solve_quadratic(a, b, c)
}

/// Coefficients of `(1-x1²)(1-x2²) X² + (2 x1 x2 - k) X + 1 = 0`.
pub fn dihedral_leaf_coefficients(x1: f64, x2: f64, k: f64) -> (f64, f64, f64) {
    ((1.0 - x1 * x1) * (1.0 - x2 * x2), 2.0 * x1 * x2 - k, 1.0)
}

/// Both roots of the dihedral leaf quadratic, with a linear fallback when the
/// leading coefficient vanishes.
pub fn solve_dihedral_leaf(x1: f64, x2: f64, k: f64) -> Result<LeafRoots> {
    let (a, b, c) = dihedral_leaf_coefficients(x1, x2, k);
    solve_quadratic(a, b, c)
}
