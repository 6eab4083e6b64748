//! Lax matrices as exact Laurent matrices, the refactorisation identity and
//! trace invariants.
//!
//! λ is never instantiated: every identity is checked coefficient-wise.

use crate::algebra::{LaurentMatrix, LaurentPoly, Rational};
use crate::catalog::{MapDescriptor, PairState};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaxKind {
    /// `[[x, 1], [x² + a - λ, x]]`
    Adler,
    /// `[[λ + a + x1 x2, x1], [x2, 1]]`
    Nls,
    /// `[[λ + X, x1], [x2, 1]]`
    Nls3d,
    /// `[[λ² X + 1, λ x1 X], [λ x2 X, 1]]`
    Dnls3d,
    /// `[[λ² X + 1, λ x1], [λ x2, 1]]`
    Dnls3dReparam,
    /// `[[λ² (a + x1 x2) + 1, λ x1], [λ x2, 1]]`
    Dnls,
    /// Dihedral-invariant matrix with entries in λ², λ⁰, λ⁻².
    Dihedral3d,
    /// Block form `[[λ + a + <w1,w2>, <w1|], [|w2>, I]]`.
    VectorNls { n: usize },
    /// Block form `[[λ² (a + <w1,w2>) + 1, λ<w1|], [λ|w2>, I]]`.
    VectorAffine { n: usize },
}

impl LaxKind {
    pub fn name(&self) -> String {
        match self {
            LaxKind::Adler => "adler".into(),
            LaxKind::Nls => "nls".into(),
            LaxKind::Nls3d => "nls-3d".into(),
            LaxKind::Dnls3d => "dnls-3d".into(),
            LaxKind::Dnls3dReparam => "dnls-3d-reparam".into(),
            LaxKind::Dnls => "dnls".into(),
            LaxKind::Dihedral3d => "dihedral-3d".into(),
            LaxKind::VectorNls { n } => format!("vector-nls:{n}"),
            LaxKind::VectorAffine { n } => format!("vector-affine:{n}"),
        }
    }

    pub fn from_name(name: &str) -> Result<LaxKind> {
        let unknown = || Error::UnknownBuilder(name.into());
        let (base, n) = match name.split_once(':') {
            Some((base, n)) => (base, Some(n.parse::<usize>().map_err(|_| unknown())?)),
            None => (name, None),
        };
        let kind = match (base, n) {
            ("adler", None) => LaxKind::Adler,
            ("nls", None) => LaxKind::Nls,
            ("nls-3d", None) => LaxKind::Nls3d,
            ("dnls-3d", None) => LaxKind::Dnls3d,
            ("dnls-3d-reparam", None) => LaxKind::Dnls3dReparam,
            ("dnls", None) => LaxKind::Dnls,
            ("dihedral-3d", None) => LaxKind::Dihedral3d,
            ("vector-nls", Some(n)) if n >= 1 => LaxKind::VectorNls { n },
            ("vector-affine", Some(n)) if n >= 1 => LaxKind::VectorAffine { n },
            _ => return Err(unknown()),
        };
        Ok(kind)
    }

    /// Number of point scalars consumed.
    pub fn arity(&self) -> usize {
        match self {
            LaxKind::Adler => 1,
            LaxKind::Nls | LaxKind::Dnls => 2,
            LaxKind::Nls3d | LaxKind::Dnls3d | LaxKind::Dnls3dReparam | LaxKind::Dihedral3d => 3,
            LaxKind::VectorNls { n } | LaxKind::VectorAffine { n } => 2 * n,
        }
    }

    /// L(point; param, λ). Parameter-free builders ignore `param`.
    pub fn build(&self, point: &[Rational], param: &Rational) -> Result<LaurentMatrix> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                builder: self.name(),
                expected: self.arity(),
                got: point.len(),
            });
        }
        let k = |c: Rational| LaurentPoly::constant(c);
        let m = |c: Rational, e: i32| LaurentPoly::monomial(c, e);
        let one = || LaurentPoly::one();
        let zero = LaurentPoly::zero;
        let sum = |ps: &[LaurentPoly]| ps.iter().fold(zero(), |acc, p| &acc + p);
        let rows = match self {
            LaxKind::Adler => {
                let x = &point[0];
                vec![
                    vec![k(x.clone()), one()],
                    vec![
                        sum(&[k(x * x + param), m(Rational::from(-1), 1)]),
                        k(x.clone()),
                    ],
                ]
            }
            LaxKind::Nls => {
                let (x1, x2) = (&point[0], &point[1]);
                vec![
                    vec![
                        sum(&[m(Rational::one(), 1), k(param + &(x1 * x2))]),
                        k(x1.clone()),
                    ],
                    vec![k(x2.clone()), one()],
                ]
            }
            LaxKind::Nls3d => {
                let (x1, x2, big_x) = (&point[0], &point[1], &point[2]);
                vec![
                    vec![
                        sum(&[m(Rational::one(), 1), k(big_x.clone())]),
                        k(x1.clone()),
                    ],
                    vec![k(x2.clone()), one()],
                ]
            }
            LaxKind::Dnls3d => {
                let (x1, x2, big_x) = (&point[0], &point[1], &point[2]);
                vec![
                    vec![sum(&[m(big_x.clone(), 2), one()]), m(x1 * big_x, 1)],
                    vec![m(x2 * big_x, 1), one()],
                ]
            }
            LaxKind::Dnls3dReparam => {
                let (x1, x2, big_x) = (&point[0], &point[1], &point[2]);
                vec![
                    vec![sum(&[m(big_x.clone(), 2), one()]), m(x1.clone(), 1)],
                    vec![m(x2.clone(), 1), one()],
                ]
            }
            LaxKind::Dnls => {
                let (x1, x2) = (&point[0], &point[1]);
                vec![
                    vec![sum(&[m(param + &(x1 * x2), 2), one()]), m(x1.clone(), 1)],
                    vec![m(x2.clone(), 1), one()],
                ]
            }
            LaxKind::Dihedral3d => {
                let (x1, x2, big_x) = (&point[0], &point[1], &point[2]);
                let diag = k(&(x1 * x2) * big_x + param);
                vec![
                    vec![
                        sum(&[m(big_x.clone(), 2), diag.clone()]),
                        sum(&[m(x1 * big_x, 1), m(x2 * big_x, -1)]),
                    ],
                    vec![
                        sum(&[m(x2 * big_x, 1), m(x1 * big_x, -1)]),
                        sum(&[m(big_x.clone(), -2), diag]),
                    ],
                ]
            }
            LaxKind::VectorNls { n } => {
                let corner = sum(&[m(Rational::one(), 1), k(param + &block_dot(point, *n))]);
                block_rows(point, *n, corner, 0)
            }
            LaxKind::VectorAffine { n } => {
                let corner = sum(&[m(param + &block_dot(point, *n), 2), one()]);
                block_rows(point, *n, corner, 1)
            }
        };
        LaurentMatrix::from_rows(rows)
    }
}

fn block_dot(point: &[Rational], n: usize) -> Rational {
    point[..n].iter().zip(&point[n..]).map(|(p, q)| p * q).sum()
}

/// `[[corner, λ^e <w1|], [λ^e |w2>, I]]`
fn block_rows(point: &[Rational], n: usize, corner: LaurentPoly, e: i32) -> Vec<Vec<LaurentPoly>> {
    let mut rows = vec![vec![LaurentPoly::zero(); n + 1]; n + 1];
    rows[0][0] = corner;
    for i in 0..n {
        rows[0][i + 1] = LaurentPoly::monomial(point[i].clone(), e);
        rows[i + 1][0] = LaurentPoly::monomial(point[n + i].clone(), e);
        rows[i + 1][i + 1] = LaurentPoly::one();
    }
    rows
}

/// Builds a Lax matrix by builder name.
pub fn build_lax(name: &str, point: &[Rational], param: &Rational) -> Result<LaurentMatrix> {
    LaxKind::from_name(name)?.build(point, param)
}

fn params_of(state: &PairState<Rational>) -> (Rational, Rational) {
    state
        .params
        .clone()
        .unwrap_or_else(|| (Rational::zero(), Rational::zero()))
}

/// `L(y;b) L(x;a)`
pub fn monodromy(lax: LaxKind, state: &PairState<Rational>) -> Result<LaurentMatrix> {
    let (p, q) = state.points();
    let (a, b) = params_of(state);
    lax.build(&q, &b)?.mul(&lax.build(&p, &a)?)
}

/// `L(u;a) L(v;b)` for the image `(u, v)` of `state`.
fn image_product(lax: LaxKind, image: &PairState<Rational>) -> Result<LaurentMatrix> {
    let (u, v) = image.points();
    let (a, b) = params_of(image);
    lax.build(&u, &a)?.mul(&lax.build(&v, &b)?)
}

/// L(u;a)L(v;b) = L(y;b)L(x;a) as an exact Laurent-matrix identity.
pub fn check_refactorisation(
    map: &MapDescriptor,
    lax: LaxKind,
    state: &PairState<Rational>,
) -> Result<bool> {
    let image = map.evaluate(state)?;
    Ok(image_product(lax, &image)? == monodromy(lax, state)?)
}

/// det L(u;a) det L(v;b) = det L(y;b) det L(x;a), computed from determinants
/// of the factors rather than of the products.
pub fn check_determinant(
    map: &MapDescriptor,
    lax: LaxKind,
    state: &PairState<Rational>,
) -> Result<bool> {
    let image = map.evaluate(state)?;
    let side = |s: &PairState<Rational>, swap: bool| -> Result<LaurentPoly> {
        let (p, q) = s.points();
        let (a, b) = params_of(s);
        let (l, r) = if swap {
            (lax.build(&q, &b)?, lax.build(&p, &a)?)
        } else {
            (lax.build(&p, &a)?, lax.build(&q, &b)?)
        };
        Ok(&l.det() * &r.det())
    };
    Ok(side(&image, false)? == side(state, true)?)
}

/// Coefficients of Tr(L(y;b)L(x;a)) by ascending λ-power.
pub fn extract_trace_invariants(
    lax: LaxKind,
    state: &PairState<Rational>,
) -> Result<Vec<(i32, Rational)>> {
    Ok(monodromy(lax, state)?
        .trace()
        .terms()
        .map(|(e, c)| (e, c.clone()))
        .collect())
}

/// The trace coefficients at `state` and at its image agree term by term.
pub fn check_trace_preservation(
    map: &MapDescriptor,
    lax: LaxKind,
    state: &PairState<Rational>,
) -> Result<bool> {
    let image = map.evaluate(state)?;
    Ok(extract_trace_invariants(lax, state)? == extract_trace_invariants(lax, &image)?)
}

/// Every declared trace coefficient equals its invariant plus the declared
/// constant offset at `state`.
pub fn check_trace_matches(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let Some(lax) = map.lax else {
        return Ok(true);
    };
    let trace = monodromy(lax, state)?.trace();
    let point = state.flatten();
    let params = state.param_vec();
    for m in &map.trace_matches {
        let inv = map.invariant(&m.invariant)?.expr.eval(&point, &params)?;
        let offset = m.offset.eval(&point, &params)?;
        if trace.coeff(m.power) != inv + offset {
            return Ok(false);
        }
    }
    Ok(true)
}
