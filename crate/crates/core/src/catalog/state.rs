use serde::Serialize;

use crate::algebra::{Field, Rational};
use crate::error::{Error, Result};

/// A pair of points `(x, y)` in the domain of a YB map.
///
/// `aux` carries the dynamical coordinates `(X, Y)` of the 6-dimensional
/// maps; `params` carries `(a, b)` for parametric maps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux: Option<(T, T)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<(T, T)>,
}

impl<T: Field> PairState<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::SizeMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        Ok(PairState {
            x,
            y,
            aux: None,
            params: None,
        })
    }

    pub fn with_aux(mut self, big_x: T, big_y: T) -> Self {
        self.aux = Some((big_x, big_y));
        self
    }

    pub fn with_params(mut self, a: T, b: T) -> Self {
        self.params = Some((a, b));
        self
    }

    /// The two points with their aux coordinate appended, as the maps see them.
    pub fn points(&self) -> (Vec<T>, Vec<T>) {
        let mut p = self.x.clone();
        let mut q = self.y.clone();
        if let Some((big_x, big_y)) = &self.aux {
            p.push(big_x.clone());
            q.push(big_y.clone());
        }
        (p, q)
    }

    /// Inverse of [`PairState::points`]; `params` is carried over unchanged.
    pub fn from_points(p: Vec<T>, q: Vec<T>, has_aux: bool, params: Option<(T, T)>) -> Self {
        let (mut x, mut y) = (p, q);
        let aux = if has_aux {
            let big_x = x.pop().expect("aux point is non-empty");
            let big_y = y.pop().expect("aux point is non-empty");
            Some((big_x, big_y))
        } else {
            None
        };
        PairState { x, y, aux, params }
    }

    /// `[x.., X?, y.., Y?]`, the coordinate order used by invariants and
    /// Poisson matrices.
    pub fn flatten(&self) -> Vec<T> {
        let (mut p, q) = self.points();
        p.extend(q);
        p
    }

    /// `[a, b]`, or empty for non-parametric states.
    pub fn param_vec(&self) -> Vec<T> {
        match &self.params {
            Some((a, b)) => vec![a.clone(), b.clone()],
            None => Vec::new(),
        }
    }

    pub fn map_scalars<U: Field>(&self, f: impl Fn(&T) -> U) -> PairState<U> {
        PairState {
            x: self.x.iter().map(&f).collect(),
            y: self.y.iter().map(&f).collect(),
            aux: self.aux.as_ref().map(|(p, q)| (f(p), f(q))),
            params: self.params.as_ref().map(|(p, q)| (f(p), f(q))),
        }
    }
}

impl PairState<Rational> {
    pub fn to_f64(&self) -> PairState<f64> {
        self.map_scalars(|r| r.to_f64())
    }
}
