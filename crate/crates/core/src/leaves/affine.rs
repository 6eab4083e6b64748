use serde::Serialize;

use crate::algebra::Rational;
use crate::catalog::{MapDescriptor, MapKind, PairState};
use crate::error::{Error, Result};

/// X = k + x1 x2: the point on the affine leaf `X - x1 x2 = k`.
pub fn lift_affine(x1: &Rational, x2: &Rational, k: &Rational) -> Rational {
    k + &(x1 * x2)
}

/// Which parameter labels the leaf of the image's first point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafPairing {
    /// U = a + u1 u2, V = b + v1 v2.
    Straight,
    /// U = b + u1 u2, V = a + v1 v2.
    Crossed,
}

/// The 6-dimensional map whose affine-leaf restriction is `kind`.
pub fn leaf_partner(kind: &MapKind) -> Option<MapKind> {
    match kind {
        MapKind::AdlerYamilov => Some(MapKind::Nls6),
        MapKind::Dnls4 => Some(MapKind::Dnls6Reparam),
        _ => None,
    }
}

/// Lifts a parametric 4D state onto the leaves X = a + x1 x2, Y = b + y1 y2.
pub fn lift_state(state: &PairState<Rational>) -> Result<PairState<Rational>> {
    let (a, b) = state.params.clone().ok_or_else(|| Error::InvalidState {
        map: "leaf lift".into(),
        reason: "parameters a, b are required".into(),
    })?;
    Ok(PairState {
        x: state.x.clone(),
        y: state.y.clone(),
        aux: Some((
            lift_affine(&state.x[0], &state.x[1], &a),
            lift_affine(&state.y[0], &state.y[1], &b),
        )),
        params: None,
    })
}

/// map6(lift(s)) = lift'(map4(s)) exactly, with lift' attaching parameters to
/// the image per `pairing`.
pub fn check_leaf_commutation(
    map4: &MapDescriptor,
    map6: &MapDescriptor,
    state: &PairState<Rational>,
    pairing: LeafPairing,
) -> Result<bool> {
    let (a, b) = state.params.clone().ok_or_else(|| Error::InvalidState {
        map: map4.name.clone(),
        reason: "parameters a, b are required".into(),
    })?;
    let upstairs = map6.evaluate(&lift_state(state)?)?;
    let down = map4.evaluate(state)?;
    let (ku, kv) = match pairing {
        LeafPairing::Straight => (a, b),
        LeafPairing::Crossed => (b, a),
    };
    let expected = PairState {
        aux: Some((
            lift_affine(&down.x[0], &down.x[1], &ku),
            lift_affine(&down.y[0], &down.y[1], &kv),
        )),
        params: None,
        ..down
    };
    Ok(upstairs == expected)
}
