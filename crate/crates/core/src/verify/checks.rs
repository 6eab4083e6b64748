//! Single-state checks. Each returns `Ok(true)` when the property holds;
//! singular-locus errors propagate so the runner can resample.

use crate::algebra::{dual_eval_with_params, exact_rank, Dual, Field, Rational};
use crate::catalog::{GuardLog, MapDescriptor, MapKind, PairState};
use crate::error::{Error, Result};

use super::sampling::TripleState;

type Points = (Vec<Rational>, Vec<Rational>);

fn apply(
    map: &MapDescriptor,
    p: &[Rational],
    q: &[Rational],
    a: &Rational,
    b: &Rational,
) -> Result<Points> {
    map.kind.apply(p, q, a, b, &mut GuardLog::silent())
}

/// Y¹²_{a,b} ∘ Y¹³_{a,c} ∘ Y²³_{b,c} = Y²³_{b,c} ∘ Y¹³_{a,c} ∘ Y¹²_{a,b}
/// at the triple.
pub fn check_yb_equation(map: &MapDescriptor, t: &TripleState) -> Result<bool> {
    let (a, b, c) = t
        .params
        .clone()
        .unwrap_or_else(|| (Rational::zero(), Rational::zero(), Rational::zero()));

    let (y1, z1) = apply(map, &t.y, &t.z, &b, &c)?;
    let (x1, z2) = apply(map, &t.x, &z1, &a, &c)?;
    let (x2, y2) = apply(map, &x1, &y1, &a, &b)?;
    let left = (x2, y2, z2);

    let (x1, y1) = apply(map, &t.x, &t.y, &a, &b)?;
    let (x2, z1) = apply(map, &x1, &t.z, &a, &c)?;
    let (y2, z2) = apply(map, &y1, &z1, &b, &c)?;
    Ok(left == (x2, y2, z2))
}

/// With (u,v) = Y_{a,b}(x,y) and (s,t) = Y_{b,a}(v,u): (t,s) = (x,y).
pub fn check_reversibility(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let (x, y) = state.points();
    let (a, b) = params_or_zero(state);
    let (u, v) = apply(map, &x, &y, &a, &b)?;
    let (s, t) = apply(map, &v, &u, &b, &a)?;
    Ok(t == x && s == y)
}

/// Y(Y(s)) = s at this state.
pub fn is_involutive_at(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let once = map.evaluate(state)?;
    Ok(map.evaluate(&once)? == *state)
}

/// True iff some state has Y(Y(s)) ≠ s; states on the singular locus are
/// skipped.
pub fn check_involutivity_witness(
    map: &MapDescriptor,
    states: &[PairState<Rational>],
) -> Result<bool> {
    for s in states {
        match is_involutive_at(map, s) {
            Ok(false) => return Ok(true),
            Ok(true) => {}
            Err(e) if e.is_singular() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(false)
}

/// I(Y(s)) = I(s) for every declared invariant and Casimir.
pub fn check_invariants(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let image = map.evaluate(state)?;
    let (before, after) = (state.flatten(), image.flatten());
    let params = state.param_vec();
    for f in map.invariants.iter().chain(&map.casimirs) {
        if f.expr.eval(&before, &params)? != f.expr.eval(&after, &params)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn params_or_zero(state: &PairState<Rational>) -> (Rational, Rational) {
    state
        .params
        .clone()
        .unwrap_or_else(|| (Rational::zero(), Rational::zero()))
}

/// Exact Jacobian of the map over the flattened state, parameters fixed.
pub fn jacobian(map: &MapDescriptor, state: &PairState<Rational>) -> Result<Vec<Vec<Rational>>> {
    let point = state.flatten();
    let count = point.len();
    let vars = Dual::seed(&point);
    let (p, q) = vars.split_at(count / 2);
    let (a, b) = params_or_zero(state);
    let (u, v) = map.kind.apply(
        p,
        q,
        &Dual::constant(a),
        &Dual::constant(b),
        &mut GuardLog::silent(),
    )?;
    Ok(u.iter().chain(&v).map(|d| d.gradient(count)).collect())
}

fn mat_mul(l: &[Vec<Rational>], r: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    l.iter()
        .map(|row| {
            (0..r[0].len())
                .map(|j| row.iter().zip(r).map(|(x, rr)| x * &rr[j]).sum())
                .collect()
        })
        .collect()
}

fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn no_poisson(map: &MapDescriptor) -> Error {
    Error::InvalidState {
        map: map.name.clone(),
        reason: "no Poisson structure declared".into(),
    }
}

/// D J(s) Dᵀ = J(Y(s)).
pub fn check_poisson_invariance(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let poisson = map.poisson.as_ref().ok_or_else(|| no_poisson(map))?;
    let image = map.evaluate(state)?;
    let params = state.param_vec();
    let d = jacobian(map, state)?;
    let j = poisson.eval(&state.flatten(), &params)?;
    let pushed = mat_mul(&mat_mul(&d, &j), &transpose(&d));
    Ok(pushed == poisson.eval(&image.flatten(), &params)?)
}

/// ∇fᵀ J ∇g at the state.
fn bracket(
    j: &[Vec<Rational>],
    f: &crate::algebra::Expr,
    g: &crate::algebra::Expr,
    point: &[Rational],
    params: &[Rational],
) -> Result<Rational> {
    let (_, df) = dual_eval_with_params(f, point, params)?;
    let (_, dg) = dual_eval_with_params(g, point, params)?;
    Ok(j.iter()
        .zip(&df)
        .map(|(row, dfi)| {
            dfi * &row
                .iter()
                .zip(&dg)
                .map(|(jij, dgj)| jij * dgj)
                .sum::<Rational>()
        })
        .sum())
}

/// {f, g} = 0 for every declared commuting pair.
pub fn check_involution_of_invariants(
    map: &MapDescriptor,
    state: &PairState<Rational>,
) -> Result<bool> {
    let poisson = map.poisson.as_ref().ok_or_else(|| no_poisson(map))?;
    let point = state.flatten();
    let params = state.param_vec();
    let j = poisson.eval(&point, &params)?;
    for (f, g) in &poisson.commuting {
        if !bracket(&j, &f.expr, &g.expr, &point, &params)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// J ∇C = 0 and C(Y(s)) = C(s) for every declared Casimir.
pub fn check_casimirs(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let poisson = map.poisson.as_ref().ok_or_else(|| no_poisson(map))?;
    let point = state.flatten();
    let params = state.param_vec();
    let j = poisson.eval(&point, &params)?;
    let image = map.evaluate(state)?.flatten();
    for c in &map.casimirs {
        let (value, grad) = dual_eval_with_params(&c.expr, &point, &params)?;
        let kernel = j.iter().all(|row| {
            row.iter()
                .zip(&grad)
                .map(|(x, g)| x * g)
                .sum::<Rational>()
                .is_zero()
        });
        if !kernel || c.expr.eval(&image, &params)? != value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact rank of J at the state.
pub fn check_rank(map: &MapDescriptor, state: &PairState<Rational>) -> Result<usize> {
    let poisson = map.poisson.as_ref().ok_or_else(|| no_poisson(map))?;
    Ok(exact_rank(
        &poisson.eval(&state.flatten(), &state.param_vec())?,
    ))
}

/// Largest relative gap between the exact Jacobian and central finite
/// differences in double precision.
pub fn jacobian_fd_gap(map: &MapDescriptor, state: &PairState<Rational>) -> Result<f64> {
    let exact = jacobian(map, state)?;
    let point: Vec<f64> = state.flatten().iter().map(Rational::to_f64).collect();
    let (a, b) = params_or_zero(state);
    let (a, b) = (a.to_f64(), b.to_f64());
    let n = point.len();
    let eval = |pt: &[f64]| -> Result<Vec<f64>> {
        let (p, q) = pt.split_at(n / 2);
        let (u, v) = map.kind.apply(p, q, &a, &b, &mut GuardLog::silent())?;
        Ok(u.into_iter().chain(v).collect())
    };
    let mut worst = 0.0f64;
    for col in 0..n {
        let h = 1e-5 * point[col].abs().max(1.0);
        let mut plus = point.clone();
        let mut minus = point.clone();
        plus[col] += h;
        minus[col] -= h;
        // Richardson step on top of the central difference
        let mut plus2 = point.clone();
        let mut minus2 = point.clone();
        plus2[col] += 2.0 * h;
        minus2[col] -= 2.0 * h;
        let (fp, fm) = (eval(&plus)?, eval(&minus)?);
        let (fp2, fm2) = (eval(&plus2)?, eval(&minus2)?);
        for row in 0..n {
            let d1 = (fp[row] - fm[row]) / (2.0 * h);
            let d2 = (fp2[row] - fm2[row]) / (4.0 * h);
            let fd = (4.0 * d1 - d2) / 3.0;
            let ex = exact[row][col].to_f64();
            worst = worst.max((fd - ex).abs() / ex.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// u2 = y2 and v1 = x1.
pub fn check_fixed_components(map: &MapDescriptor, state: &PairState<Rational>) -> Result<bool> {
    let image = map.evaluate(state)?;
    Ok(image.x[1] == state.y[1] && image.y[0] == state.x[0])
}

/// Y(αs + βt) = αY(s) + βY(t) for a linear map with shared parameters.
pub fn check_linearity(
    map: &MapDescriptor,
    s: &PairState<Rational>,
    t: &PairState<Rational>,
    alpha: &Rational,
    beta: &Rational,
) -> Result<bool> {
    let combo = |l: &[Rational], r: &[Rational]| -> Vec<Rational> {
        l.iter().zip(r).map(|(x, y)| alpha * x + beta * y).collect()
    };
    let mixed = PairState {
        x: combo(&s.x, &t.x),
        y: combo(&s.y, &t.y),
        aux: None,
        params: s.params.clone(),
    };
    let t = PairState {
        params: s.params.clone(),
        ..t.clone()
    };
    let (ys, yt) = (map.evaluate(s)?, map.evaluate(&t)?);
    let ym = map.evaluate(&mixed)?;
    Ok(ym.x == combo(&ys.x, &yt.x) && ym.y == combo(&ys.y, &yt.y))
}

/// The scalar map a vector map must reduce to at N = 1.
pub fn scalar_counterpart(kind: &MapKind) -> Option<(MapKind, MapKind)> {
    match kind {
        MapKind::VectorNls { sign, .. } => Some((
            MapKind::VectorNls { n: 1, sign: *sign },
            MapKind::AdlerYamilov,
        )),
        MapKind::VectorZ2 { .. } => Some((MapKind::VectorZ2 { n: 1 }, MapKind::Dnls4)),
        _ => None,
    }
}

/// Two maps agree exactly at the state (both must share its shape).
pub fn check_agreement<T: Field>(
    left: &MapDescriptor,
    right: &MapDescriptor,
    state: &PairState<T>,
) -> Result<bool> {
    Ok(left.evaluate(state)? == right.evaluate(state)?)
}
