use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Rational;
use crate::catalog::{MapDescriptor, PairState};
use crate::error::{Error, Result};

/// Rejections allowed per trial before giving up.
pub const MAX_ATTEMPTS: usize = 500;

/// Independent stream for trial `index`; depends on `(seed, index)` only.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `p/q` with `p ∈ [-9, 9]`, `q ∈ [1, 9]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=9);
    Rational::new(p, q).expect("positive denominator")
}

pub fn random_point(rng: &mut impl Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

/// Parameters drawn for one trial; `distinct` forces pairwise different values.
pub fn random_params(rng: &mut impl Rng, count: usize, distinct: bool) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let r = random_rational(rng);
        if !distinct || !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// One unconstrained draw of a state for `map` (guards not checked).
pub fn draw_state(map: &MapDescriptor, rng: &mut impl Rng, distinct: bool) -> PairState<Rational> {
    let len = map.kind.point_len();
    let p = random_point(rng, len);
    let q = random_point(rng, len);
    let params = map.kind.is_parametric().then(|| {
        let ps = random_params(rng, 2, distinct);
        (ps[0].clone(), ps[1].clone())
    });
    PairState::from_points(p, q, map.has_aux(), params)
}

/// Three points and, for parametric maps, three parameters `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleState {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub z: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<(Rational, Rational, Rational)>,
}

pub fn draw_triple(map: &MapDescriptor, rng: &mut impl Rng) -> TripleState {
    let len = map.kind.point_len();
    let x = random_point(rng, len);
    let y = random_point(rng, len);
    let z = random_point(rng, len);
    let params = map.kind.is_parametric().then(|| {
        let ps = random_params(rng, 3, false);
        (ps[0].clone(), ps[1].clone(), ps[2].clone())
    });
    TripleState { x, y, z, params }
}

/// A state of bounded height, deterministic in `(seed, index)`, off every
/// guard of the map.
pub fn sample_state(map: &MapDescriptor, seed: u64, index: u64) -> Result<PairState<Rational>> {
    let mut rng = trial_rng(seed, index);
    for _ in 0..MAX_ATTEMPTS {
        let s = draw_state(map, &mut rng, false);
        match map.evaluate(&s) {
            Ok(_) => return Ok(s),
            Err(e) if e.is_singular() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted {
        map: map.name.clone(),
        attempts: MAX_ATTEMPTS,
    })
}
