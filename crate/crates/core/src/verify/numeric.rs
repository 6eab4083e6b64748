//! Float checks for the implicitly defined maps and the quadratic leaves.

use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::leaves::{
    dihedral_leaf_coefficients, dnls_leaf_coefficients, first_integral_residuals,
    implicit_yb_residual, quadratic_residual, Branch, ImplicitMap,
};

use super::sampling::{trial_rng, MAX_ATTEMPTS};
use super::suite::{CheckReport, Status};

/// Default max-norm tolerance for YB residuals of the implicit maps.
pub const IMPLICIT_YB_TOLERANCE: f64 = 1e-9;

/// Relative residual allowed when a leaf root is substituted back.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Relative residual allowed for the dihedral first-integral radicals.
pub const RADICAL_TOLERANCE: f64 = 1e-10;

pub const IMPLICIT_NAMES: [&str; 2] = ["dnls4-implicit", "dihedral4-implicit"];

impl FromStr for ImplicitMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<ImplicitMap> {
        match s {
            "dnls4-implicit" => Ok(ImplicitMap::Dnls4),
            "dihedral4-implicit" => Ok(ImplicitMap::Dihedral4),
            _ => Err(Error::UnknownMap(s.into())),
        }
    }
}

/// Treats states off the real, non-singular domain as resamples.
fn off_domain(e: &Error) -> bool {
    e.is_singular() || matches!(e, Error::ComplexRoots { .. } | Error::DegenerateConstraint)
}

fn report(name: &str, check: &str, trials: usize, seed: u64) -> CheckReport {
    CheckReport {
        map: name.into(),
        name: check.into(),
        status: Status::Pass,
        trials,
        failures: 0,
        seed,
        counterexample: None,
        reason: None,
        detail: None,
    }
}

enum Sample {
    Measured {
        residual: f64,
        state: serde_json::Value,
        resamples: usize,
    },
    Exhausted,
}

/// YB residual over `trials` states on which every intermediate step stays on
/// the selected branch; inconsistent or singular draws are resampled.
pub fn run_implicit_yb(
    map: ImplicitMap,
    trials: usize,
    seed: u64,
    tolerance: f64,
    branch: Branch,
) -> Result<CheckReport> {
    let samples: Vec<Sample> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            for attempt in 0..MAX_ATTEMPTS {
                let (pts, params) = map.draw(&mut rng);
                match implicit_yb_residual(map, pts, params, (branch, branch)) {
                    Ok(Some(residual)) => {
                        return Ok(Sample::Measured {
                            residual,
                            state: json!({ "points": pts, "params": params }),
                            resamples: attempt,
                        })
                    }
                    Ok(None) => continue,
                    Err(e) if off_domain(&e) => continue,
                    Err(e) => return Err(e),
                }
            }
            Ok(Sample::Exhausted)
        })
        .collect::<Result<_>>()?;

    let mut r = report(map.name(), "yb-residual", trials, seed);
    let (mut worst, mut resampled, mut exhausted) = (0.0f64, 0usize, 0usize);
    for s in &samples {
        match s {
            Sample::Measured {
                residual,
                state,
                resamples,
            } => {
                worst = worst.max(*residual);
                resampled += resamples;
                if residual.is_nan() || *residual > tolerance {
                    r.failures += 1;
                    r.counterexample
                        .get_or_insert_with(|| json!({ "state": state, "residual": residual }));
                }
            }
            Sample::Exhausted => {
                exhausted += 1;
                r.failures += 1;
            }
        }
    }
    if exhausted > 0 {
        r.reason = Some(format!(
            "{exhausted} trials found no branch-consistent state in {MAX_ATTEMPTS} draws"
        ));
    }
    r.detail = Some(json!({
        "branch": branch,
        "tolerance": tolerance,
        "max_residual": worst,
        "resampled": resampled,
    }));
    if r.failures > 0 {
        r.status = Status::Fail;
    }
    Ok(r)
}

/// Substitutes every real root of the leaf quadratic back into it.
pub fn run_root_residuals(map: ImplicitMap, trials: usize, seed: u64) -> Result<CheckReport> {
    let coeffs = match map {
        ImplicitMap::Dnls4 => dnls_leaf_coefficients,
        ImplicitMap::Dihedral4 => dihedral_leaf_coefficients,
    };
    let worst: Vec<Option<(f64, [f64; 3])>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            for _ in 0..MAX_ATTEMPTS {
                let ([p, _, _], [k, _, _]) = map.draw(&mut rng);
                match map.solve_leaf(p[0], p[1], k) {
                    Ok(roots) => {
                        let (a, b, c) = coeffs(p[0], p[1], k);
                        let res = roots
                            .all()
                            .into_iter()
                            .map(|x| quadratic_residual(a, b, c, x))
                            .fold(0.0f64, f64::max);
                        return Some((res, [p[0], p[1], k]));
                    }
                    Err(_) => continue,
                }
            }
            None
        })
        .collect();
    let mut r = report(map.name(), "leaf-roots", trials, seed);
    let mut max = 0.0f64;
    for w in &worst {
        match w {
            Some((res, input)) => {
                max = max.max(*res);
                if res.is_nan() || *res > ROOT_TOLERANCE {
                    r.failures += 1;
                    r.counterexample
                        .get_or_insert_with(|| json!({ "x1_x2_k": input, "residual": res }));
                }
            }
            None => r.failures += 1,
        }
    }
    r.detail = Some(json!({ "tolerance": ROOT_TOLERANCE, "max_residual": max }));
    if r.failures > 0 {
        r.status = Status::Fail;
    }
    Ok(r)
}

/// First-integral residuals of the dihedral radicals at random `(x1, x2, k)`.
pub fn run_radical_residuals(trials: usize, seed: u64) -> CheckReport {
    let mut r = report("dihedral4-implicit", "radicals", trials, seed);
    let mut max = 0.0f64;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let x1 = rng.gen_range(-2.0..2.0);
        let x2 = rng.gen_range(-2.0..2.0);
        let k = rng.gen_range(-4.0..4.0);
        let (p1, p2) = first_integral_residuals(x1, x2, k);
        let worst = p1.max(p2);
        max = max.max(worst);
        if worst.is_nan() || worst > RADICAL_TOLERANCE {
            r.failures += 1;
            r.counterexample
                .get_or_insert_with(|| json!({ "x1_x2_k": [x1, x2, k], "residual": worst }));
        }
    }
    r.detail = Some(json!({ "tolerance": RADICAL_TOLERANCE, "max_residual": max }));
    if r.failures > 0 {
        r.status = Status::Fail;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_maps_pass_on_consistent_branch() {
        for map in [ImplicitMap::Dnls4, ImplicitMap::Dihedral4] {
            let r = run_implicit_yb(map, 50, 7, IMPLICIT_YB_TOLERANCE, Branch::Plus).unwrap();
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn roots_and_radicals() {
        for map in [ImplicitMap::Dnls4, ImplicitMap::Dihedral4] {
            assert_eq!(
                run_root_residuals(map, 100, 3).unwrap().status,
                Status::Pass
            );
        }
        assert_eq!(run_radical_residuals(100, 3).status, Status::Pass);
    }

    #[test]
    fn names_round_trip() {
        for n in IMPLICIT_NAMES {
            assert_eq!(n.parse::<ImplicitMap>().unwrap().name(), n);
        }
    }
}
