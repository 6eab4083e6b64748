use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::Rational;
use crate::catalog::{MapDescriptor, MapKind, PairState, Registry};
use crate::error::{Error, Result};
use crate::lax;
use crate::leaves::{check_leaf_commutation, leaf_partner, LeafPairing};

use super::checks::*;
use super::sampling::{draw_state, draw_triple, random_rational, trial_rng, MAX_ATTEMPTS};

/// Relative tolerance for the finite-difference Jacobian comparison.
pub const JACOBIAN_TOLERANCE: f64 = 1e-6;

/// Trials used by the Jacobian comparison regardless of the requested count.
pub const JACOBIAN_TRIALS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Yb,
    Lax,
    Determinant,
    Trace,
    TraceMatch,
    Reversible,
    Involutivity,
    Invariants,
    FixedComponents,
    Poisson,
    Involution,
    Casimirs,
    Rank,
    Jacobian,
    Leaf,
    Scalar,
    Linearity,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Yb,
        Check::Lax,
        Check::Determinant,
        Check::Trace,
        Check::TraceMatch,
        Check::Reversible,
        Check::Involutivity,
        Check::Invariants,
        Check::FixedComponents,
        Check::Poisson,
        Check::Involution,
        Check::Casimirs,
        Check::Rank,
        Check::Jacobian,
        Check::Leaf,
        Check::Scalar,
        Check::Linearity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Yb => "yb",
            Check::Lax => "lax",
            Check::Determinant => "determinant",
            Check::Trace => "trace",
            Check::TraceMatch => "trace-match",
            Check::Reversible => "reversible",
            Check::Involutivity => "involutivity",
            Check::Invariants => "invariants",
            Check::FixedComponents => "fixed-components",
            Check::Poisson => "poisson",
            Check::Involution => "involution",
            Check::Casimirs => "casimirs",
            Check::Rank => "rank",
            Check::Jacobian => "jacobian",
            Check::Leaf => "leaf",
            Check::Scalar => "scalar",
            Check::Linearity => "linearity",
        }
    }

    /// `None` when the check applies to `map`, otherwise the reason it is
    /// skipped.
    pub fn skip_reason(&self, map: &MapDescriptor) -> Option<&'static str> {
        let kind = base_kind(&map.kind);
        match self {
            Check::Lax | Check::Determinant | Check::Trace if map.lax.is_none() => {
                Some("no Lax matrix declared")
            }
            Check::TraceMatch if map.trace_matches.is_empty() => {
                Some("no trace coefficients tied to invariants")
            }
            Check::Invariants if map.invariants.is_empty() && map.casimirs.is_empty() => {
                Some("no invariants declared")
            }
            Check::Poisson | Check::Involution | Check::Rank if map.poisson.is_none() => {
                Some("no Poisson structure declared")
            }
            Check::Casimirs if map.poisson.is_none() || map.casimirs.is_empty() => {
                Some("no Casimir functions declared")
            }
            Check::FixedComponents
                if !matches!(
                    kind,
                    MapKind::Nls6 | MapKind::Dnls6Orig | MapKind::Dihedral6 | MapKind::AdlerYamilov
                ) =>
            {
                Some("map does not fix u2 and v1")
            }
            Check::Leaf if leaf_partner(kind).is_none() => {
                Some("no 6-dimensional map restricts to this map on affine leaves")
            }
            Check::Scalar if scalar_counterpart(kind).is_none() => Some("not a vector map"),
            Check::Linearity if *kind != MapKind::DihedralLinear => Some("map is not linear"),
            _ => None,
        }
    }
}

fn base_kind(kind: &MapKind) -> &MapKind {
    match kind {
        MapKind::Mutated(inner) => base_kind(inner),
        k => k,
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.into()))
    }
}

/// Parses a comma-separated check list.
pub fn parse_checks(list: &str) -> Result<Vec<Check>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Check::from_str)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub map: String,
    pub name: String,
    pub status: Status,
    pub trials: usize,
    pub failures: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Check-specific measurements (witness state, measured rank, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckReport {
    fn skipped(map: &MapDescriptor, check: Check, seed: u64, reason: &str) -> Self {
        CheckReport {
            map: map.name.clone(),
            name: check.name().into(),
            status: Status::Skipped,
            trials: 0,
            failures: 0,
            seed,
            counterexample: None,
            reason: Some(reason.into()),
            detail: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Outcome of one trial.
enum Trial {
    Pass,
    Fail(Value),
    /// Measurement carried along (e.g. a rank); pass/fail decided later.
    Measure(bool, Value, Value),
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Runs `attempt` with fresh draws until it is off the singular locus.
fn guarded<R, F>(map: &MapDescriptor, seed: u64, index: usize, mut attempt: F) -> Result<R>
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> Result<R>,
{
    let mut rng = trial_rng(seed, index as u64);
    for _ in 0..MAX_ATTEMPTS {
        match attempt(&mut rng) {
            Err(e) if e.is_singular() => continue,
            other => return other,
        }
    }
    Err(Error::SamplingExhausted {
        map: map.name.clone(),
        attempts: MAX_ATTEMPTS,
    })
}

fn state_trial(
    map: &MapDescriptor,
    seed: u64,
    index: usize,
    distinct: bool,
    check: impl Fn(&PairState<Rational>) -> Result<bool>,
) -> Result<Trial> {
    guarded(map, seed, index, |rng| {
        let s = draw_state(map, rng, distinct);
        Ok(if check(&s)? {
            Trial::Pass
        } else {
            Trial::Fail(json(&s))
        })
    })
}

fn one_trial(map: &MapDescriptor, check: Check, seed: u64, index: usize) -> Result<Trial> {
    let lax_kind = map.lax;
    match check {
        Check::Yb => guarded(map, seed, index, |rng| {
            let t = draw_triple(map, rng);
            Ok(if check_yb_equation(map, &t)? {
                Trial::Pass
            } else {
                Trial::Fail(json(&t))
            })
        }),
        Check::Lax => state_trial(map, seed, index, false, |s| {
            lax::check_refactorisation(map, lax_kind.expect("applicable"), s)
        }),
        Check::Determinant => state_trial(map, seed, index, false, |s| {
            lax::check_determinant(map, lax_kind.expect("applicable"), s)
        }),
        Check::Trace => state_trial(map, seed, index, false, |s| {
            lax::check_trace_preservation(map, lax_kind.expect("applicable"), s)
        }),
        Check::TraceMatch => state_trial(map, seed, index, false, |s| {
            map.evaluate(s)?;
            lax::check_trace_matches(map, s)
        }),
        Check::Reversible => state_trial(map, seed, index, false, |s| check_reversibility(map, s)),
        Check::Involutivity => guarded(map, seed, index, |rng| {
            let s = draw_state(map, rng, true);
            let inv = is_involutive_at(map, &s)?;
            Ok(Trial::Measure(inv, json(&s), Value::Bool(inv)))
        }),
        Check::Invariants => state_trial(map, seed, index, false, |s| check_invariants(map, s)),
        Check::FixedComponents => {
            state_trial(map, seed, index, false, |s| check_fixed_components(map, s))
        }
        Check::Poisson => state_trial(map, seed, index, false, |s| {
            check_poisson_invariance(map, s)
        }),
        Check::Involution => state_trial(map, seed, index, false, |s| {
            map.evaluate(s)?;
            check_involution_of_invariants(map, s)
        }),
        Check::Casimirs => state_trial(map, seed, index, false, |s| check_casimirs(map, s)),
        Check::Rank => guarded(map, seed, index, |rng| {
            let s = draw_state(map, rng, false);
            map.evaluate(&s)?;
            let rank = check_rank(map, &s)?;
            let declared = map.poisson.as_ref().expect("applicable").rank;
            Ok(Trial::Measure(rank == declared, json(&s), json(&rank)))
        }),
        Check::Jacobian => guarded(map, seed, index, |rng| {
            let s = draw_state(map, rng, false);
            let gap = jacobian_fd_gap(map, &s)?;
            Ok(Trial::Measure(
                gap <= JACOBIAN_TOLERANCE,
                json(&s),
                json(&gap),
            ))
        }),
        Check::Leaf => {
            let partner =
                MapDescriptor::from_kind(leaf_partner(base_kind(&map.kind)).expect("applicable"));
            state_trial(map, seed, index, false, |s| {
                check_leaf_commutation(map, &partner, s, LeafPairing::Straight)
            })
        }
        Check::Scalar => {
            let (vector, scalar) = scalar_counterpart(base_kind(&map.kind)).expect("applicable");
            let mut vector = MapDescriptor::from_kind(vector);
            if matches!(map.kind, MapKind::Mutated(_)) {
                vector = vector.mutated();
            }
            let scalar = MapDescriptor::from_kind(scalar);
            state_trial(&scalar, seed, index, false, |s| {
                check_agreement(&vector, &scalar, s)
            })
        }
        Check::Linearity => guarded(map, seed, index, |rng| {
            let s = draw_state(map, rng, false);
            let t = draw_state(map, rng, false);
            let (alpha, beta) = (random_rational(rng), random_rational(rng));
            Ok(if check_linearity(map, &s, &t, &alpha, &beta)? {
                Trial::Pass
            } else {
                Trial::Fail(json(&(s, t, alpha, beta)))
            })
        }),
    }
}

/// Runs one check over `trials` seeded trials (in parallel, merged by index).
pub fn run_check(
    map: &MapDescriptor,
    check: Check,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if let Some(reason) = check.skip_reason(map) {
        return Ok(CheckReport::skipped(map, check, seed, reason));
    }
    let trials = if check == Check::Jacobian {
        trials.min(JACOBIAN_TRIALS)
    } else {
        trials
    };
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| one_trial(map, check, seed, i))
        .collect::<Result<_>>()?;

    let mut report = CheckReport {
        map: map.name.clone(),
        name: check.name().into(),
        status: Status::Pass,
        trials,
        failures: 0,
        seed,
        counterexample: None,
        reason: None,
        detail: None,
    };

    if check == Check::Involutivity {
        // a witness is a state with Y(Y(s)) != s
        let witness = outcomes
            .iter()
            .position(|t| matches!(t, Trial::Measure(false, ..)));
        let witnesses = outcomes
            .iter()
            .filter(|t| matches!(t, Trial::Measure(false, ..)))
            .count();
        let state_of = |i: usize| match &outcomes[i] {
            Trial::Measure(_, s, _) => s.clone(),
            _ => Value::Null,
        };
        if map.involutive {
            report.failures = witnesses;
            report.counterexample = witness.map(state_of);
        } else {
            match witness {
                Some(i) => {
                    report.detail = Some(serde_json::json!({
                        "witness": state_of(i),
                        "found_at_trial": i,
                    }));
                }
                None => {
                    report.failures = trials;
                    report.counterexample = trials.checked_sub(1).map(state_of);
                    report.reason = Some("no state with Y(Y(s)) != s found".into());
                }
            }
        }
    } else {
        let mut measures = Vec::new();
        for t in &outcomes {
            match t {
                Trial::Pass => {}
                Trial::Fail(s) => {
                    report.failures += 1;
                    report.counterexample.get_or_insert_with(|| s.clone());
                }
                Trial::Measure(ok, s, m) => {
                    measures.push(m.clone());
                    if !ok {
                        report.failures += 1;
                        report.counterexample.get_or_insert_with(
                            || serde_json::json!({ "state": s, "measured": m }),
                        );
                    }
                }
            }
        }
        if check == Check::Rank {
            measures.dedup();
            report.detail = Some(serde_json::json!({
                "declared": map.poisson.as_ref().map(|p| p.rank),
                "measured": measures,
            }));
        }
        if check == Check::Jacobian {
            let worst = measures
                .iter()
                .filter_map(Value::as_f64)
                .fold(0.0f64, f64::max);
            report.detail = Some(serde_json::json!({ "max_relative_gap": worst }));
        }
    }
    if report.failures > 0 {
        report.status = Status::Fail;
    }
    Ok(report)
}

/// One report per requested check for the named map.
pub fn run_suite(
    registry: &Registry,
    map: &str,
    checks: &[Check],
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let desc = registry.get(map)?;
    checks
        .iter()
        .map(|&c| run_check(&desc, c, trials, seed))
        .collect()
}

/// Runs every applicable check for a descriptor not necessarily in a
/// registry (e.g. a mutated map).
pub fn run_all(map: &MapDescriptor, trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    Check::ALL
        .iter()
        .map(|&c| run_check(map, c, trials, seed))
        .collect()
}
