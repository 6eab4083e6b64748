use std::io::Write;

use serde::Serialize;

use crate::algebra::Field;
use crate::catalog::{GuardLog, MapDescriptor, PairState};
use crate::error::{Error, Result};

/// Guard magnitude below which an orbit is aborted.
pub const NEAR_SINGULAR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub step: usize,
    pub state: PairState<f64>,
    pub values: Vec<f64>,
    /// `|I(step) - I(0)|`, computed in the orbit's own arithmetic.
    pub drift: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub map: String,
    /// Monitored quantities: invariants, then Casimirs.
    pub names: Vec<String>,
    pub records: Vec<OrbitRecord>,
}

impl Orbit {
    /// Largest drift of the named quantity over the whole orbit.
    pub fn max_drift(&self, name: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.records.iter().fold(0.0f64, |m, r| m.max(r.drift[i])))
    }

    /// Largest coordinate magnitude seen (in double precision; may be inf
    /// for wide-float orbits).
    pub fn max_coordinate(&self) -> f64 {
        self.records
            .iter()
            .flat_map(|r| r.state.flatten())
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// CSV with columns `step, x.., X?, y.., Y?, I.., drift_I..`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let Some(first) = self.records.first() else {
            return w.flush().map_err(|e| Error::Io(e.to_string()));
        };
        let mut header = vec!["step".to_string()];
        header.extend(coord_names(&first.state));
        header.extend(self.names.iter().cloned());
        header.extend(self.names.iter().map(|n| format!("drift_{n}")));
        w.write_record(&header).map_err(io)?;
        for r in &self.records {
            let mut row = vec![r.step.to_string()];
            row.extend(r.state.flatten().iter().map(|v| format_float(*v)));
            row.extend(r.values.iter().map(|v| format_float(*v)));
            row.extend(r.drift.iter().map(|v| format_float(*v)));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

fn format_float(v: f64) -> String {
    // shortest round-trip representation, always with a '.' separator
    format!("{v:?}")
}

fn coord_names(s: &PairState<f64>) -> Vec<String> {
    let n = s.x.len();
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    if s.aux.is_some() {
        names.push("X".into());
    }
    names.extend((1..=n).map(|i| format!("y{i}")));
    if s.aux.is_some() {
        names.push("Y".into());
    }
    names
}

fn abs<T: Field>(v: T) -> f64 {
    v.approx().abs()
}

/// Iterates `Yⁿ(initial)` for `n = 0..=steps`, recording invariant and
/// Casimir values and their drift from step 0.
///
/// Aborts when a guard comes within [`NEAR_SINGULAR`] of zero or a coordinate
/// stops being finite, reporting the last completed step.
pub fn iterate_orbit<T: Field>(
    map: &MapDescriptor,
    initial: &PairState<T>,
    steps: usize,
) -> Result<Orbit> {
    iterate_orbit_with_threshold(map, initial, steps, NEAR_SINGULAR)
}

/// [`iterate_orbit`] with a caller-chosen near-singularity threshold.
pub fn iterate_orbit_with_threshold<T: Field>(
    map: &MapDescriptor,
    initial: &PairState<T>,
    steps: usize,
    threshold: f64,
) -> Result<Orbit> {
    let funcs: Vec<_> = map.invariants.iter().chain(&map.casimirs).collect();
    let names = funcs.iter().map(|f| f.name.clone()).collect();
    let params = initial.param_vec();
    let values_at = |s: &PairState<T>| -> Result<Vec<T>> {
        let flat = s.flatten();
        funcs.iter().map(|f| f.expr.eval(&flat, &params)).collect()
    };
    let start = values_at(initial)?;
    let mut records = Vec::with_capacity(steps + 1);
    let mut state = initial.clone();
    for step in 0..=steps {
        if step > 0 {
            let mut log = GuardLog::recording();
            state = map.evaluate_logged(&state, &mut log).map_err(|e| match e {
                Error::SingularLocus { guard } => Error::NearSingularAbort {
                    last_good_step: step - 1,
                    guard,
                },
                other => other,
            })?;
            if let Some((guard, mag)) = log.nearest {
                if mag < threshold {
                    return Err(Error::NearSingularAbort {
                        last_good_step: step - 1,
                        guard: guard.into(),
                    });
                }
            }
        }
        let values = values_at(&state)?;
        let drift: Vec<f64> = values
            .iter()
            .zip(&start)
            .map(|(v, s)| abs(v.clone() - s.clone()))
            .collect();
        if drift.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFinite {
                last_good_step: step.saturating_sub(1),
            });
        }
        records.push(OrbitRecord {
            step,
            state: state.map_scalars(|v| v.approx()),
            values: values.into_iter().map(|v| v.approx()).collect(),
            drift,
        });
    }
    Ok(Orbit {
        map: map.name.clone(),
        names,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::catalog::{MapDescriptor, MapKind};

    #[test]
    fn permutation_orbit_has_period_two() {
        let map = MapDescriptor::from_kind(MapKind::Permutation { point_len: 2 });
        let s = PairState::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        let orbit = iterate_orbit(&map, &s, 5).unwrap();
        assert_eq!(orbit.records.len(), 6);
        assert_eq!(orbit.records[2].state, s);
        assert_eq!(orbit.records[1].state.x, vec![3.0, 4.0]);
    }

    #[test]
    fn csv_header() {
        let map = crate::catalog::resolve("adler-yamilov").unwrap();
        let q = |n, d| Rational::new(n, d).unwrap();
        let s = PairState::new(vec![q(1, 3), q(1, 5)], vec![q(1, 7), q(1, 2)])
            .unwrap()
            .with_params(q(2, 1), q(1, 1));
        let orbit = iterate_orbit(&map, &s, 3).unwrap();
        assert_eq!(orbit.max_drift("I1"), Some(0.0));
        let mut buf = Vec::new();
        orbit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "step,x1,x2,y1,y2,I1,I2,drift_I1,drift_I2"
        );
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn aborts_near_guard() {
        let map = crate::catalog::resolve("adler").unwrap();
        let s = PairState::new(vec![1.0], vec![-1.0 + 1e-13])
            .unwrap()
            .with_params(2.0, 1.0);
        assert!(matches!(
            iterate_orbit(&map, &s, 3),
            Err(Error::NearSingularAbort {
                last_good_step: 0,
                ..
            })
        ));
    }
}
