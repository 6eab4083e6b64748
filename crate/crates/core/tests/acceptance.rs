//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use ybmap_core::algebra::{Field, Rational, WideFloat};
use ybmap_core::catalog::{resolve, MapDescriptor, MapKind, PairState, Registry};
use ybmap_core::leaves::{iterate_orbit, Branch, ImplicitMap, Orbit};
use ybmap_core::report::{resolve_leaf_pairings, resolve_sign_convention, VECTOR_DIMS};
use ybmap_core::verify::{
    run_check, run_implicit_yb, run_root_residuals, Check, CheckReport, Status,
    IMPLICIT_YB_TOLERANCE,
};
use ybmap_core::Result;

const SEED: u64 = 7;
const TRIALS: usize = 100;
const ORBIT_STEPS: usize = 10_000;
const EXACT_STEPS: usize = 100;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    summary: String,
    /// Extra lines printed under a failing criterion.
    notes: Vec<String>,
}

/// Catalog maps with vector maps expanded to every tested dimension.
fn catalog() -> Vec<MapDescriptor> {
    let mut maps = Vec::new();
    for m in Registry::standard().maps() {
        match m.kind {
            MapKind::VectorNls { .. } | MapKind::VectorZ2 { .. } => {
                let base = m.name.split(':').next().unwrap();
                for n in VECTOR_DIMS {
                    maps.push(resolve(&format!("{base}:{n}")).unwrap());
                }
            }
            _ => maps.push(m.clone()),
        }
    }
    maps
}

fn is_vector(m: &MapDescriptor) -> bool {
    matches!(m.kind, MapKind::VectorNls { .. } | MapKind::VectorZ2 { .. })
}

/// Runs `checks` on every map where they apply and collects failing reports.
fn sweep(
    maps: &[MapDescriptor],
    checks: &[Check],
    trials: usize,
) -> Result<(usize, Vec<CheckReport>)> {
    let mut ran = 0;
    let mut bad = Vec::new();
    for m in maps {
        for &c in checks {
            let r = run_check(m, c, trials, SEED)?;
            if r.status == Status::Skipped {
                continue;
            }
            ran += 1;
            if r.failures > 0 {
                bad.push(r);
            }
        }
    }
    Ok((ran, bad))
}

fn describe(r: &CheckReport) -> String {
    format!(
        "{} {}: {}/{} failed{}",
        r.map,
        r.name,
        r.failures,
        r.trials,
        r.counterexample
            .as_ref()
            .map(|c| format!(", e.g. {c}"))
            .unwrap_or_default()
    )
}

fn sweep_outcome(label: &str, maps: &[MapDescriptor], checks: &[Check]) -> Result<Outcome> {
    let (ran, bad) = sweep(maps, checks, TRIALS)?;
    Ok(Outcome {
        pass: bad.is_empty() && ran > 0,
        summary: format!(
            "{label}: {ran} map/check runs x {TRIALS} trials, {} with failures",
            bad.len()
        ),
        notes: bad.iter().map(describe).collect(),
    })
}

fn yb_equation() -> Result<Outcome> {
    let start = Instant::now();
    let maps = catalog();
    let (ran, bad) = sweep(&maps, &[Check::Yb], TRIALS)?;
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        pass: bad.is_empty() && ran == maps.len() && secs < 60.0,
        summary: format!(
            "YB equation: {ran} maps x {TRIALS} exact triples, {} failing, {secs:.1} s (limit 60 s)",
            bad.len()
        ),
        notes: bad.iter().map(describe).collect(),
    })
}

fn lax_refactorisation() -> Result<Outcome> {
    let maps: Vec<_> = catalog().into_iter().filter(|m| m.lax.is_some()).collect();
    sweep_outcome("Lax refactorisation", &maps, &[Check::Lax])
}

fn reversibility() -> Result<Outcome> {
    let maps: Vec<_> = catalog()
        .into_iter()
        .filter(|m| {
            is_vector(m)
                || matches!(
                    m.kind,
                    MapKind::AdlerYamilov | MapKind::Dnls4 | MapKind::DihedralLinear
                )
        })
        .collect();
    sweep_outcome("reversibility", &maps, &[Check::Reversible])
}

fn invariants() -> Result<Outcome> {
    sweep_outcome(
        "invariants and trace coefficients",
        &catalog(),
        &[Check::Invariants, Check::Trace, Check::TraceMatch],
    )
}

fn integrability() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut ranks = Vec::new();
    for (name, checks) in [
        (
            "adler-yamilov",
            vec![Check::Poisson, Check::Involution, Check::Rank],
        ),
        (
            "dnls4",
            vec![
                Check::Poisson,
                Check::Involution,
                Check::Rank,
                Check::Casimirs,
            ],
        ),
    ] {
        let map = resolve(name)?;
        for c in checks {
            let r = run_check(&map, c, TRIALS, SEED)?;
            if c == Check::Rank {
                let measured = r
                    .detail
                    .as_ref()
                    .map(|d| d["measured"].to_string())
                    .unwrap_or_default();
                ranks.push(format!("{name} rank {measured}"));
            }
            if r.status != Status::Pass {
                pass = false;
                notes.push(describe(&r));
            }
        }
    }
    Ok(Outcome {
        pass,
        summary: format!(
            "integrability: Poisson invariance, involution, Casimirs; {}",
            ranks.join(", ")
        ),
        notes,
    })
}

fn non_involutivity() -> Result<Outcome> {
    let mut found = Vec::new();
    let mut notes = Vec::new();
    for m in catalog().iter().filter(|m| !m.involutive) {
        let r = run_check(m, Check::Involutivity, 10, SEED)?;
        match r.detail.as_ref().and_then(|d| d["found_at_trial"].as_u64()) {
            Some(i) if r.status == Status::Pass => found.push(i),
            _ => notes.push(describe(&r)),
        }
    }
    Ok(Outcome {
        pass: notes.is_empty() && !found.is_empty(),
        summary: format!(
            "non-involutivity: witness within 10 trials for {} maps (latest at trial {})",
            found.len(),
            found.iter().max().copied().unwrap_or(0)
        ),
        notes,
    })
}

fn leaf_commutation() -> Result<Outcome> {
    let maps = [resolve("adler-yamilov")?, resolve("dnls4")?];
    let mut out = sweep_outcome("leaf commutation", &maps, &[Check::Leaf])?;
    let pairings = resolve_leaf_pairings(TRIALS, SEED)?;
    let labels: Vec<String> = pairings
        .iter()
        .map(|p| format!("{}->{} {:?}", p.map4, p.map6, p.selected))
        .collect();
    out.summary
        .push_str(&format!("; pairings {}", labels.join(", ")));
    Ok(out)
}

fn implicit_maps() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut parts = Vec::new();
    for map in [ImplicitMap::Dnls4, ImplicitMap::Dihedral4] {
        let yb = run_implicit_yb(map, TRIALS, SEED, IMPLICIT_YB_TOLERANCE, Branch::Plus)?;
        let roots = run_root_residuals(map, TRIALS, SEED)?;
        let max = |r: &CheckReport| {
            r.detail
                .as_ref()
                .map(|d| d["max_residual"].clone())
                .unwrap_or_default()
        };
        parts.push(format!(
            "{} YB max {} over {} states, root max {}",
            map.name(),
            max(&yb),
            yb.trials,
            max(&roots)
        ));
        for r in [yb, roots] {
            if r.status != Status::Pass {
                notes.push(describe(&r));
            }
        }
    }
    Ok(Outcome {
        pass: notes.is_empty(),
        summary: format!("implicit maps: {}", parts.join("; ")),
        notes,
    })
}

fn vector_scalar() -> Result<Outcome> {
    let maps = [resolve("vector-nls:1")?, resolve("vector-z2:1")?];
    let mut out = sweep_outcome("N=1 agreement with scalar maps", &maps, &[Check::Scalar])?;
    let conv = resolve_sign_convention(TRIALS, SEED)?;
    if conv.selected != Some(conv.shipped) {
        out.pass = false;
        out.notes.push(format!("sign convention: {conv:?}"));
    }
    out.summary.push_str(&format!(
        "; vector NLS convention selected by Lax check: {}",
        conv.selected.unwrap_or("none")
    ));
    Ok(out)
}

fn initial<T: Field>(map: &MapDescriptor) -> PairState<T> {
    let q = |s: &str| T::from_rational(&s.parse::<Rational>().unwrap());
    let s = PairState::new(vec![q("1/3"), q("1/5")], vec![q("1/7"), q("1/2")])
        .unwrap()
        .with_params(q("2"), q("1"));
    assert!(map.validate(&s).is_ok());
    s
}

fn max_drift(orbit: &Orbit, names: &[String]) -> f64 {
    names
        .iter()
        .map(|n| orbit.max_drift(n).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

fn orbit_stability() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut parts = Vec::new();
    for name in ["adler-yamilov", "dnls4"] {
        let map = resolve(name)?;
        let inv: Vec<String> = map.invariants.iter().map(|i| i.name.clone()).collect();
        let cas: Vec<String> = map.casimirs.iter().map(|i| i.name.clone()).collect();

        match iterate_orbit(&map, &initial::<WideFloat>(&map), ORBIT_STEPS) {
            Ok(orbit) => {
                let (di, dc) = (max_drift(&orbit, &inv), max_drift(&orbit, &cas));
                let casimirs = if cas.is_empty() {
                    "no Casimirs".to_string()
                } else {
                    format!("Casimir drift {dc:.1e}")
                };
                parts.push(format!("{name} invariant drift {di:.1e}, {casimirs}"));
                if !(di <= 1e-10 && dc <= 1e-12) {
                    notes.push(format!("{name}: drift {di:e} / {dc:e}"));
                }
            }
            Err(e) => notes.push(format!("{name} wide orbit: {e}")),
        }

        // double precision, for the record only
        match iterate_orbit(&map, &initial::<f64>(&map), ORBIT_STEPS) {
            Ok(orbit) => parts.push(format!("(f64 drift {:.1e})", max_drift(&orbit, &inv))),
            Err(e) => parts.push(format!("(f64: {e})")),
        }

        let names: Vec<String> = inv.iter().chain(&cas).cloned().collect();
        match iterate_orbit(&map, &initial::<Rational>(&map), EXACT_STEPS) {
            Ok(orbit) if max_drift(&orbit, &names) == 0.0 => {}
            Ok(orbit) => notes.push(format!("{name} exact drift {}", max_drift(&orbit, &names))),
            Err(e) => notes.push(format!("{name} exact orbit: {e}")),
        }
    }
    Ok(Outcome {
        pass: notes.is_empty(),
        summary: format!(
            "orbits: {ORBIT_STEPS} steps in 128-bit floats, {}; exact {EXACT_STEPS}-step drift zero",
            parts.join(" ")
        ),
        notes,
    })
}

fn mutation_sensitivity() -> Result<Outcome> {
    let groups: [(&str, Vec<MapDescriptor>, Vec<Check>); 4] = [
        ("yb", catalog(), vec![Check::Yb]),
        (
            "lax",
            catalog().into_iter().filter(|m| m.lax.is_some()).collect(),
            vec![Check::Lax],
        ),
        (
            "reversible",
            catalog()
                .into_iter()
                .filter(|m| {
                    is_vector(m)
                        || matches!(
                            m.kind,
                            MapKind::AdlerYamilov | MapKind::Dnls4 | MapKind::DihedralLinear
                        )
                })
                .collect(),
            vec![Check::Reversible],
        ),
        ("invariants", catalog(), vec![Check::Invariants]),
    ];
    let mut notes = Vec::new();
    let mut caught = 0;
    for (label, maps, checks) in groups {
        for m in maps {
            let mutated = m.mutated();
            for &c in &checks {
                let r = run_check(&mutated, c, TRIALS, SEED)?;
                if r.status == Status::Skipped {
                    continue;
                }
                if r.failures > 0 {
                    caught += 1;
                } else {
                    notes.push(format!("{label}: mutation of {} not detected", m.name));
                }
            }
        }
    }
    Ok(Outcome {
        pass: notes.is_empty() && caught > 0,
        summary: format!("mutation sensitivity: {caught} perturbed map/check runs all caught"),
        notes,
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("YB equation", yb_equation),
        ("Lax refactorisation", lax_refactorisation),
        ("reversibility", reversibility),
        ("invariant preservation", invariants),
        ("complete integrability", integrability),
        ("non-involutivity", non_involutivity),
        ("leaf commutation", leaf_commutation),
        ("implicit maps", implicit_maps),
        ("vector/scalar consistency", vector_scalar),
        ("orbit stability", orbit_stability),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome {
            pass: false,
            summary: format!("{title}: error {e}"),
            notes: Vec::new(),
        });
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {tag}  {} [{:.1} s]",
            i + 1,
            outcome.summary,
            start.elapsed().as_secs_f64()
        );
        if !outcome.pass {
            failed += 1;
            for n in &outcome.notes {
                println!("    {n}");
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
