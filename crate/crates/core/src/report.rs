//! Machine-readable verification reports.
//!
//! Field names of [`Report`], [`MapSection`] and [`CheckReport`] are frozen;
//! new fields may be added, existing ones are never renamed.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{resolve, MapDescriptor, MapKind, Registry};
use crate::error::Result;
use crate::leaves::{check_leaf_commutation, leaf_partner, Branch, ImplicitMap, LeafPairing};
use crate::verify::{
    run_all, run_check, run_implicit_yb, run_radical_residuals, run_root_residuals, sample_state,
    Check, CheckReport, Status, IMPLICIT_NAMES,
};

pub const REPORT_VERSION: u32 = 1;

/// Vector dimensions exercised for each vector map in a full report.
pub const VECTOR_DIMS: [usize; 3] = [1, 2, 3];

#[derive(Clone, Debug, Serialize)]
pub struct MapSection {
    pub name: String,
    pub checks: Vec<CheckReport>,
}

impl MapSection {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionCandidate {
    pub convention: &'static str,
    pub map: String,
    pub lax_failures: usize,
    pub trials: usize,
}

/// Which sign convention of the vector NLS map satisfies its Lax
/// refactorisation; `shipped` is the one registered as `vector-nls`.
#[derive(Clone, Debug, Serialize)]
pub struct SignConvention {
    pub shipped: &'static str,
    pub selected: Option<&'static str>,
    pub candidates: Vec<ConventionCandidate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingCandidate {
    pub pairing: LeafPairing,
    pub failures: usize,
    pub trials: usize,
}

/// Which parameter labels which image leaf in the lift/restrict square.
#[derive(Clone, Debug, Serialize)]
pub struct PairingOutcome {
    pub map4: String,
    pub map6: String,
    pub selected: Vec<LeafPairing>,
    pub candidates: Vec<PairingCandidate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub maps: Vec<MapSection>,
    pub vector_nls_convention: SignConvention,
    pub leaf_pairings: Vec<PairingOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.maps.iter().all(MapSection::passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check, then the convention and pairing outcomes.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for section in &self.maps {
            for c in &section.checks {
                let _ = write!(
                    out,
                    "{:<22} {:<17} {:<7}",
                    section.name,
                    c.name,
                    status_word(c.status)
                );
                match c.status {
                    Status::Skipped => {
                        let _ = write!(out, " ({})", c.reason.as_deref().unwrap_or(""));
                    }
                    _ => {
                        let _ = write!(out, " {}/{} failed", c.failures, c.trials);
                        if let Some(r) = &c.reason {
                            let _ = write!(out, " ({r})");
                        }
                    }
                }
                out.push('\n');
                if let Some(ce) = &c.counterexample {
                    let _ = writeln!(out, "    counterexample: {ce}");
                }
            }
        }
        let conv = &self.vector_nls_convention;
        let _ = writeln!(
            out,
            "vector-nls convention: {} (shipped: {})",
            conv.selected.unwrap_or("none passes"),
            conv.shipped
        );
        for p in &self.leaf_pairings {
            let sel: Vec<_> = p
                .selected
                .iter()
                .map(|s| format!("{s:?}").to_lowercase())
                .collect();
            let _ = writeln!(
                out,
                "leaf pairing {} -> {}: {}",
                p.map4,
                p.map6,
                if sel.is_empty() {
                    "none".into()
                } else {
                    sel.join(", ")
                }
            );
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
    }
}

/// Lax refactorisation for both sign conventions at every vector dimension.
pub fn resolve_sign_convention(trials: usize, seed: u64) -> Result<SignConvention> {
    let conventions = [
        ("adler-yamilov", "vector-nls"),
        ("reversed", "vector-nls-reversed"),
    ];
    let mut candidates = Vec::new();
    for (label, base) in conventions {
        for n in VECTOR_DIMS {
            let map = resolve(&format!("{base}:{n}"))?;
            let r = run_check(&map, Check::Lax, trials, seed)?;
            candidates.push(ConventionCandidate {
                convention: label,
                map: map.name.clone(),
                lax_failures: r.failures,
                trials: r.trials,
            });
        }
    }
    let selected = conventions.iter().map(|c| c.0).find(|label| {
        candidates
            .iter()
            .filter(|c| c.convention == *label)
            .all(|c| c.lax_failures == 0)
    });
    Ok(SignConvention {
        shipped: "adler-yamilov",
        selected,
        candidates,
    })
}

/// Tests both leaf pairings for every 4D map with an affine-leaf partner.
pub fn resolve_leaf_pairings(trials: usize, seed: u64) -> Result<Vec<PairingOutcome>> {
    [MapKind::AdlerYamilov, MapKind::Dnls4]
        .into_iter()
        .map(|kind| {
            let map4 = MapDescriptor::from_kind(kind.clone());
            let map6 = MapDescriptor::from_kind(leaf_partner(&kind).expect("has a leaf partner"));
            let candidates = [LeafPairing::Straight, LeafPairing::Crossed]
                .into_iter()
                .map(|pairing| {
                    let failures = (0..trials)
                        .into_par_iter()
                        .map(|i| {
                            let s = sample_state(&map4, seed, i as u64)?;
                            check_leaf_commutation(&map4, &map6, &s, pairing)
                        })
                        .collect::<Result<Vec<bool>>>()?
                        .into_iter()
                        .filter(|ok| !ok)
                        .count();
                    Ok(PairingCandidate {
                        pairing,
                        failures,
                        trials,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PairingOutcome {
                map4: map4.name.clone(),
                map6: map6.name.clone(),
                selected: candidates
                    .iter()
                    .filter(|c| c.failures == 0)
                    .map(|c| c.pairing)
                    .collect(),
                candidates,
            })
        })
        .collect()
}

/// Sections for the implicitly defined maps.
pub fn implicit_section(
    map: ImplicitMap,
    trials: usize,
    seed: u64,
    tolerance: f64,
    branch: Branch,
) -> Result<MapSection> {
    let mut checks = vec![
        run_implicit_yb(map, trials, seed, tolerance, branch)?,
        run_root_residuals(map, trials, seed)?,
    ];
    if map == ImplicitMap::Dihedral4 {
        checks.push(run_radical_residuals(trials, seed));
    }
    Ok(MapSection {
        name: map.name().into(),
        checks,
    })
}

/// Every registered map (vector maps at each of [`VECTOR_DIMS`]), then the
/// implicit maps.
pub fn report_targets(registry: &Registry) -> Vec<String> {
    let mut names = Vec::new();
    for m in registry.maps() {
        match m.kind {
            MapKind::VectorNls { .. } | MapKind::VectorZ2 { .. } => {
                let base = m.name.split(':').next().unwrap_or(&m.name);
                names.extend(VECTOR_DIMS.iter().map(|n| format!("{base}:{n}")));
            }
            _ => names.push(m.name.clone()),
        }
    }
    if !registry.is_empty() {
        names.extend(IMPLICIT_NAMES.iter().map(|s| s.to_string()));
    }
    names
}

/// Options shared by `verify` and full reports.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub branch: Branch,
}

/// One section for `name`: an implicit map, or a catalog map with the given
/// checks (all when `checks` is `None`).
pub fn section(
    registry: &Registry,
    name: &str,
    checks: Option<&[Check]>,
    opts: RunOptions,
) -> Result<MapSection> {
    if let Ok(imp) = name.parse::<ImplicitMap>() {
        return implicit_section(imp, opts.trials, opts.seed, opts.tolerance, opts.branch);
    }
    let map = registry.get(name)?;
    let checks = match checks {
        Some(cs) => cs
            .iter()
            .map(|&c| run_check(&map, c, opts.trials, opts.seed))
            .collect::<Result<_>>()?,
        None => run_all(&map, opts.trials, opts.seed)?,
    };
    Ok(MapSection {
        name: map.name.clone(),
        checks,
    })
}

fn assemble(maps: Vec<MapSection>, opts: RunOptions) -> Result<Report> {
    Ok(Report {
        version: REPORT_VERSION,
        seed: opts.seed,
        trials: opts.trials,
        tolerance: opts.tolerance,
        maps,
        vector_nls_convention: resolve_sign_convention(opts.trials, opts.seed)?,
        leaf_pairings: resolve_leaf_pairings(opts.trials, opts.seed)?,
    })
}

/// Report for a single map.
pub fn verify_report(
    registry: &Registry,
    name: &str,
    checks: Option<&[Check]>,
    opts: RunOptions,
) -> Result<Report> {
    let s = section(registry, name, checks, opts)?;
    assemble(vec![s], opts)
}

/// Report over [`report_targets`].
pub fn full_report(registry: &Registry, opts: RunOptions) -> Result<Report> {
    let maps = report_targets(registry)
        .iter()
        .map(|n| section(registry, n, None, opts))
        .collect::<Result<_>>()?;
    assemble(maps, opts)
}
