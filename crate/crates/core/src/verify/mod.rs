//! Seeded verification: exact checks on rational states for the explicit maps,
//! float residual checks for the implicitly defined ones.

mod checks;
mod numeric;
mod sampling;
mod suite;

pub use checks::*;
pub use numeric::{
    run_implicit_yb, run_radical_residuals, run_root_residuals, IMPLICIT_NAMES,
    IMPLICIT_YB_TOLERANCE, RADICAL_TOLERANCE, ROOT_TOLERANCE,
};
pub use sampling::{
    draw_state, draw_triple, random_params, random_point, random_rational, sample_state, trial_rng,
    TripleState, MAX_ATTEMPTS,
};
pub use suite::{
    parse_checks, run_all, run_check, run_suite, Check, CheckReport, Status, JACOBIAN_TOLERANCE,
    JACOBIAN_TRIALS,
};
