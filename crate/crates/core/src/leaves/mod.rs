//! Invariant leaves: exact affine lifts, quadratic leaf solvers, the
//! implicitly defined 4-dimensional maps and long-orbit iteration.

mod affine;
mod implicit;
mod orbit;
mod quadratic;
mod radicals;

pub use affine::{check_leaf_commutation, leaf_partner, lift_affine, lift_state, LeafPairing};
pub use implicit::{implicit_yb_residual, ImplicitImage, ImplicitMap, CONSISTENCY_TOLERANCE};
pub use orbit::{iterate_orbit, iterate_orbit_with_threshold, Orbit, OrbitRecord, NEAR_SINGULAR};
pub use quadratic::{
    dihedral_leaf_coefficients, dnls_leaf_coefficients, quadratic_residual, solve_dihedral_leaf,
    solve_dnls_leaf, solve_quadratic, Branch, LeafRoots,
};
pub use radicals::{dihedral_f_fg, first_integral_residuals};
