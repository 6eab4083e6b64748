//! The catalog of YB maps: evaluators, invariants, Poisson structures and the
//! name registry.

mod descriptor;
mod maps;
mod registry;
mod state;

pub use descriptor::{MapDescriptor, NamedExpr, PoissonStructure, TraceMatch};
pub use maps::{dihedral_linear_matrix, GuardLog, MapKind, NlsSign};
pub use registry::{resolve, Registry, DEFAULT_VECTOR_N, MAP_NAMES};
pub use state::PairState;
