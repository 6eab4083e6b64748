//! Yang–Baxter maps built from Darboux matrices, with an exact verification
//! engine for the parametric YB equation, Lax refactorisation and Liouville
//! integrability.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod catalog;
pub mod lax;
pub mod leaves;
pub mod report;
pub mod verify;
