//! Exact scalars, dual numbers, Laurent matrices and the expression trees
//! every map-level formula is written in.

mod dual;
mod expr;
mod field;
mod laurent;
mod rank;
mod rational;
mod wide;

pub use dual::Dual;
pub use expr::{dual_eval, dual_eval_with_params, Expr};
pub use field::Field;
pub use laurent::{laurent_mat_equal, laurent_mat_mul, LaurentMatrix, LaurentPoly};
pub use rank::exact_rank;
pub use rational::{scalar_arith, ArithOp, Rational};
pub use wide::{WideFloat, WIDE_PRECISION};
