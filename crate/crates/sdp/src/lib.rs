//! Real block-diagonal SDP in standard form
//!
//! ```text
//! minimize   <C, X>
//! subject to <A_i, X> = b_i,  i = 1..m
//!            X = diag(X_1, ..., X_k),  X_l PSD
//! ```
//!
//! Dual: maximize b^T y s.t. S = C - sum_i y_i A_i PSD.
//!
//! Solved with an infeasible-start primal-dual interior-point method
//! (Nesterov-Todd direction, Mehrotra predictor-corrector).

mod dense;
mod form;
mod ipm;
mod presolve;

pub use dense::BlockMat;
pub use form::{SdpError, SparseSym, StandardForm, SymEntry};
pub use ipm::{residuals, solve, IterationRecord, Residuals, Solution, SolveOptions, Status};
pub use presolve::{presolve, Presolved};
