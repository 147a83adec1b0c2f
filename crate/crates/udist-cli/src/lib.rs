//! Library half of the `udist` command-line tool: JSON scene/model schemas,
//! table output, and the command implementations.  The binary in `main.rs`
//! only parses flags and maps errors to exit codes.

// Same convention as the core crate: `!(x > 0.0)` in validators rejects
// NaN along with the out-of-domain values, where `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod model;
pub mod output;
pub mod scene;
