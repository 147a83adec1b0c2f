// Validators use the negated form `!(x > 0.0)` on purpose: unlike
// `x <= 0.0`, it also rejects NaN, so every domain check catches
// non-finite input in one comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
mod exec;
pub mod geo;
pub mod geom;
pub mod mixture;
pub mod oracle;
pub mod polygon;
pub mod psha;
pub mod support;

pub use error::{Error, Result};
