// `!(x < y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod gaps;
pub mod harness;
pub mod rate;
pub mod saddle;
pub mod surface;
pub mod targets;

pub use error::{Error, Result};
