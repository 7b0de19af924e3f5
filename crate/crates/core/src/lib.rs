// `!(x > 0.0)` is used throughout to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod models;
pub mod quad;
pub mod quintic;
pub mod validation;

pub use error::{Error, Result};
