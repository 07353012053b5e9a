//! Information regularization for semi-supervised binary classification.

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod density;
pub mod error;
pub mod harness;
pub mod logistic;
pub mod nonparam1d;
pub mod optimize;
pub mod quadrature;
pub mod theory;

pub use error::{Error, Result};
