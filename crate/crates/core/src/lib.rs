#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod lasso;
pub mod model;
pub mod numerics;
pub mod ridge;
pub mod simulator;

pub use error::{Error, Result};
pub use model::{ModelConfig, RiskPoint};
