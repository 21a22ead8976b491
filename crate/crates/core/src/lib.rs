pub mod catalog;
pub mod cli;
pub mod conditioning;
pub mod constraints;
pub mod data;
pub mod distance;
pub mod error;
pub mod exploration;
pub mod matrix;
pub mod quality;
pub mod report;
pub mod seed;
pub mod similarity;
pub mod synth;

pub use error::{EvalError, Issue, Result};
pub use matrix::Matrix;
