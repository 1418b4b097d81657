pub mod arith;
pub mod biquad;
pub mod config;
pub mod error;
pub mod forms;
pub mod fracsquare;
pub mod lucas;
pub mod pell;
pub mod roots;
pub mod ternary;
pub mod thue;

pub use error::{Error, Result};
