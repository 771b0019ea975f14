pub mod cli;
pub mod error;
pub mod floatsys;
pub mod kernels;
pub mod quadrature;
pub mod range;
pub mod recursion;
pub mod seed;
pub mod student;

pub use error::{Error, Result};
pub use floatsys::{FloatSystem, Levels};
pub use recursion::{log_i, log_k, log_k_scaled, LogBesselValue};
