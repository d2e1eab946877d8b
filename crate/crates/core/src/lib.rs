pub mod arith;
pub mod cuspidal;
pub mod error;
pub mod finite;
pub mod lmodular;
pub mod padic;
pub mod rankin;
pub mod types;

pub use error::{Error, Result};
