pub mod error;
pub mod forces;
pub mod green;
pub mod media;
pub mod particle;
pub mod quadrature;
pub mod stats;
pub mod system;
pub mod units;

pub use error::{Error, Result};
pub use system::System;

