pub mod dual;
pub mod embed;
pub mod error;
pub mod flip;
pub mod generate;
pub mod hyperbolic;
pub mod input;
pub mod loops;
pub mod map;
pub mod pipeline;
pub mod svg;
pub mod tolerance;
pub mod word;

pub use error::{Error, ErrorKind, Result};
pub use tolerance::Tolerances;
