pub mod algebra;
pub mod chenruan;
pub mod error;
pub mod hurwitz;
pub mod invariants;
pub mod operators;
pub mod partitions;
pub mod surface;

pub use error::{Error, Result};
