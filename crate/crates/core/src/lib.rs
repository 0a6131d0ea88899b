//! Y-patterns and cluster patterns with coefficients, principal-coefficient
//! invariants, g-fans, and the toric degeneration of specially completed
//! cluster X-varieties, all in exact arithmetic.

pub mod error;
pub mod exact_algebra;

pub use error::{Error, Result};
pub mod linalg;
pub mod semifields;
pub mod seeds;
pub mod invariants;
pub mod gfan;
pub mod report;
pub mod degeneration;
pub mod corpus;
pub mod batches;
