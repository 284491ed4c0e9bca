//! Minimal codewords of binary linear codes: enumeration, exact counting
//! through information-part multiplicities, and extremal values `M₂(n, k)`.

pub mod bounds;
pub mod census;
pub mod codewords;
pub mod counting;
pub mod error;
pub mod gf2;
pub mod mgsets;
pub mod optimize;
pub mod reference;

pub use error::{Error, Result};
