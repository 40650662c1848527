//! Surface, rotated and XZZX planar codes with an exact matching decoder,
//! exhaustive error-class enumeration, weight enumerators and analytic and
//! sampled logical error rates.

pub mod analytic;
pub mod cli;
pub mod codes;
pub mod decoder;
pub mod enumerate;
pub mod error;
pub mod montecarlo;
pub mod pauli;
pub mod wepoly;

pub use error::{QecError, Result};
pub use pauli::{ErrorClass, Letter, PauliOperator};
