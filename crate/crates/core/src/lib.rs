//! Information-theoretic spreading measures and composite complexities of
//! hydrogenic orbitals, computed in closed form and cross-checked against
//! brute-force numerical integration.

// `!(x >= 0.0)` style guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod orbital;
pub mod specfun;
pub mod validation;
pub mod wigner;

pub use entropy::{shannon_entropy, EntropyBreakdown, QuadSettings, SignConvention};
pub use error::{Error, Result};
pub use orbital::QuantumNumbers;
