//! Stationary states, coherent states, resolutions of unity and propagator kernels
//! for a charge in a magnetic-solenoid field (uniform field plus an Aharonov–Bohm
//! flux line), together with the (2+1) and (3+1) Dirac extensions.
//!
//! Units: ħ = c = e = 1 and, in the non-relativistic sector, M = 1. Lengths enter
//! only through ρ = γr²/2.

// negated comparisons reject NaN together with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod completeness;
pub mod cs;
pub mod dirac;
pub mod error;
pub mod landau;
pub mod quadrature;
pub mod radial;
pub mod specfun;

pub use error::{MsfError, Result};

#[cfg(test)]
mod properties;
