//! Scalar special functions.

mod bessel;
mod erf;
mod gamma;
mod laguerre;
mod qsum;

pub(crate) use bessel::bessel_i_repr;
pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i_real, ln_entire_i};
pub use erf::{erf, erfc};
pub use gamma::{gamma_sign, ln_gamma, ln_gamma_complex, rgamma};
pub use laguerre::{laguerre_fn, laguerre_fn_table, laguerre_poly};
pub use qsum::{q_sum, q_sum_complex, QSum, SeriesControl};
