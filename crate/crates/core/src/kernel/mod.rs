//! Numerical primitives: exact binomials, log-gamma, extended-precision
//! floats and cancellation-aware alternating sums.

pub mod altsum;
pub mod binomial;
pub mod gamma;
pub mod hpfloat;

pub use altsum::{alternating_sum, alternating_sum_with, AltSum, LogTerm, PrecisionPolicy};
pub use binomial::{binomial, binomial_i, factorial, ln_factorial, FactorialCache};
pub use gamma::log_gamma;
pub use hpfloat::{digits_to_bits, HpFloat};
