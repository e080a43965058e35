//! Explicit upper bounds for the number of `n` in `(X, 2X]` such that `n^3 + 2`
//! has many prime factors above `X^delta`, the pipeline that turns those bounds
//! into a positive-proportion exponent, and a brute-force harness that checks
//! the counting machinery at desk scale.
//!
//! Module map:
//!
//! * [`logdomain`]: signed log-magnitude reals. Bound terms range over
//!   hundreds of decimal orders of magnitude, so every bound value lives here.
//! * [`quadrature`]: adaptive Gauss–Kronrod evaluation of `∫ exp(αs)/s ds`.
//! * [`bounds`]: the two closed-form coefficient bounds, the exponential-tilt
//!   optimiser, and a Monte-Carlo estimator of the exact region integrals.
//! * [`aggregate`]: weighted tail sums over `h` and the final constants.
//! * [`empirical`]: cube roots of `-2` modulo primes, `ν(d)`, segmented
//!   factorisation of `n^3 + 2`, and the Mertens-type prime sum.
//! * [`exec`]: parallel / sequential execution switch.

pub mod aggregate;
pub mod bounds;
pub mod empirical;
pub mod error;
pub mod exec;
pub mod logdomain;
pub mod quadrature;

pub use error::{Error, Result};
pub use exec::Execution;
pub use logdomain::{LogNumber, Sign};
