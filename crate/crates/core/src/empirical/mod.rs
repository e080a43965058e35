//! Desk-scale ground truth for `n^3 + 2`: root counts `ν(d)`, exact
//! factorisation over ranges of `n`, empirical counts and the prime sum
//! `Σ ν(p) ln p / p`.

pub mod arith;
pub mod factor;
pub mod mertens;
pub mod roots;
pub mod sieve;
pub mod table;

pub use factor::{
    count_at_least, cubic_value, empirical_t, empirical_t_with, factor_range, factor_range_with, for_each_segment,
    omega_histogram, FactorProfile, RangeJob, Segment,
};
pub use mertens::{decade_checkpoints, mertens_check, MertensPoint};
pub use roots::{cube_roots_of_minus_two, nu, nu_prime};
pub use table::{PrimeRoots, RootTable};
