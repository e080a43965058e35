//! Partial sums `Σ_{p<=x} ν(p) ln p / p` against `ln x`.

use super::roots::nu_prime;
use super::sieve::{base_primes, primes_in};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const MERTENS_LIMIT: u64 = 100_000_000;
const BLOCK: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensPoint {
    pub x: u64,
    /// `Σ_{p<=x} ν(p) ln p / p`.
    pub sum: f64,
    /// `sum - ln x`.
    pub deviation: f64,
    pub prime_count: u64,
    /// `Σ_{p<=x} ν(p)`.
    pub nu_sum: u64,
}

impl MertensPoint {
    pub fn mean_nu(&self) -> f64 {
        self.nu_sum as f64 / self.prime_count as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: f64,
    primes: u64,
    nu: u64,
}

fn block_partial(lo: u64, hi: u64, base: &[u64]) -> Partial {
    let mut out = Partial::default();
    for p in primes_in(lo, hi, base) {
        let nu = nu_prime(p);
        out.primes += 1;
        out.nu += u64::from(nu);
        if nu > 0 {
            out.sum += f64::from(nu) * (p as f64).ln() / p as f64;
        }
    }
    out
}

/// `1, 10, 100, ...` up to `limit`, followed by `limit` itself.
pub fn decade_checkpoints(limit: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x <= limit)
        .collect();
    if out.last() != Some(&limit) {
        out.push(limit);
    }
    out
}

/// Deviations at each checkpoint (ascending, each in `[2, 10^8]`).
///
/// Blocks are summed independently and then accumulated in ascending order,
/// so the result does not depend on `exec`.
pub fn mertens_check(checkpoints: &[u64], exec: Execution) -> Result<Vec<MertensPoint>> {
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }
    if checkpoints[0] < 2 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "checkpoints must be strictly increasing and at least 2".into(),
        ));
    }
    let limit = *checkpoints.last().expect("nonempty");
    if limit > MERTENS_LIMIT {
        return Err(Error::Domain(format!(
            "limit must not exceed {MERTENS_LIMIT}, got {limit}"
        )));
    }
    let base = base_primes(limit);

    // Block edges: multiples of BLOCK plus one past every checkpoint.
    let mut edges: Vec<u64> = (0..=limit / BLOCK).map(|i| i * BLOCK).collect();
    edges.extend(checkpoints.iter().map(|&x| x + 1));
    edges.sort_unstable();
    edges.dedup();
    let blocks: Vec<(u64, u64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let partials = exec.map(&blocks, |&(lo, hi)| block_partial(lo, hi, &base));

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = Partial::default();
    let mut next = checkpoints.iter().peekable();
    for (&(_, hi), part) in blocks.iter().zip(&partials) {
        acc.sum += part.sum;
        acc.primes += part.primes;
        acc.nu += part.nu;
        if let Some(&&x) = next.peek() {
            if hi == x + 1 {
                out.push(MertensPoint {
                    x,
                    sum: acc.sum,
                    deviation: acc.sum - (x as f64).ln(),
                    prime_count: acc.primes,
                    nu_sum: acc.nu,
                });
                next.next();
            }
        }
    }
    Ok(out)
}
