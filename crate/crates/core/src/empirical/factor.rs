//! Segmented factorisation of `n^3 + 2` over `n ∈ (x_min, x_max]`.
//!
//! For each segment, every prime `p <= x_max` with `ν(p) > 0` strikes the
//! arithmetic progressions `n ≡ r (mod p)` of its roots `r`, dividing out
//! all powers of `p`. What is left of each value has only prime factors
//! above `x_max`, hence at most three of them; it is finished by
//! Miller–Rabin and, when composite, Pollard–Brent splitting.

use super::arith::{is_prime, pollard_brent};
use super::table::RootTable;
use crate::error::{Error, Result};
use crate::exec::{worker_count, Execution};

pub const X_MAX_LIMIT: u64 = 10_000_000;

/// `n^3 + 2`.
pub fn cubic_value(n: u64) -> u128 {
    let n = u128::from(n);
    n * n * n + 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorProfile {
    pub n: u64,
    pub value: u128,
    /// `(prime, multiplicity)`, ascending by prime.
    pub factors: Vec<(u128, u32)>,
}

impl FactorProfile {
    /// Prime factors `>= threshold`, counted with multiplicity.
    pub fn omega_above(&self, threshold: u128) -> u32 {
        self.factors
            .iter()
            .filter(|(p, _)| *p >= threshold)
            .map(|(_, e)| e)
            .sum()
    }

    /// `∏ p^e`, or `None` on overflow.
    pub fn product(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &(p, e)| (0..e).try_fold(acc, |a, _| a.checked_mul(p)))
    }
}

/// A range of `n` to factor: `(x_min, x_max]`, in segments of `segment_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeJob {
    pub x_min: u64,
    pub x_max: u64,
    /// Count prime factors `>= threshold` (the `X^δ` cut-off).
    pub threshold: u128,
    pub h: u32,
    pub segment_size: u64,
}

impl RangeJob {
    pub fn validate(&self) -> Result<()> {
        if self.x_min >= self.x_max {
            return Err(Error::Domain(format!(
                "need x_min < x_max, got {} >= {}",
                self.x_min, self.x_max
            )));
        }
        if self.x_max > X_MAX_LIMIT {
            return Err(Error::Domain(format!(
                "x_max must not exceed {X_MAX_LIMIT}, got {}",
                self.x_max
            )));
        }
        if self.threshold < 2 {
            return Err(Error::Domain("threshold must be at least 2".into()));
        }
        if self.segment_size == 0 {
            return Err(Error::Domain("segment size must be positive".into()));
        }
        Ok(())
    }

    /// Half-open-on-the-left segments `(lo, hi]` partitioning `(x_min, x_max]`.
    pub fn segments(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut lo = self.x_min;
        while lo < self.x_max {
            let hi = (lo + self.segment_size).min(self.x_max);
            out.push((lo, hi));
            lo = hi;
        }
        out
    }

    /// Sieving limit for this range.
    pub fn sieve_limit(&self) -> u64 {
        self.x_max.max(1000)
    }
}

/// One processed segment.
#[derive(Debug, Clone)]
pub struct Segment {
    pub index: usize,
    pub lo: u64,
    pub hi: u64,
    pub profiles: Vec<FactorProfile>,
}

/// Splits a residual whose prime factors all exceed `sieve_limit`.
fn finish_residual(n: u64, residual: u128, sieve_limit: u64, out: &mut Vec<(u128, u32)>) -> Result<()> {
    if residual == 1 {
        return Ok(());
    }
    let limit = u128::from(sieve_limit);
    // No prime factor <= limit, so anything below limit^2 is prime.
    let prime = if residual <= limit * limit {
        true
    } else {
        is_prime(residual).ok_or(Error::Factorization { n, residual })?
    };
    if prime {
        out.push((residual, 1));
        return Ok(());
    }
    let d = pollard_brent(residual).ok_or(Error::Factorization { n, residual })?;
    finish_residual(n, d, sieve_limit, out)?;
    finish_residual(n, residual / d, sieve_limit, out)
}

fn merge_sorted(factors: &mut Vec<(u128, u32)>) {
    factors.sort_unstable();
    let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
    for &(p, e) in factors.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    *factors = merged;
}

/// Factors `n^3 + 2` for `n ∈ (lo, hi]` using primes from `table`.
pub fn factor_segment(lo: u64, hi: u64, table: &RootTable) -> Result<Vec<FactorProfile>> {
    let len = (hi - lo) as usize;
    let first = lo + 1;
    let mut residual: Vec<u128> = (first..=hi).map(cubic_value).collect();
    let mut factors: Vec<Vec<(u128, u32)>> = vec![Vec::new(); len];
    for entry in table.entries() {
        let p = entry.p;
        let p128 = u128::from(p);
        for &r in entry.roots() {
            let offset = (r + p - first % p) % p;
            let mut i = offset as usize;
            while i < len {
                let mut e = 0;
                while residual[i].is_multiple_of(p128) {
                    residual[i] /= p128;
                    e += 1;
                }
                debug_assert!(e > 0);
                factors[i].push((p128, e));
                i += p as usize;
            }
        }
    }
    (0..len)
        .map(|i| {
            let n = first + i as u64;
            let mut fs = std::mem::take(&mut factors[i]);
            finish_residual(n, residual[i], table.limit(), &mut fs)?;
            merge_sorted(&mut fs);
            let profile = FactorProfile {
                n,
                value: cubic_value(n),
                factors: fs,
            };
            if profile.product() != Some(profile.value) {
                return Err(Error::Factorization {
                    n,
                    residual: residual[i],
                });
            }
            Ok(profile)
        })
        .collect()
}

/// Processes segments in batches, delivering them to `sink` in ascending
/// order. Work inside a batch runs in parallel when `exec` allows.
pub fn for_each_segment<F>(job: &RangeJob, table: &RootTable, exec: Execution, mut sink: F) -> Result<()>
where
    F: FnMut(Segment) -> Result<()>,
{
    job.validate()?;
    if table.limit() < job.x_max {
        return Err(Error::Domain(format!(
            "root table limit {} is below the sieve limit {}",
            table.limit(),
            job.sieve_limit()
        )));
    }
    let segments = job.segments();
    let batch = if exec.is_parallel() {
        2 * worker_count().max(1)
    } else {
        1
    };
    for (b, chunk) in segments.chunks(batch).enumerate() {
        let results = exec.map(chunk, |&(lo, hi)| factor_segment(lo, hi, table));
        for (j, (profiles, &(lo, hi))) in results.into_iter().zip(chunk).enumerate() {
            sink(Segment {
                index: b * batch + j,
                lo,
                hi,
                profiles: profiles?,
            })?;
        }
    }
    Ok(())
}

/// Every profile in `(x_min, x_max]`, ascending in `n`.
pub fn factor_range(job: &RangeJob, exec: Execution) -> Result<Vec<FactorProfile>> {
    job.validate()?;
    let table = RootTable::build(job.sieve_limit(), exec);
    factor_range_with(job, &table, exec)
}

pub fn factor_range_with(job: &RangeJob, table: &RootTable, exec: Execution) -> Result<Vec<FactorProfile>> {
    let mut out = Vec::with_capacity((job.x_max - job.x_min) as usize);
    for_each_segment(job, table, exec, |seg| {
        out.extend(seg.profiles);
        Ok(())
    })?;
    Ok(out)
}

/// `#{n ∈ (x_min, x_max] : Ω_{>=threshold}(n^3 + 2) >= h}`.
pub fn empirical_t(job: &RangeJob, exec: Execution) -> Result<u64> {
    job.validate()?;
    let table = RootTable::build(job.sieve_limit(), exec);
    empirical_t_with(job, &table, exec)
}

pub fn empirical_t_with(job: &RangeJob, table: &RootTable, exec: Execution) -> Result<u64> {
    let mut count = 0u64;
    for_each_segment(job, table, exec, |seg| {
        count += seg
            .profiles
            .iter()
            .filter(|p| p.omega_above(job.threshold) >= job.h)
            .count() as u64;
        Ok(())
    })?;
    Ok(count)
}

/// `hist[w]` is the number of `n ∈ (x_min, x_max]` with exactly `w` prime
/// factors `>= threshold`; `empirical_t` for every `h` at once is a suffix sum.
/// `job.h` is ignored.
pub fn omega_histogram(job: &RangeJob, table: &RootTable, exec: Execution) -> Result<Vec<u64>> {
    let mut hist = Vec::new();
    for_each_segment(job, table, exec, |seg| {
        for p in &seg.profiles {
            let w = p.omega_above(job.threshold) as usize;
            if hist.len() <= w {
                hist.resize(w + 1, 0);
            }
            hist[w] += 1;
        }
        Ok(())
    })?;
    Ok(hist)
}

/// `#{n : Ω >= h}` from a histogram.
pub fn count_at_least(hist: &[u64], h: u32) -> u64 {
    hist.iter().skip(h as usize).sum()
}
