//! Segmented sieve of Eratosthenes.

/// Primes `<= limit` from a plain sieve; used for base primes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Primes in `[lo, hi)`, given every prime up to `sqrt(hi)` in `base`.
pub fn primes_in(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i])
        .map(|i| lo + i as u64)
        .filter(|&v| v >= 2)
        .collect()
}

/// Base primes sufficient for sieving up to `limit`.
pub fn base_primes(limit: u64) -> Vec<u64> {
    small_primes(crate::empirical::arith::isqrt(u128::from(limit)) as u64 + 1)
}

/// All primes `<= limit`, sieved in blocks.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    const BLOCK: u64 = 1 << 18;
    let base = base_primes(limit);
    let mut out = Vec::new();
    let mut lo = 0;
    while lo <= limit {
        let hi = (lo + BLOCK).min(limit + 1);
        out.extend(primes_in(lo, hi, &base));
        lo = hi;
    }
    out
}
