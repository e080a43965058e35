//! Roots of `n^3 + 2 ≡ 0` modulo primes and prime powers, and the root
//! count `ν(d)`.
//!
//! For `p ≡ 2 (mod 3)` cubing is a bijection and the unique root is
//! `(-2)^((2p-1)/3)`. For `p ≡ 1 (mod 3)` there are three roots or none;
//! one root comes from a Tonelli–Shanks style cube root (a cube root of the
//! `3`-free part by exponentiation, corrected by a discrete log in the
//! `3`-Sylow subgroup), the other two from multiplying by cube roots of unity.
//! Roots lift to prime powers by Newton steps when `3r^2 ≢ 0 (mod p)` and by
//! exhaustive lifting otherwise (only `p = 2, 3`).

use super::arith::{mul_mod, pow_mod};

/// `-2 mod p`.
fn minus_two(p: u64) -> u64 {
    (p - 2 % p) % p
}

/// Number of roots of `n^3 ≡ -2 (mod p)` for a prime `p`, without extracting them.
pub fn nu_prime(p: u64) -> u8 {
    if p == 2 || p == 3 || p % 3 == 2 {
        return 1;
    }
    if pow_mod(minus_two(p), (p - 1) / 3, p) == 1 {
        3
    } else {
        0
    }
}

/// All roots of `n^3 + 2 ≡ 0 (mod p)` for a prime `p`, ascending.
pub fn cube_roots_of_minus_two(p: u64) -> Vec<u64> {
    match p {
        2 => return vec![0],
        3 => return vec![1],
        _ => {}
    }
    let a = minus_two(p);
    if p % 3 == 2 {
        return vec![pow_mod(a, (2 * p - 1) / 3, p)];
    }
    let Some(r) = cube_root_1_mod_3(a, p) else {
        return Vec::new();
    };
    let omega = primitive_cube_root_of_unity(p);
    let mut roots = vec![r, mul_mod(r, omega, p), mul_mod(mul_mod(r, omega, p), omega, p)];
    roots.sort_unstable();
    roots
}

fn non_cubic_residue(p: u64) -> u64 {
    (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 3, p) != 1)
        .expect("p ≡ 1 (mod 3) has cubic non-residues")
}

fn primitive_cube_root_of_unity(p: u64) -> u64 {
    pow_mod(non_cubic_residue(p), (p - 1) / 3, p)
}

fn inverse(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

/// A cube root of `a` modulo a prime `p ≡ 1 (mod 3)`, if `a` is a nonzero cube.
fn cube_root_1_mod_3(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) || pow_mod(a, (p - 1) / 3, p) != 1 {
        return None;
    }
    let mut s = 0u32;
    let mut t = p - 1;
    while t.is_multiple_of(3) {
        t /= 3;
        s += 1;
    }
    // 3e = 1 + m·t.
    let m = if t % 3 == 1 { 2 } else { 1 };
    let e = (m * t + 1) / 3;
    let x0 = pow_mod(a, e, p);
    // x0^3 = a · a^(m t); a^(m t) lies in the 3-Sylow subgroup.
    let target = inverse(pow_mod(a, m * t, p), p);
    let gen = pow_mod(non_cubic_residue(p), t, p);
    let omega = pow_mod(gen, 3u64.pow(s - 1), p);
    let omega_sq = mul_mod(omega, omega, p);
    // Pohlig–Hellman for target = gen^j, one base-3 digit at a time.
    let mut j = 0u64;
    let mut pow3 = 1u64;
    for i in 0..s {
        let residual = mul_mod(target, inverse(pow_mod(gen, j, p), p), p);
        let probe = pow_mod(residual, 3u64.pow(s - 1 - i), p);
        let digit = if probe == 1 {
            0
        } else if probe == omega {
            1
        } else {
            debug_assert_eq!(probe, omega_sq);
            2
        };
        j += digit * pow3;
        pow3 *= 3;
    }
    debug_assert_eq!(j % 3, 0);
    let root = mul_mod(x0, pow_mod(gen, j / 3, p), p);
    debug_assert_eq!(pow_mod(root, 3, p), a);
    Some(root)
}

fn f_mod(n: u64, m: u64) -> u64 {
    ((n as u128 * n as u128 % m as u128 * n as u128 + 2) % m as u128) as u64
}

/// Roots of `n^3 + 2` modulo `p^e` (`p^e < 2^63`), ascending.
pub fn roots_mod_prime_power(p: u64, e: u32) -> Vec<u64> {
    let mut roots = cube_roots_of_minus_two(p);
    let mut modulus = p;
    for _ in 1..e {
        let next = modulus * p;
        let mut lifted = Vec::new();
        for &r in &roots {
            let derivative = mul_mod(3, mul_mod(r, r, p), p);
            if derivative != 0 {
                // Newton: r' = r - f(r)/f'(r) mod p^(i+1), with f(r) ≡ 0 mod p^i.
                let quotient = f_mod(r, next) / modulus;
                let correction = mul_mod(quotient, inverse(derivative, p), p);
                let step = (p - correction) % p;
                lifted.push((r + step * modulus) % next);
            } else {
                lifted.extend((0..p).map(|t| r + t * modulus).filter(|&c| f_mod(c, next) == 0));
            }
        }
        lifted.sort_unstable();
        roots = lifted;
        modulus = next;
    }
    roots
}

fn factorize_small(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p) {
            let mut e = 0;
            while d.is_multiple_of(p) {
                d /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

/// Largest `d` accepted by [`nu`].
pub const NU_LIMIT: u64 = 1_000_000_000;

/// `ν(d) = #{n mod d : n^3 + 2 ≡ 0 (mod d)}` by factoring `d`, counting roots
/// modulo each prime power and multiplying the counts.
pub fn nu(d: u64) -> crate::Result<u64> {
    if d == 0 || d > NU_LIMIT {
        return Err(crate::Error::Domain(format!("nu needs 1 <= d <= {NU_LIMIT}, got {d}")));
    }
    Ok(factorize_small(d)
        .into_iter()
        .map(|(p, e)| roots_mod_prime_power(p, e).len() as u64)
        .product())
}
