//! Word-size modular arithmetic, Miller–Rabin and Pollard–Brent for the
//! values `n^3 + 2 < 10^22` met in desk-scale runs. Values below `2^64` take
//! a Montgomery-form path; wider ones use limb-wise `u128` products.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `a·b mod m` for `m < 2^126` without a 256-bit product: `b` is consumed in
/// limbs narrow enough that every intermediate fits in 127 bits.
pub fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0 && m < (1u128 << 126));
    if m <= u64::MAX as u128 {
        return mul_mod((a % m) as u64, (b % m) as u64, m as u64) as u128;
    }
    let a = a % m;
    let b = b % m;
    let width = 127 - (128 - m.leading_zeros());
    let limbs = (128 - b.leading_zeros()).div_ceil(width);
    let mask = (1u128 << width) - 1;
    let mut acc = 0u128;
    for i in (0..limbs).rev() {
        let limb = (b >> (i * width)) & mask;
        acc = (acc << width) % m;
        acc = (acc + (a * limb) % m) % m;
    }
    acc
}

pub fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Montgomery arithmetic modulo an odd `n < 2^64`, with `R = 2^64`.
#[derive(Debug, Clone, Copy)]
struct Montgomery {
    n: u64,
    /// `n^{-1} mod 2^64`.
    n_inv: u64,
    /// `R^2 mod n`.
    r2: u64,
}

impl Montgomery {
    fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1);
        let mut n_inv = n;
        for _ in 0..5 {
            n_inv = n_inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(n_inv)));
        }
        let r2 = ((u128::MAX % u128::from(n) + 1) % u128::from(n)) as u64;
        Montgomery { n, n_inv, r2 }
    }

    /// `t / R mod n` for `t < n·R`.
    fn redc(&self, t: u128) -> u64 {
        let lo = t as u64;
        let hi = (t >> 64) as u64;
        let m = lo.wrapping_mul(self.n_inv);
        let mn_hi = ((u128::from(m) * u128::from(self.n)) >> 64) as u64;
        if hi >= mn_hi {
            hi - mn_hi
        } else {
            hi.wrapping_sub(mn_hi).wrapping_add(self.n)
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(u128::from(a) * u128::from(b))
    }

    fn encode(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = self.encode(1);
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

// Deterministic Miller–Rabin bases for every n < 2^64.
const BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mont = Montgomery::new(n);
    let one = mont.encode(1);
    let minus_one = n - one;
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES_64 {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mont.pow(mont.encode(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a | b;
    }
    let shift = (a | b).trailing_zeros();
    let mut a = a >> a.trailing_zeros();
    let mut b = b;
    while b != 0 {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
    }
    a << shift
}

/// Brent's variant of rho for an odd composite `n < 2^64`, in Montgomery form.
fn pollard_brent_u64(n: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let mont = Montgomery::new(n);
    for c in 1..64u64 {
        let c = c % n;
        let f = |x: u64| {
            let (y, carry) = mont.mul(x, x).overflowing_add(c);
            if carry || y >= n {
                y.wrapping_sub(n)
            } else {
                y
            }
        };
        let (mut y, mut r, mut q) = (mont.encode(2), 1u64, mont.encode(1));
        let (mut x, mut ys) = (0u64, 0u64);
        let mut g = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// The first 13 primes are a deterministic Miller–Rabin base set below this bound.
pub const MILLER_RABIN_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;
const BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic primality test for `n < 3.3·10^24`; `None` above that.
pub fn is_prime(n: u128) -> Option<bool> {
    if n >= MILLER_RABIN_LIMIT {
        return None;
    }
    if let Ok(small) = u64::try_from(n) {
        return Some(is_prime_u64(small));
    }
    for &p in &BASES {
        if n == p {
            return Some(true);
        }
        if n.is_multiple_of(p) {
            return Some(false);
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return Some(false);
    }
    Some(true)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n`, or `None` if Brent's
/// cycle search fails for every tried polynomial constant.
pub fn pollard_brent(n: u128) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let sq = isqrt(n);
    if sq * sq == n {
        return Some(sq);
    }
    if let Ok(small) = u64::try_from(n) {
        return pollard_brent_u64(small).map(u128::from);
    }
    const BATCH: u32 = 128;
    for c in 1..64u128 {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let (mut x, mut ys) = (0u128, 0u128);
        let mut g = 1u128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min((r - k) as u32) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += u64::from(BATCH);
            }
            r *= 2;
            if r > 1 << 24 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}
