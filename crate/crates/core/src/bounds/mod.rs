//! Explicit coefficients `c(h, δ)` with `T(h, δ) <= X (c(h, δ) + o(1))`.
//!
//! Both bounds come from covering every `n` with `Ω_δ(n^3 + 2) >= h` by a
//! divisor `d = p_1 ⋯ p_k` built from its smallest large primes, and then
//! replacing `Σ ν(d)/d` with the integral of `∏ 1/s_i` over the region of
//! admissible exponent vectors `s_i = log p_i / log X`.
//!
//! * [`first_bound`] keeps `k = [h/deg]` primes and relaxes the region to a
//!   cube divided by `k!`.
//! * [`second_bound`] lets `k` range up to `K` and handles the extra
//!   "the product cannot be extended" constraint `Σ s_i >= (h-k-3)/(h-k-1)`
//!   by an exponential tilt `exp(α(Σ s_i - ·))`, optimised per `k`
//!   ([`optimize_alpha`]).
//! * [`region_integral_mc`] estimates the exact (unrelaxed) region integrals
//!   so the relaxations can be checked to dominate them.

mod montecarlo;
mod tilt;

use std::fmt;
use std::str::FromStr;

pub use montecarlo::{region_integral_mc, McEstimate, Region};
pub use tilt::{optimize_alpha, TiltChoice, ALPHA_GRID_MAX_EXP, ALPHA_GRID_MIN_EXP};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::logdomain::LogNumber;
use crate::quadrature::{ln_exp_integral, QuadratureSpec};

/// The exponent `δ`, held as an exact reduced fraction `num/den` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delta {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Delta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num >= den {
            return Err(Error::Domain(format!(
                "delta = {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        let g = gcd(num, den);
        Ok(Delta {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `[1/δ]`, computed exactly.
    pub fn recip_floor(self) -> u64 {
        self.den / self.num
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Delta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("delta must be written as P/Q, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Domain(format!("delta must be written as P/Q, got {s:?}")))
        };
        Delta::new(parse(p)?, parse(q)?)
    }
}

/// Parameters of one bound term: `h` large prime factors, exponent `δ`,
/// polynomial degree, and the number `k` of primes kept in `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub h: u32,
    pub delta: Delta,
    pub degree: u32,
    pub k: u32,
}

impl BoundParams {
    /// Checks `h >= 3`, `degree >= 2` and `[h/degree] <= k <= h - 1`.
    pub fn new(h: u32, delta: Delta, degree: u32, k: u32) -> Result<Self> {
        if h < 3 {
            return Err(Error::Domain(format!("h must be at least 3, got {h}")));
        }
        if degree < 2 {
            return Err(Error::Domain(format!("degree must be at least 2, got {degree}")));
        }
        let k_min = h / degree;
        if k_min < 1 {
            return Err(Error::Domain(format!("[h/degree] = [{h}/{degree}] must be at least 1")));
        }
        if k < k_min || k > h - 1 {
            return Err(Error::Domain(format!(
                "k = {k} outside [[h/degree], h-1] = [{k_min}, {}]",
                h - 1
            )));
        }
        Ok(BoundParams { h, delta, degree, k })
    }

    /// Cubic parameters with `k = [h/3]`.
    pub fn first(h: u32, delta: Delta) -> Result<Self> {
        Self::new(h, delta, 3, h / 3)
    }

    /// True when the box `[δ, s_max]` is empty or degenerate
    /// (`s_max <= δ`, equivalently `h·δ >= degree`), decided exactly.
    pub fn is_empty(&self) -> bool {
        u128::from(self.degree) * u128::from(self.delta.den) <= u128::from(self.h) * u128::from(self.delta.num)
    }

    /// Upper end of the relaxed box, `(deg - (k-1)δ)/(h-k+1)`.
    pub fn s_max(&self) -> f64 {
        let numer = self.degree as f64 * self.delta.den as f64 - (self.k as f64 - 1.0) * self.delta.num as f64;
        numer / ((self.h - self.k + 1) as f64 * self.delta.den as f64)
    }

    /// `ln(s_max/δ)` from an exact integer ratio; meaningful only when non-empty.
    pub fn log_box_ratio(&self) -> f64 {
        let numer = i128::from(self.degree) * i128::from(self.delta.den)
            - (i128::from(self.k) - 1) * i128::from(self.delta.num);
        let denom = i128::from(self.h - self.k + 1) * i128::from(self.delta.num);
        (numer as f64 / denom as f64).ln()
    }

    /// Right side of the non-extendability constraint, `(h-k-3)/(h-k-1)`.
    /// Requires `k <= h - 2`.
    pub fn lower_sum(&self) -> f64 {
        let a = self.h as f64 - self.k as f64 - 3.0;
        let b = self.h as f64 - self.k as f64 - 1.0;
        a / b
    }

    /// Whether `Σ s_i >= (h-k-3)/(h-k-1)` cuts into the box at all, i.e.
    /// whether it exceeds the smallest possible sum `k·δ`. Exact.
    pub fn lower_constraint_active(&self) -> bool {
        if self.k + 2 > self.h {
            return false;
        }
        let (h, k) = (i128::from(self.h), i128::from(self.k));
        let (num, den) = (i128::from(self.delta.num), i128::from(self.delta.den));
        (h - k - 3) * den > k * num * (h - k - 1)
    }
}

/// `(1/k!) (ln(s_max/δ))^k`: the integral of `∏ 1/s_i` over the ordered part
/// of `[δ, s_max]^k`. Zero for an empty box.
pub fn box_bound(p: &BoundParams) -> LogNumber {
    if p.is_empty() {
        return LogNumber::ZERO;
    }
    let k = u64::from(p.k);
    LogNumber::from_ln(k as f64 * p.log_box_ratio().ln() - LogNumber::ln_factorial(k).log_mag())
}

/// First estimate: `c(h, δ) = (1/k!) (ln((deg - (k-1)δ)/((h-k+1)δ)))^k` with
/// `k = [h/deg]`; zero once `h·δ >= deg`.
pub fn first_bound(h: u32, delta: Delta, degree: u32) -> Result<LogNumber> {
    if degree < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {degree}")));
    }
    let p = BoundParams::new(h, delta, degree, h / degree.max(1))?;
    Ok(box_bound(&p))
}

/// One tilted term of the second estimate, for `k <= h - 2`:
/// `exp(-α (h-k-3)/(h-k-1)) / k! · (∫_δ^{s_max} exp(αs)/s ds)^k`.
///
/// An empty box gives zero rather than an error.
pub fn second_bound_term(p: &BoundParams, alpha: f64, spec: &QuadratureSpec) -> Result<LogNumber> {
    check_tilt_params(p)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "tilt alpha must be finite and non-negative, got {alpha}"
        )));
    }
    if p.is_empty() {
        return Ok(LogNumber::ZERO);
    }
    Ok(LogNumber::from_ln(ln_tilted_term(p, alpha, spec)?))
}

pub(crate) fn check_tilt_params(p: &BoundParams) -> Result<()> {
    if p.degree != 3 {
        return Err(Error::Domain(format!(
            "the tilted bound is cubic-only, got degree {}",
            p.degree
        )));
    }
    if p.k + 2 > p.h {
        return Err(Error::Domain(format!(
            "tilted terms need k <= h-2 (k = {}, h = {}); use the box bound for k = K",
            p.k, p.h
        )));
    }
    Ok(())
}

/// Natural log of [`second_bound_term`] for a non-empty box.
pub(crate) fn ln_tilted_term(p: &BoundParams, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    let k = f64::from(p.k);
    let ln_integral = if alpha == 0.0 {
        p.log_box_ratio().ln()
    } else {
        ln_exp_integral(alpha, p.delta.value(), p.s_max(), spec)?
    };
    Ok(-alpha * p.lower_sum() - LogNumber::ln_factorial(u64::from(p.k)).log_mag() + k * ln_integral)
}

/// How the tilt parameters of the second estimate are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tilt {
    /// Minimise each term over `α` (see [`optimize_alpha`]).
    Optimize,
    /// Use the same fixed `α` for every term.
    Fixed(f64),
}

/// Result of [`second_bound`]: the total and its parts.
#[derive(Debug, Clone)]
pub struct SecondBound {
    pub h: u32,
    pub big_k: u32,
    /// Tilted terms for `k = [h/3], …, K-1`, ascending.
    pub tilts: Vec<TiltChoice>,
    /// Box-bound term for `k = K`.
    pub top_term: LogNumber,
    pub total: LogNumber,
}

/// Second estimate:
/// `Σ_{k=[h/3]}^{K-1} tilted term(k) + (1/K!)(ln((3-(K-1)δ)/((h-K+1)δ)))^K`,
/// for `[h/3] <= K <= h - 1`. Terms are summed in ascending `k`.
pub fn second_bound(
    h: u32,
    delta: Delta,
    big_k: u32,
    tilt: Tilt,
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<SecondBound> {
    let k_min = h / 3;
    if h < 3 || big_k < k_min || big_k + 1 > h {
        return Err(Error::Domain(format!(
            "K = {big_k} outside [[h/3], h-1] = [{k_min}, {}]",
            h.saturating_sub(1)
        )));
    }
    let ks: Vec<u32> = (k_min..big_k).collect();
    let tilts = exec
        .map(&ks, |&k| {
            let p = BoundParams::new(h, delta, 3, k)?;
            match tilt {
                Tilt::Optimize => optimize_alpha(&p, spec),
                Tilt::Fixed(alpha) => Ok(TiltChoice {
                    k,
                    alpha,
                    term_value: second_bound_term(&p, alpha, spec)?,
                    evaluations: 1,
                }),
            }
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let top_term = box_bound(&BoundParams::new(h, delta, 3, big_k)?);
    let total = tilts.iter().map(|t| t.term_value).sum::<LogNumber>() + top_term;
    Ok(SecondBound {
        h,
        big_k,
        tilts,
        top_term,
        total,
    })
}
