//! Monte-Carlo estimates of `∫_R ∏ ds_i / s_i` over the exact bound regions.
//!
//! Points are drawn uniformly from the box `[δ, s_max]^k`, sorted, tested
//! against the region's constraints, and weighted by `∏ 1/s_i`. The regions
//! are the ordered parts of permutation-symmetric sets, so the box average is
//! divided by `k!`. Samples are drawn in fixed-size chunks, each with its own
//! ChaCha stream, so estimates are identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BoundParams;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::logdomain::LogNumber;

const CHUNK: u64 = 1 << 15;
pub const MAX_MC_DIMENSION: u32 = 8;
pub const MIN_MC_SAMPLES: u64 = 100_000;

/// Which exact region to integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `δ <= s_1 <= … <= s_k`, `s_1 + … + s_{k-1} + (h-k+1) s_k <= deg`.
    FirstEstimate,
    /// The first-estimate constraints plus `Σ s_i <= 1`, and, when
    /// `lower_constraint` is set, `Σ s_i >= (h-k-3)/(h-k-1)`.
    Maximal { lower_constraint: bool },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// True when `estimate <= bound + sigmas · std_error`.
    pub fn dominated_by(&self, bound: f64, sigmas: f64) -> bool {
        self.estimate <= bound + sigmas * self.std_error
    }
}

struct Constraints {
    cap_weight: f64,
    cap: f64,
    upper_sum: Option<f64>,
    lower_sum: Option<f64>,
}

impl Constraints {
    fn contains(&self, sorted: &[f64]) -> bool {
        let (last, rest) = sorted.split_last().expect("k >= 1");
        let rest_sum: f64 = rest.iter().sum();
        if rest_sum + self.cap_weight * last > self.cap {
            return false;
        }
        let total = rest_sum + last;
        if self.upper_sum.is_some_and(|u| total > u) {
            return false;
        }
        !self.lower_sum.is_some_and(|l| total < l)
    }
}

/// Unbiased estimate of the exact region integral with its standard error.
///
/// Requires `k <= 8` and at least `10^5` samples. An empty box yields `(0, 0)`.
pub fn region_integral_mc(
    p: &BoundParams,
    region: Region,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<McEstimate> {
    if p.k > MAX_MC_DIMENSION {
        return Err(Error::Domain(format!(
            "Monte-Carlo oracle supports k <= {MAX_MC_DIMENSION}, got {}",
            p.k
        )));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    if let Region::Maximal { lower_constraint } = region {
        if p.degree != 3 {
            return Err(Error::Domain("the maximal-product region is cubic-only".into()));
        }
        if lower_constraint && p.k + 2 > p.h {
            return Err(Error::Domain(format!(
                "lower constraint needs k <= h-2 (k = {}, h = {})",
                p.k, p.h
            )));
        }
    }
    if p.is_empty() {
        return Ok(McEstimate {
            estimate: 0.0,
            std_error: 0.0,
            samples,
        });
    }

    let constraints = Constraints {
        cap_weight: f64::from(p.h - p.k + 1),
        cap: f64::from(p.degree),
        upper_sum: matches!(region, Region::Maximal { .. }).then_some(1.0),
        lower_sum: matches!(region, Region::Maximal { lower_constraint: true }).then(|| p.lower_sum()),
    };
    let k = p.k as usize;
    let lo = p.delta.value();
    let hi = p.s_max();

    let chunks = samples.div_ceil(CHUNK) as usize;
    let partials = exec.map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let n = CHUNK.min(samples - c as u64 * CHUNK);
        let mut point = vec![0.0; k];
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..n {
            for s in point.iter_mut() {
                *s = rng.random_range(lo..hi);
            }
            point.sort_unstable_by(f64::total_cmp);
            if constraints.contains(&point) {
                let w = 1.0 / point.iter().product::<f64>();
                sum += w;
                sum_sq += w * w;
            }
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = partials.into_iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));

    let n = samples as f64;
    let scale = (hi - lo).powi(p.k as i32) / LogNumber::ln_factorial(u64::from(p.k)).to_real();
    let mean = sum / n;
    let variance = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate: scale * mean,
        std_error: scale * (variance / n).sqrt(),
        samples,
    })
}
