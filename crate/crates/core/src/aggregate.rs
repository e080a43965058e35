//! From per-`h` coefficient bounds to the final proportion and exponent.
//!
//! With `W` the divisor-pair weight and `Ω_δ` the large-factor count,
//! `W <= min(Ω_δ, [1/δ]) 2^{Ω_δ}`, so the contribution of `Ω_δ > H` to the
//! weighted sum is at most `Σ_{h>H} min(h, [1/δ]) 2^h c(h, δ) X`. Removing it
//! from the lower bound `S_lower X` for the full sum and dividing by the
//! largest weight left, `2^H min(H, [1/δ])`, gives a proportion `α` of `n`
//! with `W > 0`, and with it the exponent `ϖ = αδ/2`.
//!
//! All `o(1)` terms are dropped: every constant here is the coefficient of
//! `X` as `X → ∞`.

use crate::bounds::{box_bound, first_bound, optimize_alpha, BoundParams, Delta, TiltChoice};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::logdomain::{LogNumber, Rounding};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    First,
    Second,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::First => "first",
            Method::Second => "second",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateConfig {
    pub delta: Delta,
    /// Weight cutoff `H`.
    pub big_h: u32,
    /// First `h` handled by the first estimate alone.
    pub split_h: u32,
    pub h_max: u32,
    /// `K = [h/3] + k_offset`, clamped to `h - 1`.
    pub k_offset: u32,
    /// Lower bound for the full weighted sum, as a coefficient of `X`.
    pub s_lower: f64,
    pub quadrature: QuadratureSpec,
    pub execution: Execution,
}

impl Default for AggregateConfig {
    fn default() -> Self {
        AggregateConfig {
            delta: Delta::new(1, 321).expect("1/321 is a valid delta"),
            big_h: 132,
            split_h: 190,
            h_max: 963,
            k_offset: 20,
            s_lower: 9.2e-8,
            quadrature: QuadratureSpec::default(),
            execution: Execution::Parallel,
        }
    }
}

impl AggregateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.big_h < 1 {
            return Err(Error::Domain("H must be at least 1".into()));
        }
        if self.big_h + 1 < 3 {
            return Err(Error::Domain(
                "H must be at least 2 so that every tail h is >= 3".into(),
            ));
        }
        if !(self.big_h < self.split_h && self.split_h <= self.h_max + 1) {
            return Err(Error::Domain(format!(
                "need H < split <= h_max + 1, got H = {}, split = {}, h_max = {}",
                self.big_h, self.split_h, self.h_max
            )));
        }
        if self.k_offset < 1 {
            return Err(Error::Domain("K offset must be at least 1".into()));
        }
        if !(self.s_lower.is_finite() && self.s_lower >= 0.0) {
            return Err(Error::Domain(format!(
                "S_lower must be finite and non-negative, got {}",
                self.s_lower
            )));
        }
        self.quadrature.validate()
    }

    /// `K` used by the second estimate at this `h`.
    pub fn big_k(&self, h: u32) -> u32 {
        (h / 3 + self.k_offset).min(h - 1)
    }

    /// `min(h, [1/δ])`.
    pub fn weight(&self, h: u32) -> u64 {
        u64::from(h).min(self.delta.recip_floor())
    }
}

/// One summand `min(h, [1/δ]) · 2^h · c(h, δ)` of a tail.
#[derive(Debug, Clone)]
pub struct TailTerm {
    pub h: u32,
    pub method: Method,
    /// `K` for the second estimate.
    pub big_k: Option<u32>,
    /// `c(h, δ)`.
    pub coefficient: LogNumber,
    /// `min(h, [1/δ])`.
    pub weight: u64,
    /// `weight · 2^h · coefficient`.
    pub term: LogNumber,
    /// Tilts behind a second-estimate coefficient, ascending in `k`.
    pub tilts: Vec<TiltChoice>,
}

#[derive(Debug, Clone)]
pub struct Tail {
    pub h_from: u32,
    pub h_to: u32,
    pub method: Method,
    pub total: LogNumber,
    pub terms: Vec<TailTerm>,
}

fn weighted(cfg: &AggregateConfig, h: u32, coefficient: LogNumber) -> LogNumber {
    LogNumber::from_real(cfg.weight(h) as f64) * LogNumber::pow2(i64::from(h)) * coefficient
}

/// Per-`h` terms for `h_from..=h_to` with one method. Second-estimate tilt
/// optimisations are flattened over all `(h, k)` pairs before being spread
/// over workers.
fn tail_terms(cfg: &AggregateConfig, h_from: u32, h_to: u32, method: Method) -> Result<Vec<TailTerm>> {
    if h_from > h_to {
        return Ok(Vec::new());
    }
    let hs: Vec<u32> = (h_from..=h_to).collect();
    match method {
        Method::First => cfg
            .execution
            .map(&hs, |&h| {
                let c = first_bound(h, cfg.delta, 3)?;
                Ok(TailTerm {
                    h,
                    method,
                    big_k: None,
                    coefficient: c,
                    weight: cfg.weight(h),
                    term: weighted(cfg, h, c),
                    tilts: Vec::new(),
                })
            })
            .into_iter()
            .collect(),
        Method::Second => {
            let jobs: Vec<(u32, u32)> = hs
                .iter()
                .flat_map(|&h| (h / 3..cfg.big_k(h)).map(move |k| (h, k)))
                .collect();
            let mut tilts = cfg
                .execution
                .map(&jobs, |&(h, k)| {
                    optimize_alpha(&BoundParams::new(h, cfg.delta, 3, k)?, &cfg.quadrature)
                })
                .into_iter();
            hs.iter()
                .map(|&h| {
                    let big_k = cfg.big_k(h);
                    let choices = tilts
                        .by_ref()
                        .take((big_k - h / 3) as usize)
                        .collect::<Result<Vec<_>>>()?;
                    let top = box_bound(&BoundParams::new(h, cfg.delta, 3, big_k)?);
                    let c = choices.iter().map(|t| t.term_value).sum::<LogNumber>() + top;
                    Ok(TailTerm {
                        h,
                        method,
                        big_k: Some(big_k),
                        coefficient: c,
                        weight: cfg.weight(h),
                        term: weighted(cfg, h, c),
                        tilts: choices,
                    })
                })
                .collect()
        }
    }
}

fn sum_terms(terms: &[TailTerm]) -> LogNumber {
    terms.iter().map(|t| t.term).sum()
}

/// `Σ_{h=h_from}^{h_to} min(h, [1/δ]) 2^h c(h, δ)`, summed in ascending `h`.
/// An empty range (`h_from > h_to`) gives zero.
pub fn weighted_tail(cfg: &AggregateConfig, h_from: u32, h_to: u32, method: Method) -> Result<Tail> {
    cfg.validate()?;
    if h_from <= h_to && (h_from <= cfg.big_h || h_to > cfg.h_max) {
        return Err(Error::Domain(format!(
            "tail range {h_from}..={h_to} must satisfy H < h_from and h_to <= h_max ({}, {})",
            cfg.big_h, cfg.h_max
        )));
    }
    let terms = tail_terms(cfg, h_from, h_to, method)?;
    Ok(Tail {
        h_from,
        h_to,
        method,
        total: sum_terms(&terms),
        terms,
    })
}

/// The constants obtained when the margin `S_lower - tail` is positive.
#[derive(Debug, Clone, Copy)]
pub struct FinalConstants {
    /// Proportion `α` of `n` with a nonzero weight.
    pub alpha_proportion: LogNumber,
    /// `ϖ = α δ / 2`.
    pub varpi: LogNumber,
    /// `δ α^2`, the count coefficient for large prime ideal factors.
    pub large_factor_count: LogNumber,
}

/// The tail swallows the whole lower bound, so no positive proportion follows.
#[derive(Debug, Clone, Copy)]
pub struct NoPositiveProportion {
    pub s_lower: LogNumber,
    pub tail_total: LogNumber,
}

impl std::fmt::Display for NoPositiveProportion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "zero margin: S_lower = {} does not exceed the weighted tail {}",
            self.s_lower.to_scientific(17, Rounding::Nearest),
            self.tail_total.to_scientific(17, Rounding::Nearest)
        )
    }
}

#[derive(Debug, Clone)]
pub struct AggregateReport {
    pub config: AggregateConfig,
    /// Tail over `split_h..=h_max` from the first estimate.
    pub tail_first: Tail,
    /// Tail over `H+1..split_h-1` from the second estimate.
    pub tail_second: Tail,
    pub tail_total: LogNumber,
    /// `2^{-H} / min(H, [1/δ])`.
    pub chain_factor: LogNumber,
    pub outcome: std::result::Result<FinalConstants, NoPositiveProportion>,
}

impl AggregateReport {
    pub fn constants(&self) -> Option<&FinalConstants> {
        self.outcome.as_ref().ok()
    }

    pub fn varpi(&self) -> Option<LogNumber> {
        self.constants().map(|c| c.varpi)
    }

    /// All tail terms in ascending `h`.
    pub fn per_h_terms(&self) -> impl Iterator<Item = &TailTerm> {
        self.tail_second.terms.iter().chain(&self.tail_first.terms)
    }

    /// Two-significant-figure quotes: bounds rounded up, lower bounds down.
    pub fn quoted(&self) -> QuotedConstants {
        let up = |v: LogNumber| v.to_scientific(2, Rounding::Up);
        let down = |v: LogNumber| v.to_scientific(2, Rounding::Down);
        QuotedConstants {
            tail_first: up(self.tail_first.total),
            tail_second: up(self.tail_second.total),
            tail_total: up(self.tail_total),
            alpha_proportion: self.constants().map(|c| down(c.alpha_proportion)),
            varpi: self.constants().map(|c| down(c.varpi)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotedConstants {
    pub tail_first: String,
    pub tail_second: String,
    pub tail_total: String,
    pub alpha_proportion: Option<String>,
    pub varpi: Option<String>,
}

fn assemble(cfg: &AggregateConfig, tail_first: Tail, tail_second: Tail) -> AggregateReport {
    let tail_total = tail_first.total + tail_second.total;
    let chain_factor =
        LogNumber::pow2(-i64::from(cfg.big_h)) * LogNumber::from_real(1.0 / cfg.weight(cfg.big_h) as f64);
    let s_lower = LogNumber::from_real(cfg.s_lower);
    let margin = s_lower - tail_total;
    let outcome = if margin.is_positive() && cfg.s_lower > tail_total.to_real() {
        let alpha_proportion = chain_factor * margin;
        let half_delta =
            LogNumber::from_ln((cfg.delta.num() as f64).ln() - (cfg.delta.den() as f64).ln() - std::f64::consts::LN_2);
        let delta = LogNumber::from_real(cfg.delta.value());
        Ok(FinalConstants {
            alpha_proportion,
            varpi: alpha_proportion * half_delta,
            large_factor_count: delta * alpha_proportion * alpha_proportion,
        })
    } else {
        Err(NoPositiveProportion { s_lower, tail_total })
    };
    AggregateReport {
        config: *cfg,
        tail_first,
        tail_second,
        tail_total,
        chain_factor,
        outcome,
    }
}

/// Runs the whole chain for one configuration.
///
/// Computation errors are `Err`; a non-positive margin is reported in
/// [`AggregateReport::outcome`].
pub fn final_constants(cfg: &AggregateConfig) -> Result<AggregateReport> {
    cfg.validate()?;
    let tail_first = weighted_tail(cfg, cfg.split_h, cfg.h_max, Method::First)?;
    let tail_second = weighted_tail(cfg, cfg.big_h + 1, cfg.split_h - 1, Method::Second)?;
    Ok(assemble(cfg, tail_first, tail_second))
}

/// One report per `H` in `h_range`, with per-`H` failures kept in place.
///
/// Per-`h` terms are computed once for the widest range and re-summed for
/// each `H`, in the same ascending order [`final_constants`] uses, so each
/// entry matches a direct call exactly.
pub fn sweep_big_h(
    cfg: &AggregateConfig,
    h_range: std::ops::RangeInclusive<u32>,
) -> Vec<(u32, Result<AggregateReport>)> {
    let hs: Vec<u32> = h_range.collect();
    let Some(&lowest) = hs.iter().min() else {
        return Vec::new();
    };
    let shared = (|| -> Result<(Tail, Vec<TailTerm>)> {
        let probe = AggregateConfig { big_h: lowest, ..*cfg };
        probe.validate()?;
        let first = weighted_tail(cfg, cfg.split_h, cfg.h_max, Method::First)?;
        let second = tail_terms(cfg, lowest + 1, cfg.split_h - 1, Method::Second)?;
        Ok((first, second))
    })();

    hs.into_iter()
        .map(|big_h| {
            let entry_cfg = AggregateConfig { big_h, ..*cfg };
            let report = entry_cfg.validate().and_then(|()| {
                let (first, second_terms) = shared.as_ref().map_err(Clone::clone)?;
                let terms: Vec<TailTerm> = second_terms.iter().filter(|t| t.h > big_h).cloned().collect();
                let tail_second = Tail {
                    h_from: big_h + 1,
                    h_to: cfg.split_h - 1,
                    method: Method::Second,
                    total: sum_terms(&terms),
                    terms,
                };
                Ok(assemble(&entry_cfg, first.clone(), tail_second))
            });
            (big_h, report)
        })
        .collect()
}

/// A one-sided comparison against a published constant.
#[derive(Debug, Clone)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub value: Option<LogNumber>,
    pub target: f64,
    /// `true` for `value <= target`, `false` for `value >= target`.
    pub upper: bool,
    pub pass: bool,
}

/// The five published constants: three tail upper bounds and lower bounds
/// for `α` and `ϖ`.
pub fn reference_checks(report: &AggregateReport) -> Vec<ConstantCheck> {
    let le = |name, value: LogNumber, target: f64| ConstantCheck {
        name,
        value: Some(value),
        target,
        upper: true,
        pass: value <= LogNumber::from_real(target),
    };
    let ge = |name, value: Option<LogNumber>, target: f64| ConstantCheck {
        name,
        value,
        target,
        upper: false,
        pass: value.is_some_and(|v| v >= LogNumber::from_real(target)),
    };
    let constants = report.constants();
    vec![
        le("tail_first", report.tail_first.total, 9.2e-10),
        le("tail_second", report.tail_second.total, 3.6e-8),
        le("tail_total", report.tail_total, 3.7e-8),
        ge("alpha_proportion", constants.map(|c| c.alpha_proportion), 7.7e-50),
        ge("varpi", constants.map(|c| c.varpi), 1e-52),
    ]
}
