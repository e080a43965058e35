//! Acceptance run: one PASS/FAIL line per criterion, with the individual
//! checks listed underneath. Runs without the libtest harness so the lines
//! are always printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use lpf_core::aggregate::{final_constants, weighted_tail, AggregateConfig, AggregateReport, Method};
use lpf_core::bounds::{
    box_bound, first_bound, optimize_alpha, region_integral_mc, second_bound, second_bound_term, BoundParams, Delta,
    Region, Tilt,
};
use lpf_core::empirical::{
    count_at_least, cube_roots_of_minus_two, empirical_t, factor_range, mertens_check, nu, nu_prime, omega_histogram,
    RangeJob, RootTable,
};
use lpf_core::quadrature::{exp_integral, QuadratureSpec};
use lpf_core::{Execution, LogNumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    pass: bool,
    what: String,
}

fn check(pass: bool, what: impl Into<String>) -> Check {
    Check {
        pass,
        what: what.into(),
    }
}

fn d321() -> Delta {
    Delta::new(1, 321).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn default_report() -> &'static AggregateReport {
    static REPORT: OnceLock<AggregateReport> = OnceLock::new();
    REPORT.get_or_init(|| final_constants(&AggregateConfig::default()).expect("default configuration runs"))
}

fn sci(v: LogNumber) -> String {
    v.to_string()
}

/// `∫_a^b e^{αs}/s ds = ln(b/a) + Σ_{n>=1} α^n (b^n - a^n) / (n·n!)`.
/// Every term is positive, so the series is summed without cancellation.
fn ei_series_difference(alpha: f64, a: f64, b: f64) -> f64 {
    let mut sum = (b / a).ln();
    let (mut ta, mut tb) = (1.0f64, 1.0f64);
    let mut n = 1.0f64;
    loop {
        ta *= alpha * a / n;
        tb *= alpha * b / n;
        let term = (tb - ta) / n;
        sum += term;
        if n > alpha * b && term <= sum * 1e-18 {
            break;
        }
        n += 1.0;
    }
    sum
}

/// `n^3 + 2 ≡ 0 (mod d)` counted over all residues.
fn nu_by_enumeration(d: u64) -> u64 {
    let d128 = u128::from(d);
    (0..d128).filter(|&n| (n * n % d128 * n + 2) % d128 == 0).count() as u64
}

fn trial_division(mut v: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= v {
        let mut e = 0;
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

fn criterion_1() -> Vec<Check> {
    let r = default_report();
    let t = r.tail_first.total;
    vec![
        check(
            r.tail_first.h_from == 190 && r.tail_first.h_to == 963 && r.tail_first.terms.len() == 774,
            format!(
                "first-estimate tail covers h = {}..={}",
                r.tail_first.h_from, r.tail_first.h_to
            ),
        ),
        check(
            t <= LogNumber::from_real(9.2e-10),
            format!("tail_first = {} <= 9.2e-10", sci(t)),
        ),
    ]
}

fn criterion_2() -> Vec<Check> {
    let r = default_report();
    let cfg = AggregateConfig::default();
    let ks_ok = r
        .tail_second
        .terms
        .iter()
        .all(|t| t.big_k == Some(t.h / 3 + 20) && t.tilts.len() == 20);
    let weights_ok = r.tail_second.terms.iter().all(|t| t.weight == u64::from(t.h));
    vec![
        check(
            r.tail_second.h_from == 133 && r.tail_second.h_to == 189 && ks_ok,
            "second-estimate tail covers h = 133..=189 with K = [h/3] + 20 and 20 optimised tilts each",
        ),
        check(weights_ok && cfg.weight(189) == 189, "weights are h on 133..=189"),
        check(
            r.tail_second.total <= LogNumber::from_real(3.6e-8),
            format!("tail_second = {} <= 3.6e-8", sci(r.tail_second.total)),
        ),
        check(
            r.tail_total <= LogNumber::from_real(3.7e-8),
            format!("tail_total = {} <= 3.7e-8", sci(r.tail_total)),
        ),
    ]
}

fn criterion_3() -> Vec<Check> {
    let r = default_report();
    let cfg = r.config;
    let Some(c) = r.constants() else {
        return vec![check(false, "default run produced no positive proportion")];
    };
    let back =
        LogNumber::pow2(i64::from(cfg.big_h)) * LogNumber::from_real(cfg.weight(cfg.big_h) as f64) * c.alpha_proportion
            + r.tail_total;
    let identity_err = back.relative_difference(LogNumber::from_real(cfg.s_lower));
    vec![
        check(
            c.alpha_proportion >= LogNumber::from_real(7.7e-50),
            format!("alpha = {} >= 7.7e-50", sci(c.alpha_proportion)),
        ),
        check(
            c.varpi >= LogNumber::from_real(1.2e-52),
            format!("varpi = {} >= 1.2e-52", sci(c.varpi)),
        ),
        check(
            c.varpi >= LogNumber::from_real(1e-52),
            format!("varpi = {} >= 1e-52", sci(c.varpi)),
        ),
        check(
            identity_err < 1e-9,
            format!("2^H min(H,321) alpha + tail_total = S_lower, relative error {identity_err:.2e}"),
        ),
    ]
}

fn criterion_4() -> Vec<Check> {
    let s = spec();
    let got = exp_integral(1.0, 1.0, 2.0, &s).unwrap();
    let oracle = ei_series_difference(1.0, 1.0, 2.0);
    let rel = (got - oracle).abs() / oracle;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..1000 {
        let a = 10f64.powf(rng.random_range(-2.5..-0.3));
        let b = (a * (1.0 + rng.random_range(0.05..2.0))).min(1.0);
        let alpha = rng.random_range(0.0..300.0 / b);
        let q = exp_integral(alpha, a, b, &s).unwrap();
        let e = ei_series_difference(alpha, a, b);
        let err = (q - e).abs() / e;
        worst = worst.max(err);
        if err > 1e-9 {
            failures += 1;
        }
    }
    vec![
        check(
            rel < 1e-10 && (got - 3.059_116_539_645_953).abs() < 1e-10 * got,
            format!("exp_integral(1, 1, 2) = {got:.15}, series oracle {oracle:.15}, relative error {rel:.2e}"),
        ),
        check(
            failures == 0,
            format!("1000 random (alpha, a, b) against the series: {failures} beyond 1e-9, worst {worst:.2e}"),
        ),
    ]
}

fn criterion_5() -> Vec<Check> {
    const SAMPLES: u64 = 1_000_000;
    let mut out = Vec::new();
    let mut cases = 0;
    let mut failed = Vec::new();
    let mut k1 = Vec::new();
    for den in [10u64, 20] {
        let delta = Delta::new(1, den).unwrap();
        for h in 3..=15u32 {
            for k in (h / 3).max(1)..=(h - 1).min(4) {
                let p = BoundParams::new(h, delta, 3, k).unwrap();
                let seed = den * 10_000 + u64::from(h) * 100 + u64::from(k) * 10;
                let box_value = box_bound(&p).to_real();
                let mut regions = vec![
                    (Region::FirstEstimate, box_value, 0u64),
                    (
                        Region::Maximal {
                            lower_constraint: false,
                        },
                        box_value,
                        1,
                    ),
                ];
                if k + 2 <= h {
                    let tilted = optimize_alpha(&p, &spec()).unwrap().term_value.to_real();
                    regions.push((Region::Maximal { lower_constraint: true }, tilted, 2));
                }
                for (region, bound, tag) in regions {
                    let mc = region_integral_mc(&p, region, SAMPLES, seed + tag, Execution::Parallel).unwrap();
                    cases += 1;
                    if !mc.dominated_by(bound, 3.0) {
                        failed.push(format!(
                            "h={h} k={k} 1/{den} {region:?}: {} +- {} vs {bound}",
                            mc.estimate, mc.std_error
                        ));
                    }
                    if k == 1 && region == Region::FirstEstimate {
                        k1.push((h, den, (mc.estimate - bound).abs() / mc.std_error));
                    }
                }
            }
        }
    }
    out.push(check(
        failed.is_empty(),
        format!(
            "{cases} Monte-Carlo cases dominated by their closed forms + 3 standard errors{}",
            if failed.is_empty() {
                String::new()
            } else {
                format!(": {failed:?}")
            }
        ),
    ));
    let worst = k1.iter().map(|x| x.2).fold(0.0, f64::max);
    out.push(check(
        !k1.is_empty() && worst <= 3.0,
        format!(
            "k = 1: {} cases agree with the closed form, worst |difference| = {worst:.2} standard errors",
            k1.len()
        ),
    ));
    out
}

fn criterion_6() -> Vec<Check> {
    let mut worse = Vec::new();
    let mut worst_ratio = 0.0f64;
    for h in 133..=189u32 {
        let sb = second_bound(h, d321(), h / 3 + 20, Tilt::Optimize, &spec(), Execution::Parallel).unwrap();
        let fb = first_bound(h, d321(), 3).unwrap();
        worst_ratio = worst_ratio.max((sb.total / fb).to_real());
        if sb.total >= fb {
            worse.push(h);
        }
    }
    vec![check(
        worse.is_empty(),
        format!("second < first on h = 133..=189 (largest ratio {worst_ratio:.3e}); violations: {worse:?}"),
    )]
}

fn criterion_7() -> Vec<Check> {
    let mut out = Vec::new();
    let job = RangeJob {
        x_min: 10,
        x_max: 20,
        threshold: 2,
        h: 3,
        segment_size: 4,
    };
    let oracle = (11u128..=20)
        .filter(|&n| trial_division(n * n * n + 2).iter().map(|f| f.1).sum::<u32>() >= 3)
        .count() as u64;
    let got = empirical_t(&job, Execution::Parallel).unwrap();
    out.push(check(
        got == oracle,
        format!("T on (10, 20], threshold 2, h = 3: {got}, trial division {oracle}"),
    ));

    let profiles = factor_range(
        &RangeJob {
            x_min: 0,
            x_max: 100_000,
            threshold: 2,
            h: 1,
            segment_size: 1 << 14,
        },
        Execution::Parallel,
    )
    .unwrap();
    let bad = profiles
        .iter()
        .filter(|p| p.product() != Some(u128::from(p.n).pow(3) + 2))
        .count();
    let ordered = profiles.iter().enumerate().all(|(i, p)| p.n == i as u64 + 1);
    out.push(check(
        bad == 0 && ordered && profiles.len() == 100_000,
        format!(
            "{} profiles over n <= 1e5 reconstruct n^3 + 2 ({bad} mismatches)",
            profiles.len()
        ),
    ));

    let primes = lpf_core::empirical::sieve::primes_up_to(100_000);
    let mismatches: Vec<u64> = Execution::Parallel
        .map(&primes, |&p| {
            let enumerated = nu_by_enumeration(p);
            let roots = cube_roots_of_minus_two(p).len() as u64;
            let ok = enumerated == roots
                && enumerated == u64::from(nu_prime(p))
                && matches!(enumerated, 0 | 1 | 3)
                && (p % 3 != 2 || enumerated == 1);
            (!ok).then_some(p)
        })
        .into_iter()
        .flatten()
        .collect();
    out.push(check(
        mismatches.is_empty(),
        format!(
            "nu(p) in {{0, 1, 3}}, = 1 for p = 2 mod 3, matching enumeration for all {} primes <= 1e5; mismatches {mismatches:?}",
            primes.len()
        ),
    ));
    out
}

fn criterion_8() -> Vec<Check> {
    let pts = mertens_check(&[1_000, 10_000, 100_000, 1_000_000], Execution::Parallel).unwrap();
    let mut out: Vec<Check> = pts
        .iter()
        .map(|p| {
            check(
                p.deviation.abs() <= 3.0,
                format!("x = {}: sum - ln x = {:.6}, |.| <= 3", p.x, p.deviation),
            )
        })
        .collect();
    let last = pts.last().unwrap();
    out.push(check(
        (last.mean_nu() - 1.0).abs() <= 0.02,
        format!(
            "mean nu(p) over p <= 1e6 = {:.5} ({} primes)",
            last.mean_nu(),
            last.prime_count
        ),
    ));
    out
}

fn logdomain_properties() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let mut perm_worst = 0.0f64;
    let mut commutes = true;
    for _ in 0..300 {
        let xs: Vec<LogNumber> = (0..20)
            .map(|_| LogNumber::from_ln(rng.random_range(-700.0..700.0)))
            .collect();
        let forward: LogNumber = xs.iter().copied().sum();
        let mut shuffled = xs.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let other: LogNumber = shuffled.iter().copied().sum();
        perm_worst = perm_worst.max(forward.relative_difference(other));
        let a = LogNumber::from_real(rng.random_range(-1e3..1e3));
        let b = LogNumber::from_real(rng.random_range(-1e3..1e3));
        commutes &= a.ln_add(b) == b.ln_add(a);
    }
    let mut dist_worst = 0.0f64;
    for _ in 0..1000 {
        let a = LogNumber::from_real(rng.random_range(-1e5..1e5));
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let b = LogNumber::from_real(sign * 10f64.powf(rng.random_range(-100.0..100.0)));
        let c = LogNumber::from_real(sign * 10f64.powf(rng.random_range(-100.0..100.0)));
        let lhs = a.ln_mul(b.ln_add(c));
        let rhs = a.ln_mul(b).ln_add(a.ln_mul(c));
        dist_worst = dist_worst.max(lhs.relative_difference(rhs));
    }
    let mut add_worst = 0.0f64;
    for _ in 0..1000 {
        let x = 10f64.powf(rng.random_range(-150.0..150.0));
        let y = x * 10f64.powf(rng.random_range(-299.0..299.0)).max(1e-299);
        let (x, y) = if y.is_finite() && y > 0.0 { (x, y) } else { (x, x) };
        let got = LogNumber::from_real(x).ln_add(LogNumber::from_real(y)).to_real();
        add_worst = add_worst.max((got - (x + y)).abs() / (x + y));
    }
    vec![
        check(commutes, "ln_add commutes exactly on 300 signed pairs"),
        check(
            perm_worst < 1e-9,
            format!("permuted sums of 20 terms agree, worst {perm_worst:.2e}"),
        ),
        check(
            dist_worst < 1e-9,
            format!("distributivity for same-sign b, c, worst {dist_worst:.2e}"),
        ),
        check(
            add_worst < 1e-12,
            format!("to_real(ln_add(x, y)) = x + y, worst {add_worst:.2e}"),
        ),
    ]
}

fn quadrature_properties() -> Vec<Check> {
    let s = spec();
    let mut rng = ChaCha8Rng::seed_from_u64(92);
    let (mut additive, mut monotone, mut bracketed) = (0.0f64, true, true);
    for _ in 0..300 {
        let a = rng.random_range(1.0 / 321.0..0.5);
        let c = rng.random_range(a + 0.01..1.0);
        let b = rng.random_range(a..c);
        let alpha = rng.random_range(0.0..500.0);
        let whole = exp_integral(alpha, a, c, &s).unwrap();
        let parts = exp_integral(alpha, a, b, &s).unwrap() + exp_integral(alpha, b, c, &s).unwrap();
        additive = additive.max((whole - parts).abs() / whole);
        let alpha2 = alpha + rng.random_range(1e-3..10.0);
        monotone &= exp_integral(alpha2, a, c, &s).unwrap() > whole;
        let log_ratio = (c / a).ln();
        bracketed &= log_ratio <= whole && whole <= (alpha * c).exp() * log_ratio;
    }
    vec![
        check(
            additive <= 10.0 * s.rel_tol,
            format!(
                "additivity over a split point, worst {additive:.2e} (10 rel_tol = {:.0e})",
                10.0 * s.rel_tol
            ),
        ),
        check(monotone, "strictly increasing in alpha on 300 random intervals"),
        check(
            bracketed,
            "ln(b/a) <= integral <= e^(alpha b) ln(b/a) on 300 random intervals",
        ),
    ]
}

fn bounds_properties() -> Vec<Check> {
    let mut out = Vec::new();
    let exact_k1 = (3..=5u32).all(|h| {
        let want = (3.0 / (f64::from(h) / 321.0)).ln();
        (first_bound(h, d321(), 3).unwrap().to_real() - want).abs() <= 1e-12 * want
    });
    out.push(check(
        exact_k1,
        "k = 1: first_bound(h, 1/321) = ln(3/(h delta)) for h = 3, 4, 5",
    ));

    let hs: Vec<u32> = (3..=963).collect();
    let reduction = Execution::Parallel.map(&hs, |&h| {
        let mut worst = 0.0f64;
        for k in (h / 3).max(1)..=h - 2 {
            let p = BoundParams::new(h, d321(), 3, k).unwrap();
            let tilted = second_bound_term(&p, 0.0, &spec()).unwrap();
            let closed = box_bound(&p);
            let diff = if closed.is_zero() && tilted.is_zero() {
                0.0
            } else {
                tilted.relative_difference(closed)
            };
            worst = worst.max(diff);
        }
        worst
    });
    let worst = reduction.iter().copied().fold(0.0, f64::max);
    out.push(check(
        worst < 1e-9,
        format!("tilted term at alpha = 0 equals the box closed form for all h <= 963, k <= h-2; worst {worst:.2e}"),
    ));
    out.push(check(true, "domination on the small grid: see criterion 5"));

    let fb: Vec<LogNumber> = hs.iter().map(|&h| first_bound(h, d321(), 3).unwrap()).collect();
    let rises: Vec<u32> = hs
        .windows(2)
        .zip(fb.windows(2))
        .filter(|(_, f)| f[1] > f[0])
        .map(|(h, _)| h[1])
        .collect();
    out.push(check(
        rises.is_empty(),
        format!("first_bound(h, 1/321) nonincreasing on 3..=963; increases at h = {rises:?}"),
    ));

    let r = default_report();
    let mut unsound = Vec::new();
    for term in &r.tail_second.terms {
        for t in &term.tilts {
            let p = BoundParams::new(term.h, d321(), 3, t.k).unwrap();
            let untilted = second_bound_term(&p, 0.0, &spec()).unwrap();
            if t.term_value > untilted * LogNumber::from_real(1.0 + 1e-9) {
                unsound.push((term.h, t.k));
            }
        }
    }
    out.push(check(
        unsound.is_empty(),
        format!("optimised tilts never above the alpha = 0 term on the default second tail; violations {unsound:?}"),
    ));

    let threshold = LogNumber::from_real(1e-10);
    let weighted: Vec<LogNumber> = hs
        .iter()
        .zip(&fb)
        .map(|(&h, &c)| LogNumber::from_real(f64::from(h.min(321))) * LogNumber::pow2(i64::from(h)) * c)
        .collect();
    let last_above = hs
        .iter()
        .zip(&weighted)
        .filter(|(_, w)| **w >= threshold)
        .map(|(h, _)| *h)
        .max();
    let h0 = last_above.map_or(3, |h| h + 1);
    out.push(check(
        h0 <= 190,
        format!("min(h,321) 2^h first_bound < 1e-10 for all h0 <= h <= 963 with h0 <= 190; smallest such h0 = {h0}"),
    ));
    out
}

fn aggregate_properties() -> Vec<Check> {
    let mut out = Vec::new();
    let cfg = AggregateConfig::default();
    for method in [Method::First, Method::Second] {
        let whole = weighted_tail(&cfg, 133, 963, method).unwrap().total;
        let parts =
            weighted_tail(&cfg, 133, 189, method).unwrap().total + weighted_tail(&cfg, 190, 963, method).unwrap().total;
        let rel = whole.relative_difference(parts);
        out.push(check(
            rel < 1e-9,
            format!(
                "{} tail over 133..=963 equals 133..=189 + 190..=963, relative {rel:.2e}",
                method.as_str()
            ),
        ));
    }
    out.push(check(
        cfg.weight(320) == 320 && cfg.weight(321) == 321 && cfg.weight(322) == 321 && cfg.weight(963) == 321,
        "min(h, [1/delta]) kinks at h = 321",
    ));
    let wide = AggregateConfig {
        big_h: 900,
        split_h: 901,
        h_max: 1000,
        ..cfg
    };
    let first = weighted_tail(&wide, 964, 1000, Method::First).unwrap();
    let second = weighted_tail(&wide, 964, 1000, Method::Second).unwrap();
    let all_zero = first.terms.iter().chain(&second.terms).all(|t| t.term.is_zero());
    out.push(check(
        all_zero && first.terms.len() == 37,
        "every term with h > 963 is exactly zero under both methods",
    ));
    let hs: Vec<u32> = (133..=963).collect();
    let worst = Execution::Parallel
        .map(&hs, |&h| {
            let sb = second_bound(h, d321(), h / 3, Tilt::Optimize, &spec(), Execution::Sequential).unwrap();
            let fb = first_bound(h, d321(), 3).unwrap();
            if sb.total.is_zero() && fb.is_zero() {
                0.0
            } else {
                sb.total.relative_difference(fb)
            }
        })
        .into_iter()
        .fold(0.0, f64::max);
    out.push(check(
        worst < 1e-9,
        format!("second estimate with K = [h/3] equals the first on 133..=963, worst {worst:.2e}"),
    ));
    out
}

fn empirical_properties() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(93);
    let mut pairs = Vec::new();
    while pairs.len() < 500 {
        let d1 = rng.random_range(2..1000u64);
        let d2 = rng.random_range(2..=1_000_000 / d1);
        let g = {
            let (mut a, mut b) = (d1, d2);
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        if g == 1 {
            pairs.push((d1, d2));
        }
    }
    let bad: Vec<(u64, u64)> = Execution::Parallel
        .map(&pairs, |&(d1, d2)| {
            let whole = nu_by_enumeration(d1 * d2);
            let ok = whole == nu_by_enumeration(d1) * nu_by_enumeration(d2)
                && nu(d1 * d2).unwrap() == whole
                && nu(d1).unwrap() * nu(d2).unwrap() == whole;
            (!ok).then_some((d1, d2))
        })
        .into_iter()
        .flatten()
        .collect();
    out.push(check(
        bad.is_empty(),
        format!("nu multiplicative on 500 random coprime pairs with d1 d2 <= 1e6; failures {bad:?}"),
    ));
    out.push(check(true, "nu(p) values for p <= 1e5: see criterion 7"));

    let mut monotone = true;
    for _ in 0..20 {
        let x_min = rng.random_range(0..100_000u64);
        let job = RangeJob {
            x_min,
            x_max: x_min + 2000,
            threshold: rng.random_range(2..200u128),
            h: 0,
            segment_size: 512,
        };
        let table = RootTable::build(job.x_max.max(1000), Execution::Parallel);
        let low = omega_histogram(&job, &table, Execution::Parallel).unwrap();
        let higher_t = RangeJob {
            threshold: job.threshold + rng.random_range(1..500u128),
            ..job
        };
        let high = omega_histogram(&higher_t, &table, Execution::Parallel).unwrap();
        for h in 0..8 {
            monotone &= count_at_least(&low, h + 1) <= count_at_least(&low, h);
            monotone &= count_at_least(&high, h) <= count_at_least(&low, h);
        }
    }
    out.push(check(
        monotone,
        "empirical T nonincreasing in h and threshold on 20 random windows",
    ));

    let base = RangeJob {
        x_min: 50_000,
        x_max: 55_000,
        threshold: 2,
        h: 1,
        segment_size: 5_000,
    };
    let reference = factor_range(&base, Execution::Sequential).unwrap();
    let independent = [1u64, 7, 64, 999, 4_999].iter().all(|&size| {
        factor_range(
            &RangeJob {
                segment_size: size,
                ..base
            },
            Execution::Parallel,
        )
        .unwrap()
            == reference
    });
    out.push(check(
        independent,
        "factor_range identical for segment sizes 1, 7, 64, 999, 4999, 5000",
    ));

    let job = RangeJob {
        x_min: 1_000_000,
        x_max: 2_000_000,
        threshold: 32,
        h: 0,
        segment_size: 1 << 16,
    };
    let table = RootTable::build(job.x_max, Execution::Parallel);
    let hist = omega_histogram(&job, &table, Execution::Parallel).unwrap();
    let quarter = Delta::new(1, 4).unwrap();
    let mut rows = Vec::new();
    let mut within = true;
    for h in 3..=12u32 {
        let ratio = count_at_least(&hist, h) as f64 / job.x_min as f64;
        let bound = first_bound(h, quarter, 3).unwrap().to_real();
        within &= ratio <= bound + 0.05;
        rows.push(format!("h={h}: {ratio:.6} vs {bound:.6}"));
    }
    out.push(check(
        within,
        format!(
            "X = 1e6, threshold 32 (delta = 1/4): T/X <= first_bound + 0.05; {}",
            rows.join(", ")
        ),
    ));
    out
}

fn criterion_9() -> Vec<Check> {
    let mut out = Vec::new();
    for (label, group) in [
        ("logdomain", logdomain_properties as fn() -> Vec<Check>),
        ("quadrature", quadrature_properties),
        ("bounds", bounds_properties),
        ("aggregate", aggregate_properties),
        ("empirical", empirical_properties),
    ] {
        out.extend(
            group()
                .into_iter()
                .map(|c| check(c.pass, format!("[{label}] {}", c.what))),
        );
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Vec<Check>); 9] = [
        ("tail bound from the first estimate", criterion_1),
        ("mid-range tail from the second estimate", criterion_2),
        ("final constants", criterion_3),
        ("quadrature against the Ei series", criterion_4),
        ("Monte-Carlo domination", criterion_5),
        ("second estimate sharper than the first", criterion_6),
        ("empirical counting exactness", criterion_7),
        ("prime sum of nu(p) ln p / p", criterion_8),
        ("property suite", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let checks = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            vec![check(false, format!("panicked: {msg}"))]
        });
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        for c in &checks {
            println!("      {} {}", if c.pass { "ok  " } else { "FAIL" }, c.what);
        }
        println!(
            "{} criterion {n}: {title} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
