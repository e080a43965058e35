use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use lpf_core::aggregate::{final_constants, reference_checks, AggregateConfig};
use lpf_core::bounds::{
    box_bound, first_bound, optimize_alpha, region_integral_mc, second_bound, BoundParams, Region, Tilt,
};
use lpf_core::empirical::{
    count_at_least, decade_checkpoints, for_each_segment, mertens_check, nu, RangeJob, RootTable,
};
use lpf_core::logdomain::Rounding;
use lpf_core::quadrature::QuadratureSpec;
use lpf_core::{Error, Execution, LogNumber};
use serde_json::{json, Value};

use crate::document::{log_real, real, resolve_timestamp, Document, Manifest};
use crate::{
    emit, status_code, BoundCommand, Cli, Command, CountArgs, EmpiricalCommand, Failure, FirstArgs, Format, McArgs,
    McRegion, ReproduceArgs, SecondArgs,
};

const QUADRATURE_DEPTH: u32 = 60;

/// Invalid parameter combinations are usage errors; everything else is a
/// failed computation.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(msg) => Failure::Usage(msg),
            other => Failure::Computation(other.to_string()),
        }
    }
}

fn maybe_log(x: LogNumber) -> Value {
    if x.is_zero() {
        Value::Null
    } else {
        real(x.log10_mag())
    }
}

pub fn execute(command: &Command, cli: &Cli) -> Result<Document, Failure> {
    let timestamp = resolve_timestamp(cli.timestamp.as_deref()).map_err(Failure::Usage)?;
    let exec = Execution::Parallel;
    match command {
        Command::Bound(BoundCommand::First(a)) => bound_first(a, timestamp),
        Command::Bound(BoundCommand::Second(a)) => bound_second(a, timestamp, exec),
        Command::Bound(BoundCommand::Mc(a)) => bound_mc(a, timestamp, exec),
        Command::Reproduce(a) => reproduce(a, timestamp, exec, cli.quiet || cli.format == Format::Text),
        Command::Empirical(EmpiricalCommand::Count(a)) => empirical_count(a, timestamp, exec, cli.quiet),
        Command::Empirical(EmpiricalCommand::Mertens { limit }) => empirical_mertens(*limit, timestamp, exec),
        Command::Empirical(EmpiricalCommand::Nu { d }) => {
            let value = nu(*d)?;
            Ok(Document {
                manifest: Manifest::new("empirical nu", vec![("d", d.to_string())], None, timestamp),
                status: "ok".into(),
                result: json!({ "d": d, "nu": value }),
            })
        }
        Command::Replay { .. } => Err(Failure::Usage("replay cannot be nested".into())),
    }
}

fn bound_first(a: &FirstArgs, timestamp: String) -> Result<Document, Failure> {
    let value = first_bound(a.h, a.delta, a.degree)?;
    let k = a.h / a.degree;
    let empty = BoundParams::new(a.h, a.delta, a.degree, k)?.is_empty();
    Ok(Document {
        manifest: Manifest::new(
            "bound first",
            vec![
                ("h", a.h.to_string()),
                ("delta", a.delta.to_string()),
                ("degree", a.degree.to_string()),
            ],
            None,
            timestamp,
        ),
        status: "ok".into(),
        result: json!({
            "h": a.h,
            "delta": a.delta.to_string(),
            "degree": a.degree,
            "k": k,
            "empty": empty,
            "value": log_real(value),
            "log10_value": maybe_log(value),
        }),
    })
}

fn quadrature(rel_tol: f64) -> Result<QuadratureSpec, Failure> {
    Ok(QuadratureSpec::new(rel_tol, QUADRATURE_DEPTH)?)
}

fn bound_second(a: &SecondArgs, timestamp: String, exec: Execution) -> Result<Document, Failure> {
    if a.h < 3 {
        return Err(Failure::Usage(format!("h must be at least 3, got {}", a.h)));
    }
    let spec = quadrature(a.rel_tol)?;
    let big_k = (a.h / 3 + a.k_offset).min(a.h - 1);
    let tilt = match a.alpha {
        Some(alpha) => Tilt::Fixed(alpha),
        None => Tilt::Optimize,
    };
    let sb = second_bound(a.h, a.delta, big_k, tilt, &spec, exec)?;
    let first = first_bound(a.h, a.delta, 3)?;
    let mut params = vec![
        ("h", a.h.to_string()),
        ("delta", a.delta.to_string()),
        ("K-offset", a.k_offset.to_string()),
        ("rel-tol", a.rel_tol.to_string()),
    ];
    if let Some(alpha) = a.alpha {
        params.push(("alpha", alpha.to_string()));
    }
    let terms: Vec<Value> = sb
        .tilts
        .iter()
        .map(|t| {
            json!({
                "k": t.k,
                "alpha": real(t.alpha),
                "value": log_real(t.term_value),
                "evaluations": t.evaluations,
            })
        })
        .collect();
    Ok(Document {
        manifest: Manifest::new("bound second", params, None, timestamp),
        status: "ok".into(),
        result: json!({
            "h": a.h,
            "delta": a.delta.to_string(),
            "K": big_k,
            "tilt": if a.alpha.is_some() { "fixed" } else { "optimized" },
            "value": log_real(sb.total),
            "log10_value": maybe_log(sb.total),
            "first_bound": log_real(first),
            "sharper_than_first": sb.total < first,
            "top_term": log_real(sb.top_term),
            "terms": terms,
        }),
    })
}

fn bound_mc(a: &McArgs, timestamp: String, exec: Execution) -> Result<Document, Failure> {
    let p = BoundParams::new(a.h, a.delta, 3, a.k)?;
    let (region, closed_form, name) = match a.region {
        McRegion::First => (Region::FirstEstimate, box_bound(&p), "first"),
        McRegion::Maximal => (
            Region::Maximal {
                lower_constraint: false,
            },
            box_bound(&p),
            "maximal",
        ),
        McRegion::MaximalLower => (
            Region::Maximal { lower_constraint: true },
            optimize_alpha(&p, &QuadratureSpec::default())?.term_value,
            "maximal-lower",
        ),
    };
    let mc = region_integral_mc(&p, region, a.samples, a.seed, exec)?;
    Ok(Document {
        manifest: Manifest::new(
            "bound mc",
            vec![
                ("h", a.h.to_string()),
                ("k", a.k.to_string()),
                ("delta", a.delta.to_string()),
                ("region", name.to_string()),
                ("samples", a.samples.to_string()),
                ("seed", a.seed.to_string()),
            ],
            Some(a.seed),
            timestamp,
        ),
        status: "ok".into(),
        result: json!({
            "h": a.h,
            "k": a.k,
            "delta": a.delta.to_string(),
            "region": name,
            "samples": mc.samples,
            "estimate": real(mc.estimate),
            "std_error": real(mc.std_error),
            "closed_form": log_real(closed_form),
            "dominated_within_3_sigma": mc.dominated_by(closed_form.to_real(), 3.0),
        }),
    })
}

fn reproduce(a: &ReproduceArgs, timestamp: String, exec: Execution, quiet: bool) -> Result<Document, Failure> {
    let cfg = AggregateConfig {
        delta: a.delta,
        big_h: a.big_h,
        split_h: a.split,
        h_max: a.h_max,
        k_offset: a.k_offset,
        s_lower: a.s_lower,
        quadrature: quadrature(a.rel_tol)?,
        execution: exec,
    };
    let report = final_constants(&cfg)?;
    let checks = reference_checks(&report);
    let all_pass = checks.iter().all(|c| c.pass);
    let diagnostic = report.outcome.as_ref().err().map(|e| e.to_string());

    let check_rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            let relation = if c.upper { "<=" } else { ">=" };
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let target = LogNumber::from_real(c.target).to_scientific(2, Rounding::Nearest);
            let line = match (c.value, &diagnostic) {
                (Some(v), _) => format!("{verdict} {} = {v} {relation} {target}", c.name),
                (None, Some(d)) => format!("{verdict} {}: {d}", c.name),
                (None, None) => format!("{verdict} {}: no value", c.name),
            };
            json!({
                "name": c.name,
                "relation": relation,
                "target": target,
                "value": c.value.map(log_real),
                "pass": c.pass,
                "line": line,
            })
        })
        .collect();
    if !quiet {
        for row in &check_rows {
            eprintln!("{}", row["line"].as_str().unwrap_or_default());
        }
    }
    let terms: Vec<Value> = report
        .per_h_terms()
        .map(|t| {
            json!({
                "h": t.h,
                "method": t.method.as_str(),
                "K": t.big_k,
                "weight": t.weight,
                "coefficient": log_real(t.coefficient),
                "term": log_real(t.term),
            })
        })
        .collect();
    let constants = report.constants();
    let quoted = report.quoted();
    Ok(Document {
        manifest: Manifest::new(
            "reproduce",
            vec![
                ("delta", a.delta.to_string()),
                ("H", a.big_h.to_string()),
                ("split", a.split.to_string()),
                ("h-max", a.h_max.to_string()),
                ("K-offset", a.k_offset.to_string()),
                ("s-lower", a.s_lower.to_string()),
                ("rel-tol", a.rel_tol.to_string()),
            ],
            None,
            timestamp,
        ),
        status: if all_pass { "PASS" } else { "FAIL" }.into(),
        result: json!({
            "tail_first": log_real(report.tail_first.total),
            "tail_second": log_real(report.tail_second.total),
            "tail_total": log_real(report.tail_total),
            "chain_factor": log_real(report.chain_factor),
            "alpha_proportion": constants.map(|c| log_real(c.alpha_proportion)),
            "varpi": constants.map(|c| log_real(c.varpi)),
            "large_factor_count": constants.map(|c| log_real(c.large_factor_count)),
            "diagnostic": diagnostic,
            "quoted": {
                "tail_first": quoted.tail_first,
                "tail_second": quoted.tail_second,
                "tail_total": quoted.tail_total,
                "alpha_proportion": quoted.alpha_proportion,
                "varpi": quoted.varpi,
            },
            "per_h_terms": terms,
            "checks": check_rows,
        }),
    })
}

fn empirical_count(a: &CountArgs, timestamp: String, exec: Execution, quiet: bool) -> Result<Document, Failure> {
    let job = RangeJob {
        x_min: a.x_min,
        x_max: a.x_max,
        threshold: a.threshold,
        h: a.h,
        segment_size: a.segment_size,
    };
    job.validate()?;
    let table = match &a.cache {
        Some(path) => RootTable::load_or_build(path, job.sieve_limit(), exec)?,
        None => RootTable::build(job.sieve_limit(), exec),
    };
    let total = job.segments().len();
    let mut hist: Vec<u64> = Vec::new();
    for_each_segment(&job, &table, exec, |seg| {
        for p in &seg.profiles {
            let w = p.omega_above(job.threshold) as usize;
            if hist.len() <= w {
                hist.resize(w + 1, 0);
            }
            hist[w] += 1;
        }
        if !quiet {
            eprintln!("segment {}/{total}: ({}, {}]", seg.index + 1, seg.lo, seg.hi);
        }
        Ok(())
    })?;
    let count = count_at_least(&hist, job.h);
    Ok(Document {
        manifest: Manifest::new(
            "empirical count",
            vec![
                ("x-min", a.x_min.to_string()),
                ("x-max", a.x_max.to_string()),
                ("threshold", a.threshold.to_string()),
                ("h", a.h.to_string()),
                ("segment-size", a.segment_size.to_string()),
            ],
            None,
            timestamp,
        ),
        status: "ok".into(),
        result: json!({
            "x_min": a.x_min,
            "x_max": a.x_max,
            "threshold": a.threshold.to_string(),
            "h": a.h,
            "count": count,
            "omega_histogram": hist,
            "segments": total,
            "primes_sieved": table.entries().len(),
        }),
    })
}

/// Empirical envelope for `|Σ ν(p) ln p / p - ln x|`.
const MERTENS_ENVELOPE: f64 = 3.0;

fn empirical_mertens(limit: u64, timestamp: String, exec: Execution) -> Result<Document, Failure> {
    let points = mertens_check(&decade_checkpoints(limit), exec)?;
    let within = points.iter().all(|p| p.deviation.abs() <= MERTENS_ENVELOPE);
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "x": p.x,
                "sum": real(p.sum),
                "deviation": real(p.deviation),
                "prime_count": p.prime_count,
                "nu_sum": p.nu_sum,
                "mean_nu": real(p.mean_nu()),
            })
        })
        .collect();
    Ok(Document {
        manifest: Manifest::new("empirical mertens", vec![("limit", limit.to_string())], None, timestamp),
        status: if within { "ok" } else { "FAIL" }.into(),
        result: json!({
            "limit": limit,
            "envelope": real(MERTENS_ENVELOPE),
            "within_envelope": within,
            "points": rows,
        }),
    })
}

pub fn replay(cli: &Cli, file: &Path) -> Result<ExitCode, Failure> {
    let original =
        std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let saved: Document = serde_json::from_str(&original)
        .map_err(|e| Failure::Usage(format!("{} is not a result document: {e}", file.display())))?;
    let argv = std::iter::once("lpf".to_string()).chain(saved.manifest.argv());
    let inner = Cli::try_parse_from(argv).map_err(|e| Failure::Usage(format!("manifest does not parse: {e}")))?;
    let doc = execute(&inner.command, &inner)?;
    emit(cli, &doc)?;
    if doc.to_json() != original {
        return Err(Failure::Computation(format!(
            "regenerated document differs from {}",
            file.display()
        )));
    }
    if !cli.quiet {
        eprintln!("replay: identical to {}", file.display());
    }
    Ok(status_code(&doc))
}
