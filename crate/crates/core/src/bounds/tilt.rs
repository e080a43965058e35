use super::{check_tilt_params, ln_tilted_term, BoundParams};
use crate::error::Result;
use crate::logdomain::LogNumber;
use crate::quadrature::QuadratureSpec;

/// The coarse tilt grid is `{0} ∪ {2^j : MIN_EXP <= j <= MAX_EXP}`.
pub const ALPHA_GRID_MIN_EXP: i32 = -2;
pub const ALPHA_GRID_MAX_EXP: i32 = 14;

// A refined point must beat the grid by more than quadrature noise.
const IMPROVEMENT_MARGIN: f64 = 1e-12;
const GOLDEN_MAX_ITER: u32 = 200;

/// The tilt chosen for one `k`-term and the resulting term value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltChoice {
    pub k: u32,
    pub alpha: f64,
    pub term_value: LogNumber,
    /// Number of objective evaluations spent.
    pub evaluations: u32,
}

fn alpha_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((ALPHA_GRID_MIN_EXP..=ALPHA_GRID_MAX_EXP).map(|j| 2f64.powi(j)))
        .collect()
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
/// Returns `(x, f(x), evaluations)`.
fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64, u32)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    while hi - lo > tol && evaluations < GOLDEN_MAX_ITER {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    Ok(if fc < fd {
        (c, fc, evaluations)
    } else {
        (d, fd, evaluations)
    })
}

/// Picks `α >= 0` minimising the tilted `k`-term of the second estimate.
///
/// Scans the geometric grid, then refines with golden-section search between
/// the grid neighbours of the best point. The returned term is never above
/// the `α = 0` value, since zero is on the grid.
pub fn optimize_alpha(p: &BoundParams, spec: &QuadratureSpec) -> Result<TiltChoice> {
    check_tilt_params(p)?;
    if p.is_empty() {
        return Ok(TiltChoice {
            k: p.k,
            alpha: 0.0,
            term_value: LogNumber::ZERO,
            evaluations: 0,
        });
    }
    let objective = |alpha: f64| ln_tilted_term(p, alpha, spec);

    let grid = alpha_grid();
    let values = grid.iter().map(|&a| objective(a)).collect::<Result<Vec<f64>>>()?;
    let mut evaluations = grid.len() as u32;
    let best = (0..grid.len())
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("grid is non-empty");
    let (mut alpha, mut ln_value) = (grid[best], values[best]);

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    if hi > lo {
        let (x, fx, used) = golden_section(objective, lo, hi, 1e-8 * hi.max(1.0))?;
        evaluations += used;
        if fx < ln_value - IMPROVEMENT_MARGIN {
            alpha = x;
            ln_value = fx;
        }
    }
    Ok(TiltChoice {
        k: p.k,
        alpha,
        term_value: LogNumber::from_ln(ln_value),
        evaluations,
    })
}
