//! Breakdown of cooling under fast driving.
//!
//! The cold-bath heat `Q4 = (hbar omega_1 / 2) (coth_1 - Q*_2 coth_2)` changes
//! sign when the expansion stroke's adiabaticity factor reaches
//! `Q*c = coth_1 / coth_2`. Faster strokes excite the oscillator more, so
//! there is a minimal stroke duration `t0c` below which the device heats
//! both baths. When `omega_1 / omega_2 <= T_cold / T_hot` no stroke cools,
//! however slow, and `t0c` diverges.
//!
//! With `omega_1 == omega_2` there is no stroke to time and every estimate
//! returns `t0c = 0` without the divergence flag.

use rayon::prelude::*;

use crate::adiabaticity::{qstar, QStarMode, DEFAULT_TOLERANCE};
use crate::error::{domain, Error, Result};
use crate::protocol::FrequencyProtocol;
use crate::scalar::bisect_decreasing;
use crate::special::coth_difference;
use crate::thermo::{CycleConfig, ReservoirPair};

/// Relative bracket width of [`critical_time_numeric`] when callers do not pick one.
pub const DEFAULT_WIDTH: f64 = 1e-6;

/// Scan exponents: candidate durations are `2^k / omega_1`.
pub const SCAN_EXPONENTS: std::ops::RangeInclusive<i32> = -20..=20;

/// `beta_cold omega_1` within this fraction of `beta_hot omega_2` counts as divergence.
const DIVERGENCE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownMethod {
    AnalyticLinear,
    AnalyticLinearSquared,
    NumericRootFind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownPoint {
    pub q_star_critical: f64,
    /// `+inf` when `diverged`.
    pub t0_critical: f64,
    pub method: BreakdownMethod,
    pub diverged: bool,
}

/// `coth(beta_cold hbar omega_1 / 2) / coth(beta_hot hbar omega_2 / 2)`.
pub fn critical_qstar(cfg: &CycleConfig, res: &ReservoirPair) -> Result<f64> {
    Ok(cfg.coth_cold(res)? / cfg.coth_hot(res)?)
}

/// `(coth_1, coth_2, coth_1 - coth_2, diverged)`. Divergence is decided
/// from `beta_cold omega_1 >= beta_hot omega_2` rather than from the coth
/// gap, which underflows deep in the quantum regime.
fn coth_pair(cfg: &CycleConfig, res: &ReservoirPair) -> Result<(f64, f64, f64, bool)> {
    let c1 = cfg.coth_cold(res)?;
    let c2 = cfg.coth_hot(res)?;
    let x1 = 0.5 * res.beta_cold() * cfg.hbar() * cfg.omega_1();
    let x2 = 0.5 * res.beta_hot() * cfg.hbar() * cfg.omega_2();
    Ok((c1, c2, coth_difference(x1, x2), x1 >= x2 * (1.0 - DIVERGENCE_GAP)))
}

fn analytic(
    cfg: &CycleConfig,
    res: &ReservoirPair,
    method: BreakdownMethod,
    span: f64,
    denominator: f64,
) -> Result<BreakdownPoint> {
    let (c1, c2, gap, diverged) = coth_pair(cfg, res)?;
    if span == 0.0 {
        return Ok(BreakdownPoint {
            q_star_critical: c1 / c2,
            t0_critical: 0.0,
            method,
            diverged: false,
        });
    }
    let t0_critical = if diverged {
        f64::INFINITY
    } else {
        (span * span * c2 / (denominator * gap)).sqrt()
    };
    Ok(BreakdownPoint {
        q_star_critical: c1 / c2,
        t0_critical,
        method,
        diverged,
    })
}

/// Lowest-order estimate for a ramp linear in `omega`:
/// `t0c^2 = (omega_2 - omega_1)^2 coth_2 / (8 omega_2^4 (coth_1 - coth_2))`.
pub fn critical_time_linear(cfg: &CycleConfig, res: &ReservoirPair) -> Result<BreakdownPoint> {
    let (w1, w2) = (cfg.omega_1(), cfg.omega_2());
    analytic(cfg, res, BreakdownMethod::AnalyticLinear, w2 - w1, 8.0 * w2.powi(4))
}

/// Lowest-order estimate for a ramp linear in `omega^2`:
/// `t0c^2 = (omega_2^2 - omega_1^2)^2 coth_2 / (32 omega_2^6 (coth_1 - coth_2))`.
pub fn critical_time_linear_squared(cfg: &CycleConfig, res: &ReservoirPair) -> Result<BreakdownPoint> {
    let (w1, w2) = (cfg.omega_1(), cfg.omega_2());
    analytic(
        cfg,
        res,
        BreakdownMethod::AnalyticLinearSquared,
        w2 * w2 - w1 * w1,
        32.0 * w2.powi(6),
    )
}

/// One evaluation of the expansion stroke during the scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub t0: f64,
    pub q_star: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericBreakdown {
    pub point: BreakdownPoint,
    /// Scan points evaluated before the first sign change, ascending in `t0`.
    /// Empty when the answer follows without integration.
    pub trace: Vec<ScanSample>,
}

/// Smallest stroke duration at which the cycle still cools, from the exact
/// `Q*` of the expansion stroke.
///
/// `family(t0)` must produce the expansion stroke `omega_2 -> omega_1` of
/// duration `t0`. Durations `2^k / omega_1`, `k = -20..=20`, are scanned in
/// ascending order until `Q*_2 - Q*c` first changes sign; that bracket is
/// bisected to relative width `width`. `Q*_2` is not monotonic in `t0`, so
/// cooling may revive in windows above the returned root; the trace shows
/// the scanned values.
pub fn critical_time_numeric<F>(
    family: F,
    cfg: &CycleConfig,
    res: &ReservoirPair,
    width: f64,
) -> Result<NumericBreakdown>
where
    F: Fn(f64) -> Result<FrequencyProtocol> + Sync,
{
    if !(width > 0.0 && width < 1.0) {
        return domain(format!("relative bracket width must lie in (0, 1), got {width}"));
    }
    let (c1, c2, _, diverged) = coth_pair(cfg, res)?;
    let q_crit = c1 / c2;
    let point = |t0_critical, diverged| BreakdownPoint {
        q_star_critical: q_crit,
        t0_critical,
        method: BreakdownMethod::NumericRootFind,
        diverged,
    };
    if cfg.omega_1() == cfg.omega_2() {
        return Ok(NumericBreakdown {
            point: point(0.0, false),
            trace: Vec::new(),
        });
    }
    if diverged {
        return Ok(NumericBreakdown {
            point: point(f64::INFINITY, true),
            trace: Vec::new(),
        });
    }

    let w1 = cfg.omega_1();
    let sudden = family(1.0 / w1)?.sudden_limit();
    if sudden <= q_crit {
        return Ok(NumericBreakdown {
            point: point(0.0, false),
            trace: Vec::new(),
        });
    }

    let excess = |t0: f64| -> Result<f64> {
        let protocol = family(t0)?;
        Ok(qstar(&protocol, QStarMode::Auto, DEFAULT_TOLERANCE)?.q_star)
    };

    let chunk = rayon::current_num_threads().clamp(2, 8);
    let grid: Vec<f64> = SCAN_EXPONENTS.map(|k| 2f64.powi(k) / w1).collect();
    let mut trace = Vec::new();
    let mut prev = (0.0, sudden);
    for block in grid.chunks(chunk) {
        let values = block
            .par_iter()
            .map(|&t0| excess(t0))
            .collect::<Result<Vec<f64>>>()?;
        for (&t0, &q_star) in block.iter().zip(&values) {
            trace.push(ScanSample { t0, q_star });
            if q_star <= q_crit {
                let g = |t: f64| -> Result<f64> {
                    if t == 0.0 {
                        Ok(sudden - q_crit)
                    } else {
                        Ok(excess(t)? - q_crit)
                    }
                };
                let (_, hi) = bisect_decreasing(g, prev.0, t0, width)?;
                return Ok(NumericBreakdown {
                    point: point(hi, false),
                    trace,
                });
            }
            prev = (t0, q_star);
        }
    }
    Err(Error::BracketFailure(grid[grid.len() - 1]))
}
