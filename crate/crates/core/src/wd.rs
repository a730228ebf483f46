//! The ball-overlap constant `w_d` and its inversion.
//!
//! `w_d` is the probability that two independent uniform points of the unit
//! ball in `R^d` are within distance one of each other. It equals
//! `(3/2) P{β(1/2, (d+1)/2) ≥ 1/4}` and decreases strictly to zero, so an
//! estimate of `w_d` pins down `d`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::specfun::{reg_inc_beta, reg_inc_beta_upper, RegBetaParams};

/// Default ceiling for dimension searches.
pub const DEFAULT_DIMENSION_CAP: u32 = 4096;

/// Largest dimension `wd` accepts. Past roughly 4900 the constant underflows
/// `f64` and the sequence is no longer strictly decreasing in floating point.
pub const MAX_DIMENSION: u32 = 4096;

fn check_dimension(d: u32) -> Result<()> {
    if d == 0 || d > MAX_DIMENSION {
        return domain(format!("dimension must lie in [1, {MAX_DIMENSION}], got {d}"));
    }
    Ok(())
}

fn half_shape(d: u32) -> f64 {
    (f64::from(d) + 1.0) / 2.0
}

/// `w_d = (3/2) (1 − I_{1/4}(1/2, (d+1)/2))`.
pub fn wd(d: u32) -> Result<f64> {
    check_dimension(d)?;
    let tail = reg_inc_beta_upper(RegBetaParams::new(0.5, half_shape(d), 0.25)?)?;
    Ok(1.5 * tail)
}

/// `w_d` through the two-term representation
/// `I_{1/4}((d+1)/2, (d+1)/2) + (1 − I_{1/4}(1/2, (d+1)/2))`.
///
/// Only used to cross-check [`wd`].
pub fn wd_sum_form(d: u32) -> Result<f64> {
    check_dimension(d)?;
    let s = half_shape(d);
    let symmetric = reg_inc_beta(RegBetaParams::new(s, s, 0.25)?)?;
    let tail = reg_inc_beta_upper(RegBetaParams::new(0.5, s, 0.25)?)?;
    Ok(symmetric + tail)
}

/// Result of inverting a statistic to a dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    /// The dimension `d` in `[1, cap]` minimizing `|W − w_d|`.
    pub delta: u32,
    /// The statistic, clamped to `[0, 1]`.
    pub statistic: f64,
    /// Number of `w_d` evaluations the search performed.
    pub evaluations: u32,
    /// Whether the statistic fell at or beyond `w_1` or `w_cap`.
    pub clamped: bool,
}

/// Per-call memo so each `w_d` is evaluated at most once.
struct Evaluator {
    seen: Vec<(u32, f64)>,
}

impl Evaluator {
    fn new() -> Self {
        Self { seen: Vec::with_capacity(32) }
    }

    fn get(&mut self, d: u32) -> Result<f64> {
        if let Some(&(_, v)) = self.seen.iter().find(|(k, _)| *k == d) {
            return Ok(v);
        }
        let v = wd(d)?;
        self.seen.push((d, v));
        Ok(v)
    }

    fn count(&self) -> u32 {
        self.seen.len() as u32
    }
}

/// Find the `d ∈ [1, cap]` minimizing `|W − w_d|`, ties toward smaller `d`.
///
/// The search doubles `d` until `w_d` drops to or below `W`, then bisects
/// the last doubling interval, so it costs `O(log d)` evaluations.
pub fn dim_from_stat(statistic: f64, cap: u32) -> Result<DimensionEstimate> {
    if statistic.is_nan() {
        return domain("cannot invert a NaN statistic");
    }
    check_dimension(cap)?;
    let w = statistic.clamp(0.0, 1.0);
    let mut eval = Evaluator::new();

    let done = |delta: u32, clamped: bool, eval: &Evaluator| DimensionEstimate {
        delta,
        statistic: w,
        evaluations: eval.count(),
        clamped,
    };

    if w >= eval.get(1)? {
        return Ok(done(1, true, &eval));
    }
    if w <= eval.get(cap)? {
        return Ok(done(cap, true, &eval));
    }

    // Invariant: w_lo > w > w_cap, and w_hi <= w once found.
    let mut lo = 1u32;
    let mut hi = 2u32.min(cap);
    while eval.get(hi)? > w {
        lo = hi;
        hi = hi.saturating_mul(2).min(cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eval.get(mid)? > w {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let above = eval.get(lo)? - w;
    let below = w - eval.get(hi)?;
    let delta = if below < above { hi } else { lo };
    Ok(done(delta, false, &eval))
}
