use alloc::format;

use crate::error::{Error, Result};
use crate::geometry::{Signal, TrigSeries};
use crate::math;

use super::BoundCheck;

const TAIL_BUDGET: f64 = 1e-14;
const MAX_CUTOFF: usize = 1 << 14;

/// The heat-smoothed target `y_r` with the three bounds it is expected to satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSmoothing {
    pub r: usize,
    pub cutoff: usize,
    pub y_r: TrigSeries,
    /// `‖y‖_BV` of the input.
    pub bv: f64,
    pub sup_y: f64,
    pub sup_yr: f64,
    pub c1_yr: f64,
    /// `‖y − y_r‖²₂` from Parseval over `k ≤ K` plus the exact remainder `‖y‖² − Σ_{k≤K}`.
    pub error_sq: f64,
    /// Envelope bound on the damped coefficients dropped beyond the cutoff.
    pub tail_bound: f64,
    pub checks: [BoundCheck; 3],
}

impl HeatSmoothing {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(BoundCheck::pass)
    }
}

/// Heat smoothing with the default cutoff `K = max(64, 8r)`.
pub fn heat_smooth(y: &Signal, r: usize) -> Result<HeatSmoothing> {
    heat_smooth_with_cutoff(y, r, (8 * r).max(64))
}

/// `y_r(θ) = Σ_{k≤K} (a_k sin kθ + b_k cos kθ) e^{−k²/r²}`. The cutoff is doubled until the
/// Fourier envelope `|a_k|, |b_k| ≤ 2‖y‖_BV/k` certifies a damped tail below `1e-14`.
pub fn heat_smooth_with_cutoff(y: &Signal, r: usize, cutoff: usize) -> Result<HeatSmoothing> {
    if r == 0 {
        return Err(Error::param("r", "must be at least 1"));
    }
    let bvn = y.bv_norm();
    let bv = bvn.bv;
    let rf = r as f64;
    let mut k = cutoff.max(1);
    // Σ_{k>K} 8bv²/k² e^{−2k²/r²} ≤ 8bv² e^{−2K²/r²} / K
    let tail = |k: usize| {
        let kf = k as f64;
        8.0 * bv * bv * math::exp(-2.0 * kf * kf / (rf * rf)) / kf
    };
    while tail(k) >= TAIL_BUDGET {
        if k >= MAX_CUTOFF {
            return Err(Error::CheckFailed(format!(
                "heat tail {} above budget at cutoff {k}",
                tail(k)
            )));
        }
        k *= 2;
    }
    let (a, b) = y.fourier(k);
    let mut da = a.clone();
    let mut db = b.clone();
    let mut kept = b[0] * b[0];
    let mut damped_err = 0.0;
    for j in 1..=k {
        let jf = j as f64;
        let d = math::exp(-jf * jf / (rf * rf));
        da[j] *= d;
        db[j] *= d;
        let e = a[j] * a[j] + b[j] * b[j];
        kept += 0.5 * e;
        damped_err += 0.5 * (1.0 - d) * (1.0 - d) * e;
    }
    let remainder = (y.norm_sq() - kept).max(0.0);
    let error_sq = damped_err + remainder;
    // rounding bound for evaluating the series at a point: the harmonic recurrence loses
    // about 3ε per step and is re-anchored every 64 steps
    let abs_sum: f64 = da.iter().chain(db.iter()).map(|c| c.abs()).sum();
    let eval_slack = (3.0 * 64.0 + 4.0) * f64::EPSILON * abs_sum;
    let y_r = TrigSeries::new(da, db);
    let smooth = Signal::from(y_r.clone());
    let sup_yr = smooth.sup_norm();
    let c1_yr = sup_yr + smooth.deriv_sup();
    let checks = [
        BoundCheck::with_slack("sup", sup_yr, bvn.sup, eval_slack),
        BoundCheck::new("c1", c1_yr, 5.0 * rf * bv),
        BoundCheck::new("l2", error_sq, 16.0 * bv * bv / rf),
    ];
    Ok(HeatSmoothing {
        r,
        cutoff: k,
        y_r,
        bv,
        sup_y: bvn.sup,
        sup_yr,
        c1_yr,
        error_sq,
        tail_bound: tail(k),
        checks,
    })
}
