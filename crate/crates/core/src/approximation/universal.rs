use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{PiecewiseTrig, Signal, Vec2};
use crate::math::{FRAC_PI_2, PI};
use crate::network::{ClosureElement, SignPattern};

use super::lal::lal_decompose;
use super::step::symmetric_step;

const LAL_TOL: f64 = 1e-10;

/// `g = g_l + g_s` approximating a target in `L_al`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalApprox {
    pub element: ClosureElement,
    /// Number of step intervals on `[0, π)`; zero when `m̲ < 3`.
    pub n: usize,
    pub linear: Vec2,
    pub bv: f64,
    /// `62‖y‖²_BV/m̲`.
    pub bound: f64,
    /// `‖g − y‖²₂`.
    pub error_sq: f64,
    /// `‖y^s − v_N‖²₂` for the sampled step function.
    pub step_error_sq: f64,
    /// `π²‖y‖²_BV/N` (infinite when `N = 0`).
    pub step_bound: f64,
}

impl UniversalApprox {
    pub fn pass(&self) -> bool {
        self.error_sq <= self.bound && self.step_error_sq <= self.step_bound
    }
}

/// Builds the linear part with one alternating pair and, for `m̲ ≥ 3`, the symmetric part as a
/// sum of `N = ⌊(m̲−1)/2⌋` step pairs sampling the right-continuous `y^s` at `kπ/N`. Shared
/// boundary directions of neighbouring steps are merged, so `N + 1` indicator terms are used.
pub fn universal_approx(y: &Signal, signs: &SignPattern) -> Result<UniversalApprox> {
    let mu = signs.underbar_m();
    if mu == 0 {
        return Err(Error::InsufficientPairs {
            needed: 1,
            available: 0,
        });
    }
    let lal = lal_decompose(y);
    let off = lal.y2.norm();
    if off > LAL_TOL {
        return Err(Error::param(
            "y",
            format!("not in L_al: anti-symmetric remainder has norm {off:e}"),
        ));
    }
    let l = lal.linear;
    let (ys, _) = y.sym_decompose();
    let n = if mu >= 3 { (mu - 1) / 2 } else { 0 };

    let mut j_terms: Vec<(Vec2, Vec2)> = Vec::new();
    let mut v_n = PiecewiseTrig::zero();
    if n > 0 {
        let h = PI / n as f64;
        let theta = |k: usize| if k == n { PI } else { h * k as f64 };
        let c: Vec<f64> = (0..n).map(|k| ys.eval(theta(k))).collect();
        let dir = |k: usize| Vec2::from_angle(theta(k) + 0.5 * h);
        for k in 0..=n {
            let mut v = Vec2::ZERO;
            if k < n {
                v = v + c[k] * dir(k);
            }
            if k > 0 {
                v = v - c[k - 1] * dir(k - 1);
            }
            if v != Vec2::ZERO {
                j_terms.push((Vec2::from_angle(theta(k) + FRAC_PI_2), v));
            }
        }
        for k in 0..n {
            v_n = v_n.add(&symmetric_step(theta(k), theta(k + 1), c[k]));
        }
    }
    let k_terms: Vec<(i8, Vec2)> = if l == Vec2::ZERO {
        Vec::new()
    } else {
        alloc::vec![(1, l), (-1, -l)]
    };
    let element = ClosureElement::from_function_terms(signs.clone(), &j_terms, &k_terms)?;
    let g: Signal = element.to_piecewise().into();
    let error_sq = g.sub(y).norm_sq().max(0.0);
    let step_error_sq = ys.sub(&v_n.into()).norm_sq().max(0.0);
    let bv = y.bv_norm().bv;
    Ok(UniversalApprox {
        element,
        n,
        linear: l,
        bv,
        bound: 62.0 * bv * bv / mu as f64,
        error_sq,
        step_error_sq,
        step_bound: if n == 0 { f64::INFINITY } else { PI * PI * bv * bv / n as f64 },
    })
}
