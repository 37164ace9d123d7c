use crate::error::{Error, Result};
use crate::geometry::{PiecewiseTrig, Signal, Vec2};
use crate::math::{self, FRAC_PI_2, PI};
use crate::network::{ClosureElement, SignPattern};

/// A four-node closure element approximating the symmetric step
/// `c·(I_{[θ₁,θ₂)} + I_{[θ₁+π,θ₂+π)})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPair {
    pub element: ClosureElement,
    pub target: PiecewiseTrig,
    /// `‖g − y‖²₂`, integrated from the pointwise difference `−2c sin²((θ−μ)/2)` on the support.
    pub error_sq: f64,
    /// The same distance from generic piecewise arithmetic on `g − y`.
    pub error_sq_piecewise: f64,
    /// `(c²/1000)(θ₂ − θ₁)⁵`.
    pub bound: f64,
}

impl StepPair {
    pub fn pass(&self) -> bool {
        self.error_sq <= self.bound
    }
}

/// `(2c²/π) ∫₀^{θ₀} (1 − cos θ)² dθ`, evaluated as `∫ 4 sin⁴(θ/2)` to avoid cancellation.
pub fn step_error_closed_form(theta0: f64, c: f64) -> f64 {
    let i = math::gauss_legendre(
        |t| {
            let s = math::sin(0.5 * t);
            4.0 * s * s * s * s
        },
        0.0,
        theta0,
        4,
    );
    2.0 * c * c / PI * i
}

/// Symmetric step of height `c` on `[t1, t2) ∪ [t1+π, t2+π)`.
pub(crate) fn symmetric_step(t1: f64, t2: f64, c: f64) -> PiecewiseTrig {
    let arc = |t: f64| math::wrap(t - t1) < t2 - t1;
    PiecewiseTrig::from_breaks(alloc::vec![t1, t2, t1 + PI, t2 + PI], |mid| {
        if arc(mid) || arc(mid - PI) {
            [c, 0.0, 0.0]
        } else {
            [0.0; 3]
        }
    })
}

/// Function-level terms `c·I{ŵ₁·x ≥ 0}(e_μ·x) − c·I{ŵ₂·x ≥ 0}(e_μ·x)` with `ŵ₁`, `ŵ₂` at
/// angles `θ₁ + π/2`, `θ₂ + π/2` and `μ` the midpoint.
pub(crate) fn step_terms(t1: f64, t2: f64, c: f64) -> [(Vec2, Vec2); 2] {
    let v = c * Vec2::from_angle(0.5 * (t1 + t2));
    [
        (Vec2::from_angle(t1 + FRAC_PI_2), v),
        (Vec2::from_angle(t2 + FRAC_PI_2), -v),
    ]
}

pub fn step_pair(theta1: f64, theta2: f64, c: f64) -> Result<StepPair> {
    let width = theta2 - theta1;
    if !(width > 0.0 && width < PI) || !c.is_finite() || !theta1.is_finite() {
        return Err(Error::param("theta", "need 0 < θ₂ − θ₁ < π and finite values"));
    }
    let signs = SignPattern::alternating(4)?;
    let terms = if c == 0.0 {
        alloc::vec::Vec::new()
    } else {
        step_terms(theta1, theta2, c).to_vec()
    };
    let element = ClosureElement::from_function_terms(signs, &terms, &[])?;
    let target = symmetric_step(theta1, theta2, c);
    let diff = Signal::from(element.to_piecewise().sub(&target));
    let error_sq = if c == 0.0 { 0.0 } else { step_error_closed_form(0.5 * width, c) };
    let w2 = width * width;
    Ok(StepPair {
        element,
        target,
        error_sq,
        error_sq_piecewise: diff.norm_sq(),
        bound: c * c / 1000.0 * w2 * w2 * width,
    })
}
