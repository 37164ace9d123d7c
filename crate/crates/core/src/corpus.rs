//! Reference targets on the circle: steps, clipped linear functions, trigonometric
//! polynomials and mixtures.

use alloc::vec::Vec;

use crate::geometry::{PiecewiseTrig, Signal, TrigSeries, Vec2};
use crate::math::{self, FRAC_PI_2, PI};

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub name: &'static str,
    pub signal: Signal,
    /// True when the anti-symmetric part is linear.
    pub in_lal: bool,
}

fn in_arc(theta: f64, start: f64, width: f64) -> bool {
    math::wrap(theta - start) < width
}

/// `I{x₂ ≥ 0} x₁`.
pub fn half_cos() -> PiecewiseTrig {
    PiecewiseTrig::from_breaks(alloc::vec![0.0, PI], |mid| {
        if mid < PI {
            [0.0, 1.0, 0.0]
        } else {
            [0.0; 3]
        }
    })
}

/// `σ(w·x)`.
pub fn relu(w: Vec2) -> PiecewiseTrig {
    let phi = w.angle();
    PiecewiseTrig::from_breaks(alloc::vec![phi - FRAC_PI_2, phi + FRAC_PI_2], |mid| {
        if w.dot(Vec2::from_angle(mid)) >= 0.0 {
            [0.0, w.x, w.y]
        } else {
            [0.0; 3]
        }
    })
}

/// Indicator of `[start, start + width)`.
pub fn indicator(start: f64, width: f64) -> PiecewiseTrig {
    PiecewiseTrig::from_breaks(alloc::vec![start, start + width], |mid| {
        if in_arc(mid, start, width) {
            [1.0, 0.0, 0.0]
        } else {
            [0.0; 3]
        }
    })
}

/// Piecewise constant with value `levels[i]` on `[edges[i], edges[i+1])` of `[0, π)`, repeated
/// on the antipodal half.
pub fn symmetric_levels(edges: &[f64], levels: &[f64]) -> PiecewiseTrig {
    let mut breaks: Vec<f64> = edges.to_vec();
    breaks.extend(edges.iter().map(|e| e + PI));
    PiecewiseTrig::from_breaks(breaks, |mid| {
        let t = if mid >= PI { mid - PI } else { mid };
        let i = edges.iter().rposition(|&e| e <= t).unwrap_or(edges.len() - 1);
        [levels[i], 0.0, 0.0]
    })
}

/// `clip(2x₁, −1, 1)`.
pub fn clipped_linear() -> PiecewiseTrig {
    let t = PI / 3.0;
    PiecewiseTrig::from_breaks(alloc::vec![-t, t, PI - t, PI + t], |mid| {
        let c = math::cos(mid);
        if c >= 0.5 {
            [1.0, 0.0, 0.0]
        } else if c <= -0.5 {
            [-1.0, 0.0, 0.0]
        } else {
            [0.0, 2.0, 0.0]
        }
    })
}

/// `|x₁|`.
pub fn abs_cos() -> PiecewiseTrig {
    PiecewiseTrig::from_breaks(alloc::vec![-FRAC_PI_2, FRAC_PI_2], |mid| {
        if math::cos(mid) >= 0.0 {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, -1.0, 0.0]
        }
    })
}

/// The twelve reference targets.
pub fn corpus() -> Vec<Target> {
    let sym_step = symmetric_levels(&[0.0, PI / 3.0], &[1.0, 0.0]);
    let levels = symmetric_levels(&[0.0, 0.7, 1.6, 2.5], &[1.0, -0.5, 0.25, 0.0]);
    let mixture = Signal::new(
        sym_step.scale(0.3).add_linear(Vec2::new(0.0, 0.2)),
        TrigSeries::cos_k(2, 0.5),
    );
    let relu_combo = relu(Vec2::new(1.0, 0.0))
        .sub(&relu(Vec2::new(0.0, 1.0)))
        .add(&PiecewiseTrig::constant(0.25));
    let t = |name, pw: PiecewiseTrig, in_lal| Target {
        name,
        signal: pw.into(),
        in_lal,
    };
    alloc::vec![
        t("half_cos", half_cos(), true),
        t("quarter_step", indicator(0.0, FRAC_PI_2), false),
        t("sym_step", sym_step, true),
        t("sign_x2", indicator(0.0, PI).scale(2.0).sub(&PiecewiseTrig::constant(1.0)), false),
        t("relu_x1", relu(Vec2::new(1.0, 0.0)), true),
        t("clipped_linear", clipped_linear(), false),
        t("abs_x1", abs_cos(), true),
        Target {
            name: "cos2",
            signal: TrigSeries::cos_k(2, 1.0).into(),
            in_lal: true,
        },
        Target {
            name: "sin3",
            signal: TrigSeries::sin_k(3, 1.0).into(),
            in_lal: false,
        },
        Target {
            name: "mixture",
            signal: mixture,
            in_lal: true,
        },
        t("levels", levels, true),
        t("relu_combo", relu_combo, true),
    ]
}
