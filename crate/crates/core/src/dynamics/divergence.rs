use alloc::vec::Vec;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{PiecewiseTrig, TrigPiece, Arc, Vec2};
use crate::math::{self, PI};
use crate::network::{ReluNetwork, SignPattern};

use super::flow::{gradient_flow, FlowConfig, Trajectory};

/// Tolerance for the structural identities of the gradient.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub trajectory: Trajectory,
    /// `b_t` in the unscaled parametrization `w = (±1/2, b)`, one per recorded sample.
    pub b: Vec<f64>,
    /// Common `e₂`-component of the gradient at each sample.
    pub c: Vec<f64>,
    pub max_e1_grad: f64,
    pub max_e2_mismatch: f64,
    pub b_increasing: bool,
    pub phi_decreasing: bool,
    pub final_norm: f64,
    /// First recorded time with `|W_t| > 10³`.
    pub time_above_1e3: Option<f64>,
}

impl DivergenceReport {
    pub fn structure_ok(&self) -> bool {
        self.max_e1_grad <= STRUCTURE_TOL
            && self.max_e2_mismatch <= STRUCTURE_TOL
            && self.b_increasing
            && self.phi_decreasing
            && self.trajectory.aborted.is_none()
    }
}

/// `m = 2`, `a = (+1, −1)`, `y = I{x₂ ≥ 0} x₁`, uniform measure, and
/// `W₀ = √2·((1/2, b₀), (−1/2, b₀))`.
pub fn divergence_setup(b0: f64) -> Result<(ReluNetwork, CostModel)> {
    if !(b0 >= 1.0) || !b0.is_finite() {
        return Err(Error::param("b0", "must be a finite number ≥ 1"));
    }
    let s = math::sqrt(2.0);
    let net = ReluNetwork::new(
        SignPattern::new(alloc::vec![1, -1])?,
        alloc::vec![Vec2::new(0.5 * s, b0 * s), Vec2::new(-0.5 * s, b0 * s)],
    )?;
    let y = PiecewiseTrig::from_pieces(alloc::vec![
        TrigPiece { arc: Arc::new(0.0, PI)?, c0: 0.0, c1: 1.0, c2: 0.0 },
        TrigPiece { arc: Arc::new(PI, PI)?, c0: 0.0, c1: 0.0, c2: 0.0 },
    ])?;
    Ok((net, CostModel::uniform(y)))
}

pub fn divergence_experiment(b0: f64, cfg: &FlowConfig) -> Result<DivergenceReport> {
    let (net, model) = divergence_setup(b0)?;
    let trajectory = gradient_flow(&net, &model, cfg)?;
    let s = math::sqrt(2.0);
    let mut b = Vec::with_capacity(trajectory.samples.len());
    let mut c = Vec::with_capacity(trajectory.samples.len());
    let mut max_e1 = 0.0f64;
    let mut max_mis = 0.0f64;
    let mut time_above = None;
    for smp in &trajectory.samples {
        let g = model.grad(&net.with_weights(smp.weights.clone()));
        max_e1 = max_e1.max(g[0].x.abs()).max(g[1].x.abs());
        max_mis = max_mis.max((g[0].y - g[1].y).abs());
        b.push(smp.weights[0].y / s);
        c.push(g[0].y);
        if time_above.is_none() && math::sqrt(crate::geometry::stacked_norm_sq(&smp.weights)) > 1e3 {
            time_above = Some(smp.t);
        }
    }
    let b_increasing = b.windows(2).all(|w| w[1] > w[0]);
    let phi_decreasing = trajectory.samples.windows(2).all(|w| w[1].phi <= w[0].phi);
    let final_norm = trajectory
        .samples
        .last()
        .map(|s| math::sqrt(crate::geometry::stacked_norm_sq(&s.weights)))
        .unwrap_or(0.0);
    Ok(DivergenceReport {
        trajectory,
        b,
        c,
        max_e1_grad: max_e1,
        max_e2_mismatch: max_mis,
        b_increasing,
        phi_decreasing,
        final_norm,
        time_above_1e3: time_above,
    })
}
