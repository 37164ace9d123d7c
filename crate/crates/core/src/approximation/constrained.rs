use alloc::vec::Vec;

use crate::cost::{stacked_dot, CostModel};
use crate::error::{Error, Result};
use crate::geometry::{stacked_norm_sq, Vec2};
use crate::math;
use crate::network::ReluNetwork;

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedResult {
    pub net: ReluNetwork,
    pub value: f64,
    /// Best value seen after each iteration (index 0 is the projected start).
    pub history: Vec<f64>,
    pub iterations: usize,
}

/// Radial projection onto `{|W| ≤ radius}`.
pub fn project_to_ball(weights: &[Vec2], radius: f64) -> Vec<Vec2> {
    let n = math::sqrt(stacked_norm_sq(weights));
    if n <= radius {
        weights.to_vec()
    } else {
        let s = radius / n;
        weights.iter().map(|&w| s * w).collect()
    }
}

/// Projected gradient descent on `Φ` inside `|W| ≤ radius` with Armijo backtracking along the
/// projection arc. The step grows by 2 after each accepted step; the best iterate is returned.
pub fn constrained_minimize(
    net0: &ReluNetwork,
    model: &CostModel,
    radius: f64,
    steps: usize,
) -> Result<ConstrainedResult> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param("radius", "must be positive and finite"));
    }
    let mut w = project_to_ball(&net0.weights, radius);
    let mut net = net0.with_weights(w.clone());
    let (mut f, mut g) = model.phi_and_grad(&net);
    let mut best = (f, w.clone());
    let mut history = alloc::vec![f];
    let mut step = 1.0;
    let mut iterations = 0;
    for _ in 0..steps {
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let trial: Vec<Vec2> = w.iter().zip(&g).map(|(&wi, &gi)| wi - step * gi).collect();
            let trial = project_to_ball(&trial, radius);
            let dw: Vec<Vec2> = trial.iter().zip(&w).map(|(&a, &b)| a - b).collect();
            let tn = net.with_weights(trial.clone());
            let ft = model.phi(&tn);
            if ft.is_finite() && ft <= f + ARMIJO * stacked_dot(&g, &dw) {
                accepted = Some((trial, tn, ft, stacked_norm_sq(&dw)));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, tn, ft, moved)) = accepted else {
            break;
        };
        iterations += 1;
        w = trial;
        net = tn;
        f = ft;
        if f < best.0 {
            best = (f, w.clone());
        }
        history.push(best.0);
        if moved <= 1e-30 * (1.0 + stacked_norm_sq(&w)) {
            break;
        }
        g = model.grad(&net);
        step *= 2.0;
    }
    Ok(ConstrainedResult {
        net: net0.with_weights(best.1),
        value: best.0,
        history,
        iterations,
    })
}
