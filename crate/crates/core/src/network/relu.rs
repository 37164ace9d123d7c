use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{stacked_norm_sq, PiecewiseTrig, Vec2};
use crate::math::{self, FRAC_PI_2};

use super::SignPattern;

/// `f_W(x) = (1/√m) Σ a_i σ(w_i·x)` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ReluNetwork {
    pub signs: SignPattern,
    pub weights: Vec<Vec2>,
}

impl ReluNetwork {
    pub fn new(signs: SignPattern, weights: Vec<Vec2>) -> Result<Self> {
        if weights.len() != signs.m() {
            return Err(Error::InvalidNetwork(format!(
                "{} weights for {} signs",
                weights.len(),
                signs.m()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidNetwork("non-finite weight".into()));
        }
        Ok(ReluNetwork { signs, weights })
    }

    pub fn zeros(signs: SignPattern) -> Self {
        let m = signs.m();
        ReluNetwork {
            signs,
            weights: alloc::vec![Vec2::ZERO; m],
        }
    }

    pub fn m(&self) -> usize {
        self.weights.len()
    }

    /// `|W|²`, the squared norm of the stacked weights.
    pub fn weight_norm_sq(&self) -> f64 {
        stacked_norm_sq(&self.weights)
    }

    pub fn weight_norm(&self) -> f64 {
        math::sqrt(self.weight_norm_sq())
    }

    /// Direct evaluation at angle `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let x = Vec2::from_angle(theta);
        let s: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| self.signs.get(i) * w.dot(x).max(0.0))
            .sum();
        s / math::sqrt(self.m() as f64)
    }

    pub fn with_weights(&self, weights: Vec<Vec2>) -> Self {
        ReluNetwork {
            signs: self.signs.clone(),
            weights,
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        self.with_weights(self.weights.iter().map(|&w| lambda * w).collect())
    }

    /// Exact piecewise representation: node `i` adds `a_i w_i·x / √m` on its half-circle.
    pub fn to_piecewise(&self) -> PiecewiseTrig {
        let inv = 1.0 / math::sqrt(self.m() as f64);
        let mut breaks = Vec::new();
        for w in &self.weights {
            if *w != Vec2::ZERO {
                let phi = w.angle();
                breaks.push(phi - FRAC_PI_2);
                breaks.push(phi + FRAC_PI_2);
            }
        }
        PiecewiseTrig::from_breaks(breaks, |mid| {
            let x = Vec2::from_angle(mid);
            let mut c = [0.0; 3];
            for (i, w) in self.weights.iter().enumerate() {
                if *w != Vec2::ZERO && w.dot(x) >= 0.0 {
                    let a = self.signs.get(i) * inv;
                    c[1] += a * w.x;
                    c[2] += a * w.y;
                }
            }
            c
        })
    }
}
