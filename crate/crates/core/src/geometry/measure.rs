use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// The data distribution on S¹ entering the cost.
#[derive(Debug, Clone, PartialEq)]
pub enum DataMeasure {
    Uniform,
    /// `(angle, weight)` atoms; weights are non-negative and sum to one.
    Discrete(Vec<(f64, f64)>),
}

impl DataMeasure {
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for &(t, w) in &atoms {
            if !t.is_finite() || !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("bad atom ({t}, {w})")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(DataMeasure::Discrete(
            atoms.into_iter().map(|(t, w)| (math::wrap(t), w)).collect(),
        ))
    }

    /// Equal weights on the given angles.
    pub fn equal_weights(angles: &[f64]) -> Result<Self> {
        let n = angles.len() as f64;
        Self::discrete(angles.iter().map(|&t| (t, 1.0 / n)).collect())
    }
}
