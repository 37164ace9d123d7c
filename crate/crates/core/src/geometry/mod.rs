//! Arcs, vectors and exact integrals of degree-one trigonometric pieces.

mod arc;
mod measure;
mod piecewise;
mod sectors;
mod series;
mod signal;

pub use arc::{arc_moments, Arc, ArcMoments};
pub use measure::DataMeasure;
pub use piecewise::{BvNorm, PiecewiseTrig, TrigPiece};
pub use sectors::{sector_coercivity_constant, sectors, Sectors};
pub use series::TrigSeries;
pub use signal::Signal;

pub(crate) use arc::{arc_intersections, half_circle, second_moment};

use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

/// A vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };
    pub const E1: Vec2 = Vec2 { x: 1.0, y: 0.0 };
    pub const E2: Vec2 = Vec2 { x: 0.0, y: 1.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Point of the unit circle at angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = math::sin_cos(theta);
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    /// Angle in `[0, 2π)`; zero vector maps to 0.
    pub fn angle(self) -> f64 {
        math::wrap(math::atan2(self.y, self.x))
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// Squared Euclidean norm of a stacked weight vector.
pub fn stacked_norm_sq(ws: &[Vec2]) -> f64 {
    ws.iter().map(|w| w.norm_sq()).sum()
}
