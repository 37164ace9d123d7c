//! Shallow ReLU networks on the unit circle: exact piecewise-trigonometric arithmetic, the
//! network class and its closure, the penalized cost, training dynamics and the constructive
//! approximation procedures, each paired with the explicit inequality it should satisfy.
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental functions go through
//! `libm`, so results are bitwise identical across platforms.

#![no_std]

extern crate alloc;

pub mod approximation;
pub mod corpus;
pub mod cost;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod math;
pub mod network;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use geometry::{
    arc_moments, sector_coercivity_constant, sectors, Arc, ArcMoments, BvNorm, DataMeasure,
    PiecewiseTrig, Signal, TrigPiece, TrigSeries, Vec2,
};
pub use network::{
    realization_bound, realize_closure, reorder_alternating, replicate, ClosureElement, JTerm,
    KTerm, ReluNetwork, Reordering, SignPattern,
};
pub use cost::{Branch, CostModel, CostReport};
