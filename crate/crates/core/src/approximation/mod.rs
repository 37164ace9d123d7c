//! Constructive approximation: heat smoothing, the `L_al` split, step pairs, the universal
//! approximation construction, fixed-direction closure fits and the localization pipeline.

mod constrained;
mod fit;
mod heat;
mod lal;
mod localize;
mod step;
mod universal;

pub use constrained::{constrained_minimize, project_to_ball, ConstrainedResult};
pub use fit::{best_fixed_direction_fit, FitResult, SectorSlope, SlopeEntry};
pub use heat::{heat_smooth, heat_smooth_with_cutoff, HeatSmoothing};
pub use lal::{lal_decompose, LalDecomposition};
pub use localize::{
    h0, search_directions, smoothing_radius, thm2_pipeline, DirectionSearch, LocalizeBranch,
    LocalizationReport, LocalizeOptions,
};
pub use step::{step_error_closed_form, step_pair, StepPair};
pub use universal::{universal_approx, UniversalApprox};

/// A named inequality `lhs ≤ rhs + slack`, where `slack` bounds the rounding error of `lhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl BoundCheck {
    pub fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self::with_slack(name, lhs, rhs, 0.0)
    }

    pub fn with_slack(name: &'static str, lhs: f64, rhs: f64, slack: f64) -> Self {
        BoundCheck {
            name,
            lhs,
            rhs,
            slack,
        }
    }

    pub fn pass(&self) -> bool {
        self.lhs <= self.rhs + self.slack
    }
}
