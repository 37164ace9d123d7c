//! Gradient flow, Langevin ensembles, a one-node Fokker–Planck solver and the Poincaré
//! constant certificate.

mod certificate;
mod divergence;
mod flow;
mod fokker_planck;
mod langevin;

pub use certificate::{poincare_certificate, CertCheck, PoincareCertificate, Regime};
pub use divergence::{divergence_experiment, divergence_setup, DivergenceReport, STRUCTURE_TOL};
pub use flow::{gradient_flow, FlowConfig, FlowSample, Integrator, Trajectory};
pub use fokker_planck::{fokker_planck_1node, FpConfig, FpInit, FpReport};
pub use langevin::{
    aggregate, langevin_ensemble, run_trajectory, stationary_norm_histogram, EnsembleStats,
    Histogram, InitSampler, LangevinConfig, Marginal, MarginalKind, Record, Snapshot,
    TrajectoryOutput,
};
