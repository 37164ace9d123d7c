use alloc::vec::Vec;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{DataMeasure, Vec2};
use crate::linalg::lu_solve;
use crate::math;
use crate::network::ReluNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Euler,
    /// Classical RK4; a step is halved while it changes which side of a data atom (or target
    /// breakpoint) some node lies on.
    Rk4KinkGuard,
    /// Backward Euler solved by Newton with the exact Hessian; steps are accepted only if
    /// `Φ` does not increase. Uniform measure only.
    ImplicitEuler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub record_every: usize,
    /// Factor applied to `dt` after every accepted step.
    pub dt_growth: f64,
    pub dt_max: f64,
}

impl FlowConfig {
    pub fn new(dt: f64, t_end: f64, integrator: Integrator) -> Self {
        FlowConfig {
            dt,
            t_end,
            integrator,
            record_every: 1,
            dt_growth: 1.0,
            dt_max: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::param("T", "must be positive and finite"));
        }
        if self.record_every == 0 {
            return Err(Error::param("record_every", "must be at least 1"));
        }
        if !(self.dt_growth >= 1.0) || !self.dt_growth.is_finite() {
            return Err(Error::param("dt_growth", "must be a finite number ≥ 1"));
        }
        if !(self.dt_max >= self.dt) {
            return Err(Error::param("dt_max", "must be at least dt"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub weights: Vec<Vec2>,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<FlowSample>,
    pub steps: usize,
    /// Number of step halvings by the kink guard or the implicit step control.
    pub halvings: usize,
    /// Step at which the state became non-finite; `samples` then ends at the last finite state.
    pub aborted: Option<usize>,
}

const MIN_DT_FACTOR: f64 = 1.0 / 1048576.0;

fn axpy(w: &[Vec2], s: f64, d: &[Vec2]) -> Vec<Vec2> {
    w.iter().zip(d).map(|(a, b)| *a + s * *b).collect()
}

fn all_finite(w: &[Vec2]) -> bool {
    w.iter().all(|v| v.is_finite())
}

/// Side of each (node, angle) pair, packed as booleans.
fn signature(w: &[Vec2], angles: &[f64]) -> Vec<bool> {
    let mut s = Vec::with_capacity(w.len() * angles.len());
    for v in w {
        for &t in angles {
            s.push(v.dot(Vec2::from_angle(t)) >= 0.0);
        }
    }
    s
}

fn kink_angles(model: &CostModel) -> Vec<f64> {
    match &model.mu {
        DataMeasure::Discrete(atoms) => atoms.iter().map(|a| a.0).collect(),
        DataMeasure::Uniform => model.target.jump_angles(0.0),
    }
}

fn rk4(model: &CostModel, net: &ReluNetwork, dt: f64) -> Vec<Vec2> {
    let w = &net.weights;
    let k1 = model.grad(net);
    let k2 = model.grad(&net.with_weights(axpy(w, -0.5 * dt, &k1)));
    let k3 = model.grad(&net.with_weights(axpy(w, -0.5 * dt, &k2)));
    let k4 = model.grad(&net.with_weights(axpy(w, -dt, &k3)));
    w.iter()
        .enumerate()
        .map(|(i, &v)| v - (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn residual_norm(f: &[f64]) -> f64 {
    math::sqrt(f.iter().map(|x| x * x).sum())
}

/// Solves `W' = W − dt ∇Φ(W')` by damped Newton; `None` if it does not converge.
fn implicit_step(model: &CostModel, net: &ReluNetwork, dt: f64) -> Option<Vec<Vec2>> {
    let n = 2 * net.m();
    let w0 = &net.weights;
    let resid = |w: &[Vec2]| -> Vec<f64> {
        let g = model.grad(&net.with_weights(w.to_vec()));
        let mut f = Vec::with_capacity(n);
        for i in 0..w.len() {
            f.push(w[i].x - w0[i].x + dt * g[i].x);
            f.push(w[i].y - w0[i].y + dt * g[i].y);
        }
        f
    };
    let mut w = w0.clone();
    let mut f = resid(&w);
    let scale = 1.0 + math::sqrt(crate::geometry::stacked_norm_sq(w0));
    for _ in 0..40 {
        let fn0 = residual_norm(&f);
        if fn0 <= 1e-13 * scale {
            return Some(w);
        }
        let mut j = model.hessian_uniform(&net.with_weights(w.clone()));
        for v in j.data.iter_mut() {
            *v *= dt;
        }
        for i in 0..n {
            j.add_to(i, i, 1.0);
        }
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let d = lu_solve(&j, &rhs)?;
        let dir: Vec<Vec2> = (0..net.m()).map(|i| Vec2::new(d[2 * i], d[2 * i + 1])).collect();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = axpy(&w, lambda, &dir);
            let fc = resid(&cand);
            if residual_norm(&fc) < fn0 {
                w = cand;
                f = fc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return if fn0 <= 1e-10 * scale { Some(w) } else { None };
        }
    }
    if residual_norm(&f) <= 1e-10 * scale {
        Some(w)
    } else {
        None
    }
}

/// Integrates `dW/dt = −∇Φ(W)` from `net0` up to `cfg.t_end`.
pub fn gradient_flow(net0: &ReluNetwork, model: &CostModel, cfg: &FlowConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if cfg.integrator == Integrator::ImplicitEuler && model.mu != DataMeasure::Uniform {
        return Err(Error::param(
            "integrator",
            "the implicit scheme needs the uniform-measure Hessian",
        ));
    }
    let angles = if cfg.integrator == Integrator::Rk4KinkGuard {
        kink_angles(model)
    } else {
        Vec::new()
    };
    let mut net = net0.clone();
    let mut phi = model.phi(&net);
    let mut t = 0.0;
    let mut dt = cfg.dt;
    let mut out = Trajectory {
        samples: alloc::vec![FlowSample { t, weights: net.weights.clone(), phi }],
        steps: 0,
        halvings: 0,
        aborted: None,
    };
    while t < cfg.t_end {
        let h0 = dt.min(cfg.t_end - t);
        let mut h = h0;
        let next = loop {
            let cand = match cfg.integrator {
                Integrator::Euler => Some(axpy(&net.weights, -h, &model.grad(&net))),
                Integrator::Rk4KinkGuard => {
                    let c = rk4(model, &net, h);
                    if h > cfg.dt * MIN_DT_FACTOR
                        && signature(&c, &angles) != signature(&net.weights, &angles)
                    {
                        None
                    } else {
                        Some(c)
                    }
                }
                Integrator::ImplicitEuler => implicit_step(model, &net, h).filter(|c| {
                    // Φ is a difference of terms of size ‖y‖², so allow rounding-level slack.
                    let slack = 1e-13 * (model.target_norm_sq() + phi);
                    all_finite(c) && model.phi(&net.with_weights(c.clone())) <= phi + slack
                }),
            };
            match cand {
                Some(c) => break Some(c),
                None if h > cfg.dt * MIN_DT_FACTOR => {
                    h *= 0.5;
                    out.halvings += 1;
                }
                None => break None,
            }
        };
        let Some(next) = next else {
            return Err(Error::CheckFailed(alloc::format!(
                "implicit step failed to converge at t = {t}"
            )));
        };
        if !all_finite(&next) {
            out.aborted = Some(out.steps + 1);
            return Ok(out);
        }
        net = net.with_weights(next);
        phi = model.phi(&net);
        t += h;
        out.steps += 1;
        if !phi.is_finite() {
            out.aborted = Some(out.steps);
            return Ok(out);
        }
        if h == h0 {
            dt = (dt * cfg.dt_growth).min(cfg.dt_max);
        }
        let last = t >= cfg.t_end;
        if out.steps.is_multiple_of(cfg.record_every) || last {
            out.samples.push(FlowSample { t, weights: net.weights.clone(), phi });
        }
    }
    Ok(out)
}
