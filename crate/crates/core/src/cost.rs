//! The cost `Φ(W) = ‖f_W − y‖²_{L²(μ)}`, its penalization `Φ_R = max{Φ, 4(|W|² − R²)}` and
//! exact derivatives.

use alloc::vec::Vec;

use crate::geometry::{arc_intersections, half_circle, second_moment, DataMeasure, Signal, Vec2};
use crate::linalg::Matrix;
use crate::math::{self, PI, TAU};
use crate::network::ReluNetwork;

/// Which branch of the max defines `Φ_R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Cost,
    Penalty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub phi: f64,
    pub grad: Vec<Vec2>,
    pub phi_r: f64,
    pub grad_r: Vec<Vec2>,
    pub branch: Branch,
}

/// A target and data measure with the target's squared norm cached.
#[derive(Debug, Clone)]
pub struct CostModel {
    pub target: Signal,
    pub mu: DataMeasure,
    target_norm_sq: f64,
}

/// Symmetric 2×2 block `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Sym2 {
    pub(crate) xx: f64,
    pub(crate) xy: f64,
    pub(crate) yy: f64,
}

impl Sym2 {
    fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }
}

fn moment_of(start: f64, width: f64) -> Sym2 {
    let [xx, xy, yy] = second_moment(start, width);
    Sym2 { xx, xy, yy }
}

fn full_moment() -> Sym2 {
    Sym2 {
        xx: 0.5,
        xy: 0.0,
        yy: 0.5,
    }
}

/// Averaged second moment over the intersection of two arcs of width π (or the full circle
/// when a start is `None`).
pub(crate) fn pair_moment(a: Option<f64>, b: Option<f64>) -> Sym2 {
    match (a, b) {
        (None, None) => full_moment(),
        (Some(s), None) | (None, Some(s)) => moment_of(s, PI),
        (Some(s1), Some(s2)) => {
            let (parts, n) = arc_intersections(s1, PI, s2, PI);
            let mut acc = Sym2::default();
            for &(s, w) in &parts[..n] {
                let m = moment_of(s, w);
                acc.xx += m.xx;
                acc.xy += m.xy;
                acc.yy += m.yy;
            }
            acc
        }
    }
}

impl CostModel {
    pub fn new(target: impl Into<Signal>, mu: DataMeasure) -> Self {
        let target = target.into();
        let target_norm_sq = target.norm_sq_measure(&mu);
        CostModel {
            target,
            mu,
            target_norm_sq,
        }
    }

    pub fn uniform(target: impl Into<Signal>) -> Self {
        Self::new(target, DataMeasure::Uniform)
    }

    /// `‖y‖²_{L²(μ)}`.
    pub fn target_norm_sq(&self) -> f64 {
        self.target_norm_sq
    }

    pub fn phi(&self, net: &ReluNetwork) -> f64 {
        self.phi_and_grad(net).0
    }

    pub fn grad(&self, net: &ReluNetwork) -> Vec<Vec2> {
        self.phi_and_grad(net).1
    }

    pub fn phi_and_grad(&self, net: &ReluNetwork) -> (f64, Vec<Vec2>) {
        match &self.mu {
            DataMeasure::Uniform => self.uniform_phi_grad(net),
            DataMeasure::Discrete(atoms) => self.discrete_phi_grad(net, atoms),
        }
    }

    fn uniform_phi_grad(&self, net: &ReluNetwork) -> (f64, Vec<Vec2>) {
        let m = net.m();
        let inv = 1.0 / math::sqrt(m as f64);
        let starts: Vec<Option<f64>> = net.weights.iter().map(|&w| half_circle(w)).collect();
        let mut grad = Vec::with_capacity(m);
        let mut fnorm = 0.0;
        let mut cross = 0.0;
        for i in 0..m {
            // E_i = (1/2π)∫_{A_i} f x,  P_i = (1/2π)∫_{A_i} y x
            let mut e = Vec2::ZERO;
            for j in 0..m {
                if starts[j].is_none() {
                    continue;
                }
                let mij = pair_moment(starts[i], starts[j]);
                e = e + (net.signs.get(j) * inv) * mij.apply(net.weights[j]);
            }
            let p = match starts[i] {
                Some(s) => self.target.arc_projection(s, PI),
                None => self.target.arc_projection(0.0, TAU),
            };
            let p = Vec2::new(p[1], p[2]);
            let ai = net.signs.get(i);
            if starts[i].is_some() {
                fnorm += ai * inv * net.weights[i].dot(e);
                cross += ai * inv * net.weights[i].dot(p);
            }
            grad.push((2.0 * ai * inv) * (e - p));
        }
        let phi = (fnorm - 2.0 * cross + self.target_norm_sq).max(0.0);
        (phi, grad)
    }

    fn discrete_phi_grad(&self, net: &ReluNetwork, atoms: &[(f64, f64)]) -> (f64, Vec<Vec2>) {
        let m = net.m();
        let inv = 1.0 / math::sqrt(m as f64);
        let mut grad = alloc::vec![Vec2::ZERO; m];
        let mut terms = Vec::with_capacity(atoms.len());
        for &(t, wt) in atoms {
            let x = Vec2::from_angle(t);
            let r = net.eval(t) - self.target.eval(t);
            terms.push(wt * r * r);
            for (i, w) in net.weights.iter().enumerate() {
                if w.dot(x) >= 0.0 {
                    grad[i] = grad[i] + (2.0 * net.signs.get(i) * inv * wt * r) * x;
                }
            }
        }
        (math::pairwise_sum(&terms), grad)
    }

    /// `Φ_R` and its gradient; ties select the penalty branch.
    pub fn phi_r(&self, net: &ReluNetwork, r: f64) -> CostReport {
        let (phi, grad) = self.phi_and_grad(net);
        let v = 4.0 * (net.weight_norm_sq() - r * r);
        if phi > v {
            CostReport {
                phi,
                grad_r: grad.clone(),
                grad,
                phi_r: phi,
                branch: Branch::Cost,
            }
        } else {
            CostReport {
                phi,
                grad,
                phi_r: v,
                grad_r: net.weights.iter().map(|&w| 8.0 * w).collect(),
                branch: Branch::Penalty,
            }
        }
    }

    /// Exact Hessian of `Φ` under the uniform measure, ordered `(w_1x, w_1y, w_2x, …)`.
    ///
    /// Diagonal blocks include the term from the moving half-circle boundary; zero weights
    /// get only the moment block.
    pub fn hessian_uniform(&self, net: &ReluNetwork) -> Matrix {
        let m = net.m();
        let inv = 1.0 / math::sqrt(m as f64);
        let starts: Vec<Option<f64>> = net.weights.iter().map(|&w| half_circle(w)).collect();
        let mut h = Matrix::zeros(2 * m);
        for i in 0..m {
            for j in 0..m {
                let mij = pair_moment(starts[i], starts[j]);
                let c = 2.0 * net.signs.get(i) * net.signs.get(j) / m as f64;
                h.add_to(2 * i, 2 * j, c * mij.xx);
                h.add_to(2 * i, 2 * j + 1, c * mij.xy);
                h.add_to(2 * i + 1, 2 * j, c * mij.xy);
                h.add_to(2 * i + 1, 2 * j + 1, c * mij.yy);
            }
            let w = net.weights[i];
            if w != Vec2::ZERO {
                let n = w.norm();
                let perp = (1.0 / n) * w.perp();
                let phi = w.angle();
                let g = |t: f64| net.eval(t) - self.target.eval(t);
                let gsum = g(phi + 0.5 * PI) + g(phi - 0.5 * PI);
                let c = 2.0 * net.signs.get(i) * inv / TAU * gsum / n;
                h.add_to(2 * i, 2 * i, c * perp.x * perp.x);
                h.add_to(2 * i, 2 * i + 1, c * perp.x * perp.y);
                h.add_to(2 * i + 1, 2 * i, c * perp.x * perp.y);
                h.add_to(2 * i + 1, 2 * i + 1, c * perp.y * perp.y);
            }
        }
        h
    }
}

pub fn phi(net: &ReluNetwork, target: &Signal, mu: &DataMeasure) -> f64 {
    CostModel::new(target.clone(), mu.clone()).phi(net)
}

pub fn grad_phi(net: &ReluNetwork, target: &Signal, mu: &DataMeasure) -> Vec<Vec2> {
    CostModel::new(target.clone(), mu.clone()).grad(net)
}

pub fn phi_r_and_grad(net: &ReluNetwork, target: &Signal, mu: &DataMeasure, r: f64) -> CostReport {
    CostModel::new(target.clone(), mu.clone()).phi_r(net, r)
}

/// `⟨a, b⟩` for stacked weight vectors.
pub fn stacked_dot(a: &[Vec2], b: &[Vec2]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(*y)).sum()
}
