use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{PiecewiseTrig, Vec2};
use crate::math::{self, FRAC_PI_2};

use super::{ReluNetwork, SignPattern};

/// Indicator-linear term `I{ŵ·x ≥ 0}(v·x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JTerm {
    pub w_hat: Vec2,
    pub v: Vec2,
}

impl JTerm {
    /// `(α, u)` with `v = α ŵ + u` and `u ⊥ ŵ`.
    pub fn split(&self) -> (f64, Vec2) {
        let alpha = self.v.dot(self.w_hat);
        (alpha, self.v - alpha * self.w_hat)
    }
}

/// ReLU term `a σ(w·x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KTerm {
    pub a: i8,
    pub w: Vec2,
}

/// An element of the closure of `H_{m,a}`:
/// `g(x) = (1/√m)[Σ_J I{ŵ_i·x ≥ 0}(v_i·x) + Σ_K a_i σ(w_i·x)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureElement {
    pub signs: SignPattern,
    pub j_terms: Vec<JTerm>,
    pub k_terms: Vec<KTerm>,
}

const UNIT_TOL: f64 = 1e-9;

impl ClosureElement {
    pub fn new(signs: SignPattern, j_terms: Vec<JTerm>, k_terms: Vec<KTerm>) -> Result<Self> {
        let mu = signs.underbar_m();
        if j_terms.len() > mu {
            return Err(Error::InvalidClosure(format!(
                "{} indicator terms exceed m̲ = {mu}",
                j_terms.len()
            )));
        }
        for (i, t) in j_terms.iter().enumerate() {
            if !t.w_hat.is_finite() || !t.v.is_finite() {
                return Err(Error::InvalidClosure(format!("non-finite term {i}")));
            }
            if (t.w_hat.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidClosure(format!(
                    "direction {i} has norm {}, expected 1",
                    t.w_hat.norm()
                )));
            }
            for (j, s) in j_terms[..i].iter().enumerate() {
                if (s.w_hat - t.w_hat).norm() <= 1e-12 {
                    return Err(Error::InvalidClosure(format!(
                        "directions {j} and {i} coincide"
                    )));
                }
            }
        }
        for t in &k_terms {
            if t.a != 1 && t.a != -1 {
                return Err(Error::InvalidClosure(format!("sign {} is not ±1", t.a)));
            }
            if !t.w.is_finite() {
                return Err(Error::InvalidClosure("non-finite ReLU weight".into()));
            }
        }
        let kp = k_terms.iter().filter(|t| t.a == 1).count();
        let km = k_terms.len() - kp;
        let nj = j_terms.len();
        if nj + kp > signs.plus_count() || nj + km > signs.minus_count() {
            return Err(Error::InvalidClosure(format!(
                "needs {} positive and {} negative nodes, have {} and {}",
                nj + kp,
                nj + km,
                signs.plus_count(),
                signs.minus_count()
            )));
        }
        Ok(ClosureElement {
            signs,
            j_terms,
            k_terms,
        })
    }

    /// Builds from function-level vectors, i.e. `g = Σ_J I{ŵ·x ≥ 0}(v·x) + Σ_K a σ(w·x)`
    /// without the `1/√m` factor; the stored terms are multiplied by `√m`.
    pub fn from_function_terms(
        signs: SignPattern,
        j_terms: &[(Vec2, Vec2)],
        k_terms: &[(i8, Vec2)],
    ) -> Result<Self> {
        let s = math::sqrt(signs.m() as f64);
        Self::new(
            signs,
            j_terms
                .iter()
                .map(|&(w_hat, v)| JTerm { w_hat, v: s * v })
                .collect(),
            k_terms.iter().map(|&(a, w)| KTerm { a, w: s * w }).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.signs.m()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let x = Vec2::from_angle(theta);
        let mut s = 0.0;
        for t in &self.j_terms {
            if t.w_hat.dot(x) >= 0.0 {
                s += t.v.dot(x);
            }
        }
        for t in &self.k_terms {
            s += t.a as f64 * t.w.dot(x).max(0.0);
        }
        s / math::sqrt(self.m() as f64)
    }

    pub fn to_piecewise(&self) -> PiecewiseTrig {
        let inv = 1.0 / math::sqrt(self.m() as f64);
        let mut breaks = Vec::new();
        let dirs = self
            .j_terms
            .iter()
            .map(|t| t.w_hat)
            .chain(self.k_terms.iter().map(|t| t.w))
            .filter(|w| *w != Vec2::ZERO);
        for w in dirs {
            let phi = w.angle();
            breaks.push(phi - FRAC_PI_2);
            breaks.push(phi + FRAC_PI_2);
        }
        PiecewiseTrig::from_breaks(breaks, |mid| {
            let x = Vec2::from_angle(mid);
            let mut c = [0.0; 3];
            for t in &self.j_terms {
                if t.w_hat.dot(x) >= 0.0 {
                    c[1] += inv * t.v.x;
                    c[2] += inv * t.v.y;
                }
            }
            for t in &self.k_terms {
                if t.w != Vec2::ZERO && t.w.dot(x) >= 0.0 {
                    let a = t.a as f64 * inv;
                    c[1] += a * t.w.x;
                    c[2] += a * t.w.y;
                }
            }
            c
        })
    }

    /// The linear function equal to the anti-symmetric part of the element:
    /// `(1/√m)(½Σ_J v_i + ½Σ_K a_i w_i)`.
    pub fn antisymmetric_linear(&self) -> Vec2 {
        let inv = 1.0 / math::sqrt(self.m() as f64);
        let mut s = Vec2::ZERO;
        for t in &self.j_terms {
            s = s + 0.5 * t.v;
        }
        for t in &self.k_terms {
            s = s + (0.5 * t.a as f64) * t.w;
        }
        inv * s
    }
}

/// Finite network approximating a closure element at scale `h`: each indicator term uses an
/// alternating pair with weights `ŵ/h + u` (positive node) and `(1/h - α)ŵ` (negative node);
/// ReLU terms are copied onto unused nodes of matching sign; other nodes are zero.
pub fn realize_closure(elem: &ClosureElement, h: f64) -> Result<ReluNetwork> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("{h} is not a positive finite number"),
        });
    }
    let signs = &elem.signs;
    let pairs = signs.pairs(elem.j_terms.len())?;
    let mut weights = alloc::vec![Vec2::ZERO; signs.m()];
    let mut used = alloc::vec![false; signs.m()];
    for (t, &(p, n)) in elem.j_terms.iter().zip(pairs.iter()) {
        let (alpha, u) = t.split();
        weights[p] = (1.0 / h) * t.w_hat + u;
        weights[n] = (1.0 / h - alpha) * t.w_hat;
        used[p] = true;
        used[n] = true;
    }
    for t in &elem.k_terms {
        let slot = (0..signs.m())
            .find(|&i| !used[i] && signs.as_slice()[i] == t.a)
            .ok_or_else(|| Error::InvalidClosure("no free node for a ReLU term".into()))?;
        weights[slot] = t.w;
        used[slot] = true;
    }
    ReluNetwork::new(signs.clone(), weights)
}

/// `(2/√m) Σ_J |u_i|^{3/2} √h`, and whether `h α_i < 1` holds for every term (the regime in
/// which the bound is proved).
pub fn realization_bound(elem: &ClosureElement, h: f64) -> (f64, bool) {
    let mut s = 0.0;
    let mut valid = true;
    for t in &elem.j_terms {
        let (alpha, u) = t.split();
        let un = u.norm();
        s += un * math::sqrt(un);
        if h * alpha >= 1.0 {
            valid = false;
        }
    }
    (2.0 / math::sqrt(elem.m() as f64) * s * math::sqrt(h), valid)
}

/// Embeds a network on `m'` nodes (equal numbers of each sign) into `H_{m,a}` with
/// `k = ⌊2m̲/m'⌋` scaled copies, `λ = k⁻¹√(m/m')`, so the function is unchanged.
pub fn replicate(net: &ReluNetwork, signs: &SignPattern) -> Result<ReluNetwork> {
    let mp = net.m();
    let half = net.signs.plus_count();
    if !mp.is_multiple_of(2) || net.signs.minus_count() != half {
        return Err(Error::InvalidNetwork(format!(
            "source network must have m' even with balanced signs (m' = {mp})"
        )));
    }
    let mu = signs.underbar_m();
    if half > mu {
        return Err(Error::InsufficientPairs {
            needed: half,
            available: mu,
        });
    }
    let m = signs.m();
    let k = 2 * mu / mp;
    let lambda = math::sqrt(m as f64 / mp as f64) / k as f64;
    let mut weights = alloc::vec![Vec2::ZERO; m];
    let mut used = alloc::vec![false; m];
    for _ in 0..k {
        for (j, w) in net.weights.iter().enumerate() {
            let a = net.signs.as_slice()[j];
            let slot = (0..m)
                .find(|&i| !used[i] && signs.as_slice()[i] == a)
                .ok_or(Error::InsufficientPairs {
                    needed: half * k,
                    available: mu,
                })?;
            weights[slot] = lambda * *w;
            used[slot] = true;
        }
    }
    ReluNetwork::new(signs.clone(), weights)
}
