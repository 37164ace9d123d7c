use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};

use super::Vec2;

/// An arc `[start, start + width)` of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: f64,
    width: f64,
}

impl Arc {
    pub fn new(start: f64, width: f64) -> Result<Self> {
        // absorb rounding from computing `end - start` of a full turn
        let width = if width > TAU && width <= TAU + 1e-12 { TAU } else { width };
        if !(start.is_finite() && width > 0.0 && width <= TAU) {
            return Err(Error::InvalidArc { start, width });
        }
        Ok(Arc {
            start: math::wrap(start),
            width,
        })
    }

    pub fn full() -> Self {
        Arc {
            start: 0.0,
            width: TAU,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// End angle, not reduced modulo 2π.
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn mid(&self) -> f64 {
        self.start + 0.5 * self.width
    }

    /// Right-closed at the start, open at the end.
    pub fn contains(&self, theta: f64) -> bool {
        math::wrap(theta - self.start) < self.width
    }
}

/// Averaged moments `(1/2π)∫` of `1, cos, sin, cos², cos·sin, sin²` over an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcMoments {
    pub m1: f64,
    pub mc: f64,
    pub ms: f64,
    pub mcc: f64,
    pub mcs: f64,
    pub mss: f64,
}

pub fn arc_moments(arc: &Arc) -> ArcMoments {
    let (s, w) = (arc.start(), arc.width());
    let one = local_integrals([1.0, 0.0, 0.0], s, w);
    let c = local_integrals([0.0, 1.0, 0.0], s, w);
    let sn = local_integrals([0.0, 0.0, 1.0], s, w);
    ArcMoments {
        m1: one[0] / TAU,
        mc: one[1] / TAU,
        ms: one[2] / TAU,
        mcc: c[1] / TAU,
        mcs: c[2] / TAU,
        mss: sn[2] / TAU,
    }
}

/// Integrals over `[-h, h]` of `1`, `1 - cos t`, `(1 - cos t)²` and `sin² t`.
#[derive(Clone, Copy)]
struct Prims {
    w: f64,
    u1: f64,
    u2: f64,
    s2: f64,
}

fn prims(h: f64) -> Prims {
    let w = 2.0 * h;
    let u1 = 2.0 * math::h_minus_sin(h);
    let (u2, s2) = if h < 1.0 {
        let h2 = h * h;
        // p_k = h^{2k+1}/(2k+1)!
        let mut p = h * h2 / 6.0;
        let mut four = 4.0;
        let mut u2 = 0.0;
        let mut s2 = 0.0;
        let mut sign = -1.0;
        for k in 1..16 {
            s2 -= sign * four * p;
            if k >= 2 {
                u2 += sign * (four - 4.0) * p;
            }
            let kf = k as f64;
            p *= h2 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
            four *= 4.0;
            sign = -sign;
        }
        (u2, s2)
    } else {
        let (sh, ch) = math::sin_cos(h);
        (3.0 * h - 4.0 * sh + sh * ch, h - sh * ch)
    };
    Prims { w, u1, u2, s2 }
}

/// `(α, P, Q)` with `c0 + c1 cosθ + c2 sinθ = α - P(1 - cos t) + Q sin t`, `t = θ - mid`.
fn centered(c: [f64; 3], smid: f64, cmid: f64) -> (f64, f64, f64) {
    let p = c[1] * cmid + c[2] * smid;
    let q = -c[1] * smid + c[2] * cmid;
    (c[0] + p, p, q)
}

/// Unnormalized `∫ f·(1, cosθ, sinθ)` over `[start, start + width]` for the piece `f` with
/// coefficients `c`.
pub(crate) fn local_integrals(c: [f64; 3], start: f64, width: f64) -> [f64; 3] {
    let h = 0.5 * width;
    let (smid, cmid) = math::sin_cos(start + h);
    let pr = prims(h);
    let (al, p, q) = centered(c, smid, cmid);
    let i0 = al * pr.w - p * pr.u1;
    let ict = i0 - (al * pr.u1 - p * pr.u2);
    let ist = q * pr.s2;
    [i0, cmid * ict - smid * ist, smid * ict + cmid * ist]
}

/// Unnormalized `∫ f g` over `[start, start + width]` for two pieces.
pub(crate) fn local_product(cf: [f64; 3], cg: [f64; 3], start: f64, width: f64) -> f64 {
    let h = 0.5 * width;
    let (smid, cmid) = math::sin_cos(start + h);
    let pr = prims(h);
    let (af, pf, qf) = centered(cf, smid, cmid);
    let (ag, pg, qg) = centered(cg, smid, cmid);
    af * ag * pr.w - (af * pg + ag * pf) * pr.u1 + pf * pg * pr.u2 + qf * qg * pr.s2
}

/// Averaged second moments `(Mcc, Mcs, Mss)` over `[start, start + width]`.
pub(crate) fn second_moment(start: f64, width: f64) -> [f64; 3] {
    let h = 0.5 * width;
    let (s2m, c2m) = math::sin_cos(2.0 * (start + h));
    let s2h = math::sin(2.0 * h);
    [
        (h + 0.5 * c2m * s2h) / TAU,
        0.5 * s2m * s2h / TAU,
        (h - 0.5 * c2m * s2h) / TAU,
    ]
}

/// Unnormalized `∫ cos(jθ)` over `[start, start + width]`.
pub(crate) fn int_cos_k(j: i64, start: f64, width: f64) -> f64 {
    if j == 0 {
        return width;
    }
    if width == TAU {
        return 0.0;
    }
    let jf = j.unsigned_abs() as f64;
    let h = 0.5 * width;
    2.0 * math::cos(jf * (start + h)) * math::sin(jf * h) / jf
}

/// Unnormalized `∫ sin(jθ)` over `[start, start + width]`.
pub(crate) fn int_sin_k(j: i64, start: f64, width: f64) -> f64 {
    if j == 0 || width == TAU {
        return 0.0;
    }
    let jf = j.unsigned_abs() as f64;
    let h = 0.5 * width;
    let v = 2.0 * math::sin(jf * (start + h)) * math::sin(jf * h) / jf;
    if j < 0 {
        -v
    } else {
        v
    }
}

/// The closed half-circle `{x : w·x ≥ 0}` as `(start, π)`; `None` for `w = 0`.
pub(crate) fn half_circle(w: Vec2) -> Option<f64> {
    if w.x == 0.0 && w.y == 0.0 {
        None
    } else {
        Some(math::wrap(w.angle() - 0.5 * PI))
    }
}

/// Intersection of two arcs given as `(start, width)`; at most two intervals, each returned
/// as `(start, width)` with start expressed relative to the first arc's frame.
pub(crate) fn arc_intersections(a1: f64, w1: f64, a2: f64, w2: f64) -> ([(f64, f64); 2], usize) {
    let mut out = [(0.0, 0.0); 2];
    let mut n = 0;
    let d = math::wrap(a2 - a1);
    let mut push = |lo: f64, hi: f64| {
        let lo = lo.max(0.0);
        let hi = hi.min(w1);
        if hi > lo {
            out[n] = (a1 + lo, hi - lo);
            n += 1;
        }
    };
    if d + w2 <= TAU {
        push(d, d + w2);
    } else {
        push(0.0, d + w2 - TAU);
        push(d, TAU);
    }
    (out, n)
}
