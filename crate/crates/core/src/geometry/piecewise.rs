use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};

use super::arc::{arc_intersections, int_cos_k, int_sin_k, local_integrals, local_product};
use super::{Arc, Vec2};

/// Boundaries closer than this are treated as one.
pub(crate) const BREAK_DEDUP: f64 = 1e-14;
const PARTITION_TOL: f64 = 1e-12;

/// `θ ↦ c0 + c1·cosθ + c2·sinθ` on an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigPiece {
    pub arc: Arc,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TrigPiece {
    pub fn coeffs(&self) -> [f64; 3] {
        [self.c0, self.c1, self.c2]
    }

    /// Evaluates the trigonometric expression (ignores the arc).
    pub fn eval(&self, theta: f64) -> f64 {
        eval_coeffs(self.coeffs(), theta)
    }
}

#[inline]
pub(crate) fn eval_coeffs(c: [f64; 3], theta: f64) -> f64 {
    let (s, co) = math::sin_cos(theta);
    c[0] + c[1] * co + c[2] * s
}

/// Sup-norm, averaged total variation and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvNorm {
    pub sup: f64,
    pub variation: f64,
    pub bv: f64,
}

/// A function on S¹ that is `c0 + c1 cosθ + c2 sinθ` on each arc of a partition.
///
/// Stored as sorted start angles in `[0, 2π)`; piece `i` ends where piece `i + 1` starts and
/// the last piece wraps around to the first start.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseTrig {
    starts: Vec<f64>,
    coefs: Vec<[f64; 3]>,
}

impl PiecewiseTrig {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_coeffs([c, 0.0, 0.0])
    }

    /// The linear function `x ↦ v·x`.
    pub fn linear(v: Vec2) -> Self {
        Self::from_coeffs([0.0, v.x, v.y])
    }

    /// A single trigonometric expression on the whole circle.
    pub fn from_coeffs(c: [f64; 3]) -> Self {
        PiecewiseTrig {
            starts: alloc::vec![0.0],
            coefs: alloc::vec![c],
        }
    }

    /// Builds from explicit pieces, which must partition the circle.
    pub fn from_pieces(mut pieces: Vec<TrigPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidPartition("no pieces".into()));
        }
        pieces.sort_by(|a, b| a.arc.start().total_cmp(&b.arc.start()));
        let total: f64 = pieces.iter().map(|p| p.arc.width()).sum();
        if (total - TAU).abs() > PARTITION_TOL {
            return Err(Error::InvalidPartition(format!("widths sum to {total}")));
        }
        let n = pieces.len();
        for i in 0..n {
            let next = if i + 1 < n {
                pieces[i + 1].arc.start()
            } else {
                pieces[0].arc.start() + TAU
            };
            if (pieces[i].arc.end() - next).abs() > PARTITION_TOL {
                return Err(Error::InvalidPartition(format!(
                    "gap or overlap after piece starting at {}",
                    pieces[i].arc.start()
                )));
            }
        }
        let f = PiecewiseTrig {
            starts: pieces.iter().map(|p| p.arc.start()).collect(),
            coefs: pieces.iter().map(|p| p.coeffs()).collect(),
        };
        Ok(f.canonical())
    }

    /// Builds from arbitrary break angles and a rule giving the coefficients on the segment
    /// containing a given midpoint.
    pub(crate) fn from_breaks(breaks: Vec<f64>, mut coef_at: impl FnMut(f64) -> [f64; 3]) -> Self {
        let starts = dedup_breaks(breaks);
        if starts.is_empty() {
            return Self::from_coeffs(coef_at(PI));
        }
        let n = starts.len();
        let coefs = (0..n)
            .map(|i| {
                let end = if i + 1 < n { starts[i + 1] } else { starts[0] + TAU };
                coef_at(0.5 * (starts[i] + end))
            })
            .collect();
        PiecewiseTrig { starts, coefs }.canonical()
    }

    fn canonical(mut self) -> Self {
        let mut starts = Vec::with_capacity(self.starts.len());
        let mut coefs: Vec<[f64; 3]> = Vec::with_capacity(self.coefs.len());
        for (s, c) in self.starts.iter().zip(self.coefs.iter()) {
            if coefs.last() == Some(c) {
                continue;
            }
            starts.push(*s);
            coefs.push(*c);
        }
        if coefs.len() > 1 && coefs.first() == coefs.last() {
            starts.remove(0);
            coefs.remove(0);
        }
        if coefs.len() == 1 {
            starts[0] = 0.0;
        }
        self.starts = starts;
        self.coefs = coefs;
        self
    }

    pub fn num_pieces(&self) -> usize {
        self.starts.len()
    }

    fn width_of(&self, i: usize) -> f64 {
        let n = self.starts.len();
        if n == 1 {
            TAU
        } else if i + 1 < n {
            self.starts[i + 1] - self.starts[i]
        } else {
            self.starts[0] + TAU - self.starts[i]
        }
    }

    /// `(start, width, coefficients)` for every piece.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, [f64; 3])> + '_ {
        (0..self.starts.len()).map(move |i| (self.starts[i], self.width_of(i), self.coefs[i]))
    }

    pub fn pieces(&self) -> Vec<TrigPiece> {
        self.segments()
            .map(|(s, w, c)| TrigPiece {
                arc: Arc::new(s, w).expect("stored pieces are valid arcs"),
                c0: c[0],
                c1: c[1],
                c2: c[2],
            })
            .collect()
    }

    /// Piece boundaries (empty for a single global expression).
    pub fn breakpoints(&self) -> Vec<f64> {
        if self.starts.len() == 1 {
            Vec::new()
        } else {
            self.starts.clone()
        }
    }

    fn index_at(&self, theta: f64) -> usize {
        let t = math::wrap(theta);
        let idx = self.starts.partition_point(|&s| s <= t);
        if idx == 0 {
            self.starts.len() - 1
        } else {
            idx - 1
        }
    }

    /// Coefficients of the piece containing `theta` (right-continuous).
    pub fn coeffs_at(&self, theta: f64) -> [f64; 3] {
        self.coefs[self.index_at(theta)]
    }

    pub fn eval(&self, theta: f64) -> f64 {
        eval_coeffs(self.coeffs_at(theta), theta)
    }

    /// Pointwise combination on the common refinement.
    pub fn combine(&self, other: &Self, op: impl Fn([f64; 3], [f64; 3]) -> [f64; 3]) -> Self {
        let mut breaks = self.breakpoints();
        breaks.extend(other.breakpoints());
        Self::from_breaks(breaks, |mid| op(self.coeffs_at(mid), other.coeffs_at(mid)))
    }

    pub fn map_coeffs(&self, op: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        PiecewiseTrig {
            starts: self.starts.clone(),
            coefs: self.coefs.iter().map(|&c| op(c)).collect(),
        }
        .canonical()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|c| [s * c[0], s * c[1], s * c[2]])
    }

    pub fn add_linear(&self, v: Vec2) -> Self {
        self.map_coeffs(|c| [c[0], c[1] + v.x, c[2] + v.y])
    }

    /// `θ ↦ f(θ + π)`.
    pub fn shift_pi(&self) -> Self {
        let mut items: Vec<(f64, [f64; 3])> = self
            .starts
            .iter()
            .zip(self.coefs.iter())
            .map(|(&s, &c)| (math::wrap(s - PI), [c[0], -c[1], -c[2]]))
            .collect();
        if items.len() == 1 {
            items[0].0 = 0.0;
        }
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        PiecewiseTrig {
            starts: items.iter().map(|x| x.0).collect(),
            coefs: items.iter().map(|x| x.1).collect(),
        }
        .canonical()
    }

    /// `(f_s, f_a)` with `f_s(θ) = (f(θ) + f(θ+π))/2` and `f_a = f - f_s`.
    pub fn sym_decompose(&self) -> (Self, Self) {
        let shifted = self.shift_pi();
        let fs = self.combine(&shifted, |a, b| {
            [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])]
        });
        let fa = self.sub(&fs);
        (fs, fa)
    }

    /// Averaged `∫ f g` over the circle.
    pub fn inner(&self, other: &Self) -> f64 {
        let mut breaks = self.breakpoints();
        breaks.extend(other.breakpoints());
        let starts = dedup_breaks(breaks);
        if starts.is_empty() {
            return local_product(self.coefs[0], other.coefs[0], 0.0, TAU) / TAU;
        }
        let n = starts.len();
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let end = if i + 1 < n { starts[i + 1] } else { starts[0] + TAU };
            let w = end - starts[i];
            let mid = starts[i] + 0.5 * w;
            terms.push(local_product(self.coeffs_at(mid), other.coeffs_at(mid), starts[i], w));
        }
        math::pairwise_sum(&terms) / TAU
    }

    pub fn norm_sq(&self) -> f64 {
        let terms: Vec<f64> = self.segments().map(|(s, w, c)| local_product(c, c, s, w)).collect();
        math::pairwise_sum(&terms) / TAU
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    /// Averaged `∫ f·(1, cosθ, sinθ)` over the arc `[start, start + width)`.
    pub fn arc_projection(&self, start: f64, width: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for (s, w, c) in self.segments() {
            let (parts, n) = arc_intersections(s, w, start, width);
            for &(a, len) in &parts[..n] {
                let v = local_integrals(c, a, len);
                acc[0] += v[0];
                acc[1] += v[1];
                acc[2] += v[2];
            }
        }
        [acc[0] / TAU, acc[1] / TAU, acc[2] / TAU]
    }

    /// Fourier coefficients `(a, b)` for `k = 0..=kmax` in the convention
    /// `f = Σ a_k sin kθ + b_k cos kθ` (so `a_0 = 0`, `b_0` the mean).
    pub fn fourier(&self, kmax: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = alloc::vec![0.0; kmax + 1];
        let mut b = alloc::vec![0.0; kmax + 1];
        let mut ic = alloc::vec![0.0; kmax + 2];
        let mut is = alloc::vec![0.0; kmax + 2];
        for (s, w, c) in self.segments() {
            for j in 0..kmax + 2 {
                ic[j] = int_cos_k(j as i64, s, w);
                is[j] = int_sin_k(j as i64, s, w);
            }
            b[0] += local_integrals(c, s, w)[0];
            for k in 1..=kmax {
                let sk = c[0] * is[k]
                    + 0.5 * c[1] * (is[k + 1] + is[k - 1])
                    + 0.5 * c[2] * (ic[k - 1] - ic[k + 1]);
                let ck = c[0] * ic[k]
                    + 0.5 * c[1] * (ic[k - 1] + ic[k + 1])
                    + 0.5 * c[2] * (is[k + 1] - is[k - 1]);
                a[k] += sk;
                b[k] += ck;
            }
        }
        b[0] /= TAU;
        for k in 1..=kmax {
            a[k] *= 2.0 / TAU;
            b[k] *= 2.0 / TAU;
        }
        (a, b)
    }

    /// `(angle, |jump|)` at every piece boundary, including the wrap-around one.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        let n = self.starts.len();
        if n == 1 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let prev = if i == 0 { n - 1 } else { i - 1 };
                let t = self.starts[i];
                let left = eval_coeffs(self.coefs[prev], t);
                let right = eval_coeffs(self.coefs[i], t);
                (t, (left - right).abs())
            })
            .collect()
    }

    /// Sup-norm and averaged total variation, both computed analytically.
    pub fn bv_norm(&self) -> BvNorm {
        let mut sup: f64 = 0.0;
        let mut var = 0.0;
        for (s, w, c) in self.segments() {
            let mut pts: Vec<f64> = alloc::vec![s];
            if c[1] != 0.0 || c[2] != 0.0 {
                let phi = math::atan2(c[2], c[1]);
                for crit in [phi, phi + PI] {
                    let rel = math::wrap(crit - s);
                    if rel > 0.0 && rel < w {
                        pts.push(s + rel);
                    }
                }
            }
            pts.push(s + w);
            pts.sort_by(|a, b| a.total_cmp(b));
            let vals: Vec<f64> = pts.iter().map(|&t| eval_coeffs(c, t)).collect();
            for v in &vals {
                sup = sup.max(v.abs());
            }
            for pair in vals.windows(2) {
                var += (pair[1] - pair[0]).abs();
            }
        }
        for (_, j) in self.jumps() {
            var += j;
        }
        let variation = var / TAU;
        BvNorm {
            sup,
            variation,
            bv: sup + variation,
        }
    }

    /// Largest absolute coefficient (a scale for tolerances).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coefs
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// True if every coefficient is within `tol` of zero.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }
}

/// Wraps, sorts and merges break angles closer than [`BREAK_DEDUP`].
pub(crate) fn dedup_breaks(mut breaks: Vec<f64>) -> Vec<f64> {
    for b in breaks.iter_mut() {
        *b = math::wrap(*b);
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(breaks.len());
    for b in breaks {
        match out.last() {
            Some(&last) if b - last <= BREAK_DEDUP => {}
            _ => out.push(b),
        }
    }
    if out.len() > 1 && out[0] + TAU - out[out.len() - 1] <= BREAK_DEDUP {
        out.pop();
    }
    out
}
