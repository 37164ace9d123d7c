use alloc::vec::Vec;

use crate::math::{self, TAU};

use super::piecewise::eval_coeffs;
use super::{BvNorm, DataMeasure, PiecewiseTrig, TrigSeries, Vec2};

/// A target function: a piecewise-trigonometric part plus a finite trigonometric series.
///
/// Network outputs and closure elements are purely piecewise; smoothed targets and higher
/// harmonics such as `cos 2θ` live in the series part.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub pw: PiecewiseTrig,
    pub series: TrigSeries,
}

impl From<PiecewiseTrig> for Signal {
    fn from(pw: PiecewiseTrig) -> Self {
        Signal {
            pw,
            series: TrigSeries::zero(),
        }
    }
}

impl From<TrigSeries> for Signal {
    fn from(series: TrigSeries) -> Self {
        Signal {
            pw: PiecewiseTrig::zero(),
            series,
        }
    }
}

impl Signal {
    pub fn new(pw: PiecewiseTrig, series: TrigSeries) -> Self {
        Signal { pw, series }
    }

    pub fn zero() -> Self {
        PiecewiseTrig::zero().into()
    }

    pub fn is_piecewise(&self) -> bool {
        self.series.is_zero()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.pw.eval(theta) + self.series.eval(theta)
    }

    /// Derivative in θ on the piece containing `theta` (right-continuous).
    pub fn deriv(&self, theta: f64) -> f64 {
        let c = self.pw.coeffs_at(theta);
        let (s, co) = math::sin_cos(theta);
        -c[1] * s + c[2] * co + self.series.deriv(theta)
    }

    pub fn add(&self, o: &Self) -> Self {
        Signal::new(self.pw.add(&o.pw), self.series.add(&o.series))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Signal::new(self.pw.scale(s), self.series.scale(s))
    }

    pub fn add_linear(&self, v: Vec2) -> Self {
        Signal::new(self.pw.add_linear(v), self.series.clone())
    }

    /// Averaged `∫ f g` under the uniform measure.
    pub fn inner(&self, o: &Self) -> f64 {
        let mut v = self.pw.inner(&o.pw) + self.series.inner(&o.series);
        if !o.series.is_zero() {
            v += pw_series_inner(&self.pw, &o.series);
        }
        if !self.series.is_zero() {
            v += pw_series_inner(&o.pw, &self.series);
        }
        v
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq().max(0.0))
    }

    /// `∫ f g dμ`.
    pub fn inner_measure(&self, o: &Self, mu: &DataMeasure) -> f64 {
        match mu {
            DataMeasure::Uniform => self.inner(o),
            DataMeasure::Discrete(atoms) => {
                let terms: Vec<f64> =
                    atoms.iter().map(|&(t, w)| w * self.eval(t) * o.eval(t)).collect();
                math::pairwise_sum(&terms)
            }
        }
    }

    pub fn norm_sq_measure(&self, mu: &DataMeasure) -> f64 {
        self.inner_measure(self, mu)
    }

    /// Averaged `∫ f·(1, cosθ, sinθ)` over `[start, start + width)`.
    pub fn arc_projection(&self, start: f64, width: f64) -> [f64; 3] {
        let mut p = self.pw.arc_projection(start, width);
        if !self.series.is_zero() {
            let q = self.series.arc_projection(start, width);
            for i in 0..3 {
                p[i] += q[i];
            }
        }
        p
    }

    pub fn fourier(&self, kmax: usize) -> (Vec<f64>, Vec<f64>) {
        let (mut a, mut b) = self.pw.fourier(kmax);
        for k in 0..=kmax.min(self.series.degree()) {
            if k < self.series.a.len() {
                a[k] += self.series.a[k];
                b[k] += self.series.b[k];
            }
        }
        (a, b)
    }

    /// `(f_s, f_a)`: antipodally symmetric and anti-symmetric parts.
    pub fn sym_decompose(&self) -> (Self, Self) {
        let (ps, pa) = self.pw.sym_decompose();
        let ss = self.series.filter(|k| k % 2 == 0);
        let sa = self.series.filter(|k| k % 2 == 1);
        (Signal::new(ps, ss), Signal::new(pa, sa))
    }

    /// Sup-norm and averaged total variation. Exact for piecewise signals; with a series part,
    /// critical points are bracketed on a fine grid and refined by bisection.
    pub fn bv_norm(&self) -> BvNorm {
        if self.series.is_zero() {
            return self.pw.bv_norm();
        }
        let mut sup: f64 = 0.0;
        let mut var = 0.0;
        let deg = self.series.degree();
        for (s, w, c) in self.pw.segments() {
            let f = |t: f64| eval_coeffs(c, t) + self.series.eval(t);
            let df = |t: f64| {
                let (sn, co) = math::sin_cos(t);
                -c[1] * sn + c[2] * co + self.series.deriv(t)
            };
            let n = grid_size(w, deg);
            let mut pts = alloc::vec![s];
            pts.extend(critical_points(&df, s, s + w, n));
            pts.push(s + w);
            let vals: Vec<f64> = pts.iter().map(|&t| f(t)).collect();
            for v in &vals {
                sup = sup.max(v.abs());
            }
            for pair in vals.windows(2) {
                var += (pair[1] - pair[0]).abs();
            }
        }
        for (_, j) in self.pw.jumps() {
            var += j;
        }
        let variation = var / TAU;
        BvNorm {
            sup,
            variation,
            bv: sup + variation,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.bv_norm().sup
    }

    /// `sup|f'|` over all pieces (one-sided at piece boundaries).
    pub fn deriv_sup(&self) -> f64 {
        let deg = self.series.degree();
        let mut sup: f64 = 0.0;
        for (s, w, c) in self.pw.segments() {
            let df = |t: f64| {
                let (sn, co) = math::sin_cos(t);
                -c[1] * sn + c[2] * co + self.series.deriv(t)
            };
            let d2f = |t: f64| {
                let (sn, co) = math::sin_cos(t);
                -c[1] * co - c[2] * sn + self.series.deriv2(t)
            };
            let n = grid_size(w, deg + 1);
            let mut pts = alloc::vec![s, s + w];
            pts.extend(critical_points(&d2f, s, s + w, n));
            for t in pts {
                sup = sup.max(df(t).abs());
            }
        }
        sup
    }

    /// `‖f‖_∞ + ‖f'‖_∞`.
    pub fn c1_norm(&self) -> f64 {
        self.sup_norm() + self.deriv_sup()
    }

    /// Angles where the piecewise part jumps by more than `tol`.
    pub fn jump_angles(&self, tol: f64) -> Vec<f64> {
        self.pw
            .jumps()
            .into_iter()
            .filter(|&(_, j)| j > tol)
            .map(|(t, _)| t)
            .collect()
    }
}

/// Averaged `∫ p s` using the exact Fourier coefficients of `p` up to the degree of `s`.
fn pw_series_inner(p: &PiecewiseTrig, s: &TrigSeries) -> f64 {
    let deg = s.degree();
    let (a, b) = p.fourier(deg);
    let mut v = 0.0;
    for k in 0..s.a.len() {
        if k == 0 {
            v += b[0] * s.b[0];
        } else {
            v += 0.5 * (a[k] * s.a[k] + b[k] * s.b[k]);
        }
    }
    v
}

fn grid_size(width: f64, degree: usize) -> usize {
    // a degree-d derivative has at most 2d zeros per turn; 8(d+2) cells leave about four
    // cells between consecutive zeros on average
    let per_turn = 8.0 * (degree as f64 + 2.0);
    (math::ceil(width / TAU * per_turn) as usize).max(16)
}

/// Interior zeros of `df` on `(a, b)`: sign changes on an `n`-cell grid, each refined by the
/// Illinois variant of regula falsi.
pub(crate) fn critical_points(df: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut t0 = a;
    let mut d0 = df(a);
    for i in 1..=n {
        let t1 = if i == n { b } else { a + h * i as f64 };
        let d1 = df(t1);
        if d1 == 0.0 && i < n {
            out.push(t1);
        } else if d0 * d1 < 0.0 {
            out.push(illinois(df, t0, t1, d0, d1));
        }
        t0 = t1;
        d0 = d1;
    }
    out
}

/// Root of `f` in a bracket `[lo, hi]` with `f(lo)·f(hi) < 0`.
fn illinois(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..100 {
        let mut t = (lo * fhi - hi * flo) / (fhi - flo);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        if t <= lo || t >= hi || hi - lo <= 4.0 * f64::EPSILON * (1.0 + t.abs()) {
            return t;
        }
        let ft = f(t);
        if ft == 0.0 {
            return t;
        }
        if (ft < 0.0) == (flo < 0.0) {
            lo = t;
            flo = ft;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (lo + hi)
}
