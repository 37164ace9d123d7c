use alloc::vec::Vec;

use crate::math::{self, TAU};

use super::arc::{int_cos_k, int_sin_k};

/// A finite trigonometric series `b_0 + Σ_{k≥1} a_k sin kθ + b_k cos kθ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigSeries {
    /// Sine coefficients; `a[0]` is ignored and kept at zero.
    pub a: Vec<f64>,
    /// Cosine coefficients; `b[0]` is the constant term.
    pub b: Vec<f64>,
}

impl TrigSeries {
    pub fn zero() -> Self {
        TrigSeries::default()
    }

    pub fn new(mut a: Vec<f64>, mut b: Vec<f64>) -> Self {
        let n = a.len().max(b.len());
        a.resize(n, 0.0);
        b.resize(n, 0.0);
        if n > 0 {
            a[0] = 0.0;
        }
        let mut s = TrigSeries { a, b };
        s.trim();
        s
    }

    /// `amp · cos(kθ)`.
    pub fn cos_k(k: usize, amp: f64) -> Self {
        let mut b = alloc::vec![0.0; k + 1];
        b[k] = amp;
        Self::new(Vec::new(), b)
    }

    /// `amp · sin(kθ)`.
    pub fn sin_k(k: usize, amp: f64) -> Self {
        let mut a = alloc::vec![0.0; k + 1];
        a[k] = amp;
        Self::new(a, Vec::new())
    }

    fn trim(&mut self) {
        while let (Some(&x), Some(&y)) = (self.a.last(), self.b.last()) {
            if x == 0.0 && y == 0.0 {
                self.a.pop();
                self.b.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|&x| x == 0.0)
    }

    /// Highest harmonic present (0 for constants and the zero series).
    pub fn degree(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.b.first().copied().unwrap_or(0.0);
        self.for_each_harmonic(theta, |k, s, c| v += self.a[k] * s + self.b[k] * c);
        v
    }

    /// First derivative in θ.
    pub fn deriv(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        self.for_each_harmonic(theta, |k, s, c| {
            v += k as f64 * (self.a[k] * c - self.b[k] * s);
        });
        v
    }

    /// Second derivative in θ.
    pub fn deriv2(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        self.for_each_harmonic(theta, |k, s, c| {
            let kf = k as f64;
            v -= kf * kf * (self.a[k] * s + self.b[k] * c);
        });
        v
    }

    /// Calls `f(k, sin kθ, cos kθ)` for `k = 1..=degree`. Harmonics come from the angle-addition
    /// recurrence, re-anchored with a direct evaluation every 64 steps.
    fn for_each_harmonic(&self, theta: f64, mut f: impl FnMut(usize, f64, f64)) {
        let (s1, c1) = math::sin_cos(theta);
        let (mut s, mut c) = (0.0, 1.0);
        for k in 1..self.a.len() {
            if k % 64 == 0 {
                (s, c) = math::sin_cos(k as f64 * theta);
            } else {
                (s, c) = (s * c1 + c * s1, c * c1 - s * s1);
            }
            f(k, s, c);
        }
    }

    fn coef(&self, k: usize) -> (f64, f64) {
        (
            self.a.get(k).copied().unwrap_or(0.0),
            self.b.get(k).copied().unwrap_or(0.0),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.a.len().max(o.a.len());
        let (a, b) = (0..n)
            .map(|k| {
                let (x1, y1) = self.coef(k);
                let (x2, y2) = o.coef(k);
                (x1 + x2, y1 + y2)
            })
            .unzip();
        Self::new(a, b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.a.iter().map(|x| s * x).collect(),
            self.b.iter().map(|x| s * x).collect(),
        )
    }

    /// Keeps the harmonics `k` with `keep(k)`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        let n = self.a.len();
        Self::new(
            (0..n).map(|k| if keep(k) { self.a[k] } else { 0.0 }).collect(),
            (0..n).map(|k| if keep(k) { self.b[k] } else { 0.0 }).collect(),
        )
    }

    /// Averaged `∫ s²` by Parseval.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Averaged `∫ s t` by Parseval.
    pub fn inner(&self, o: &Self) -> f64 {
        let n = self.a.len().min(o.a.len());
        let mut v = 0.0;
        for k in 0..n {
            let (x1, y1) = self.coef(k);
            let (x2, y2) = o.coef(k);
            if k == 0 {
                v += y1 * y2;
            } else {
                v += 0.5 * (x1 * x2 + y1 * y2);
            }
        }
        v
    }

    /// Averaged `∫ s·(1, cosθ, sinθ)` over `[start, start + width)`.
    pub fn arc_projection(&self, start: f64, width: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for k in 0..self.a.len() {
            let (ak, bk) = self.coef(k);
            if ak == 0.0 && bk == 0.0 {
                continue;
            }
            let ki = k as i64;
            acc[0] += ak * int_sin_k(ki, start, width) + bk * int_cos_k(ki, start, width);
            // sin kθ cosθ = (sin(k+1)θ + sin(k-1)θ)/2, cos kθ cosθ = (cos(k+1)θ + cos(k-1)θ)/2
            acc[1] += 0.5
                * (ak * (int_sin_k(ki + 1, start, width) + int_sin_k(ki - 1, start, width))
                    + bk * (int_cos_k(ki + 1, start, width) + int_cos_k(ki - 1, start, width)));
            // sin kθ sinθ = (cos(k-1)θ - cos(k+1)θ)/2, cos kθ sinθ = (sin(k+1)θ - sin(k-1)θ)/2
            acc[2] += 0.5
                * (ak * (int_cos_k(ki - 1, start, width) - int_cos_k(ki + 1, start, width))
                    + bk * (int_sin_k(ki + 1, start, width) - int_sin_k(ki - 1, start, width)));
        }
        [acc[0] / TAU, acc[1] / TAU, acc[2] / TAU]
    }
}
